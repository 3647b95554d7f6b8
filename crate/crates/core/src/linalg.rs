//! Exact sparse linear algebra over ℚ(i).
//!
//! Operator matrices in the monomial bases are extremely sparse, so matrices
//! are stored row-wise as sorted `(column, coefficient)` pairs. Elimination
//! (reduced row echelon form, kernels, solves) densifies one matrix at a
//! time; RREF over a field is unique, which is what makes the reported bases
//! canonical.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::GaussianRational as Q;

/// A dense coordinate vector.
pub type QVec = Vec<Q>;

/// Sparse matrix over ℚ(i) with exact arithmetic throughout.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    nrows: usize,
    ncols: usize,
    /// Per-row entries, sorted by column, zero coefficients never stored.
    rows: Vec<Vec<(usize, Q)>>,
}

impl QMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i].push((i, Q::one()));
        }
        m
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            if v.is_zero() {
                continue;
            }
            match acc[r].remove(&c) {
                Some(old) => {
                    let sum = &old + &v;
                    if !sum.is_zero() {
                        acc[r].insert(c, sum);
                    }
                }
                None => {
                    acc[r].insert(c, v);
                }
            }
        }
        Self {
            nrows,
            ncols,
            rows: acc.into_iter().map(|m| m.into_iter().collect()).collect(),
        }
    }

    pub fn from_dense_rows(rows: Vec<QVec>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let sparse_rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged rows");
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Self {
            nrows,
            ncols,
            rows: sparse_rows,
        }
    }

    /// Builds a matrix column by column.
    pub fn from_columns(nrows: usize, columns: &[QVec]) -> Self {
        let mut m = Self::zero(nrows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[r].push((c, v.clone()));
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match self.rows[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(idx) => self.rows[r][idx].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn row(&self, r: usize) -> &[(usize, Q)] {
        &self.rows[r]
    }

    /// First nonzero entry in row-major order, for failure witnesses.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Q)> {
        self.rows
            .iter()
            .enumerate()
            .find(|(_, row)| !row.is_empty())
            .map(|(r, row)| (r, row[0].0, row[0].1.clone()))
    }

    pub fn scale(&self, factor: &Q) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nrows, self.ncols);
        }
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v * factor)).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    fn zip_rows(a: &[(usize, Q)], b: &[(usize, Q)], subtract: bool) -> Vec<(usize, Q)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                    let v = if subtract { va - vb } else { va + vb };
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ca, va)), Some((cb, _))) if ca < cb => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                (Some(_), Some((cb, vb))) => {
                    out.push((*cb, if subtract { -vb.clone() } else { vb.clone() }));
                    j += 1;
                }
                (Some((ca, va)), None) => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                (None, Some((cb, vb))) => {
                    out.push((*cb, if subtract { -vb.clone() } else { vb.clone() }));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| Self::zip_rows(a, b, false))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| Self::zip_rows(a, b, true))
                .collect(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                left: self.nrows * self.ncols,
                right: other.nrows * other.ncols,
            });
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch {
                left: self.ncols,
                right: other.nrows,
            });
        }
        let mut rows = Vec::with_capacity(self.nrows);
        let mut scratch: BTreeMap<usize, Q> = BTreeMap::new();
        for row in &self.rows {
            scratch.clear();
            for (l, a) in row {
                for (c, b) in &other.rows[*l] {
                    let term = a * b;
                    match scratch.remove(c) {
                        Some(old) => {
                            let sum = &old + &term;
                            if !sum.is_zero() {
                                scratch.insert(*c, sum);
                            }
                        }
                        None => {
                            if !term.is_zero() {
                                scratch.insert(*c, term);
                            }
                        }
                    }
                }
            }
            rows.push(scratch.iter().map(|(c, v)| (*c, v.clone())).collect());
        }
        Ok(Self {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        })
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[Q]) -> Result<QVec> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                left: self.ncols,
                right: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (c, a) in row {
                    if !v[*c].is_zero() {
                        acc = &acc + &(a * &v[*c]);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    /// Conjugate transpose: the adjoint with respect to the standard
    /// hermitian pairing on coordinates.
    pub fn conjugate_transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.conjugate()));
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v.conjugate())).collect())
                .collect(),
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn stack_vertical(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                left: self.ncols,
                right: other.ncols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self {
            nrows: self.nrows + other.nrows,
            ncols: self.ncols,
            rows,
        })
    }

    pub fn to_dense(&self) -> Vec<QVec> {
        let mut dense = vec![vec![Q::zero(); self.ncols]; self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                dense[r][*c] = v.clone();
            }
        }
        dense
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// RREF over a field is unique, independent of row order, which makes
    /// every basis derived from it canonical.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut dense = self.to_dense();
        let pivots = rref_in_place(&mut dense, self.ncols);
        let kept: Vec<QVec> = dense.into_iter().filter(|r| !is_zero_row(r)).collect();
        (Self::from_dense_rows_with_width(kept, self.ncols), pivots)
    }

    fn from_dense_rows_with_width(rows: Vec<QVec>, ncols: usize) -> Self {
        if rows.is_empty() {
            return Self::zero(0, ncols);
        }
        let m = Self::from_dense_rows(rows);
        debug_assert_eq!(m.ncols, ncols);
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the null space `{x : self·x = 0}`.
    ///
    /// The vectors are returned in reduced echelon form over the coordinate
    /// order (leading coefficient one), so equal kernels yield identical
    /// bases.
    pub fn kernel_basis(&self) -> Vec<QVec> {
        let (rref, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut map = vec![None; self.ncols];
            for (row_idx, col) in pivots.iter().enumerate() {
                map[*col] = Some(row_idx);
            }
            map
        };
        let rref_dense = rref.to_dense();
        let mut basis = Vec::new();
        for free_col in 0..self.ncols {
            if pivot_set[free_col].is_some() {
                continue;
            }
            let mut v = vec![Q::zero(); self.ncols];
            v[free_col] = Q::one();
            for (row_idx, pivot_col) in pivots.iter().enumerate() {
                let coeff = &rref_dense[row_idx][free_col];
                if !coeff.is_zero() {
                    v[*pivot_col] = -coeff.clone();
                }
            }
            basis.push(v);
        }
        canonical_span(basis)
    }

    /// Canonical basis of the column space.
    pub fn column_space_basis(&self) -> Vec<QVec> {
        let columns: Vec<QVec> = self.transpose().to_dense();
        canonical_span(columns)
    }

    /// One solution of `self·x = b`, with free variables set to zero.
    /// Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<QVec> {
        assert_eq!(b.len(), self.nrows, "rhs length mismatch");
        let mut dense = self.to_dense();
        for (r, row) in dense.iter_mut().enumerate() {
            row.push(b[r].clone());
        }
        let pivots = rref_in_place(&mut dense, self.ncols + 1);
        // Inconsistent iff the augmented column is a pivot.
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.ncols];
        for (row_idx, col) in pivots.iter().enumerate() {
            x[*col] = dense[row_idx][self.ncols].clone();
        }
        Some(x)
    }
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{} ({} nnz)", self.nrows, self.ncols, self.nnz())?;
        if self.nrows <= 16 && self.ncols <= 16 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

fn is_zero_row(row: &[Q]) -> bool {
    row.iter().all(Q::is_zero)
}

/// In-place Gauss–Jordan elimination on dense rows (the trailing columns
/// beyond `limit` ride along, used for augmented solves). Returns pivot
/// columns in order.
fn rref_in_place(rows: &mut [QVec], limit: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..limit {
        if pivot_row == nrows {
            break;
        }
        let Some(src) = (pivot_row..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = rows[pivot_row][col].inverse().expect("pivot is nonzero");
        if !inv.is_one() {
            for v in rows[pivot_row].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        for r in 0..nrows {
            if r == pivot_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut rows[r][col], Q::zero());
            // row_r -= factor * pivot row; the pivot row has a 1 at `col`.
            let (pivot_slice, target) = if r > pivot_row {
                let (a, b) = rows.split_at_mut(r);
                (&a[pivot_row], &mut b[0])
            } else {
                let (a, b) = rows.split_at_mut(pivot_row);
                (&b[0], &mut a[r])
            };
            for (idx, pv) in pivot_slice.iter().enumerate() {
                if idx == col || pv.is_zero() {
                    continue;
                }
                target[idx] = &target[idx] - &(&factor * pv);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Canonicalizes a list of spanning vectors into the unique reduced-echelon
/// basis of their span.
pub fn canonical_span(vectors: Vec<QVec>) -> Vec<QVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let width = vectors[0].len();
    let mut dense: Vec<QVec> = vectors;
    rref_in_place(&mut dense, width);
    dense.retain(|r| !is_zero_row(r));
    dense
}

/// True if the two vector lists span the same subspace.
pub fn spans_equal(a: Vec<QVec>, b: Vec<QVec>) -> bool {
    canonical_span(a) == canonical_span(b)
}

/// True if `v` lies in the span of `basis`.
pub fn in_span(v: &[Q], basis: &[QVec]) -> bool {
    if v.iter().all(Q::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let columns: Vec<QVec> = basis.to_vec();
    let m = QMatrix::from_columns(v.len(), &columns);
    m.solve(v).is_some()
}

/// Hermitian inner product of coordinate vectors, conjugate-linear in the
/// second slot.
pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * &y.conjugate());
        }
    }
    acc
}
