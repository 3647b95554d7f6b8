//! Exterior monomial calculus over a fixed coframe of `2n` covectors.
//!
//! Monomials are strictly increasing index sets stored as bitmasks; forms are
//! sparse ℚ(i)-linear combinations of monomials. The declared coframe is
//! orthonormal and its file order fixes the orientation, so the Hodge star,
//! the hermitian inner product and interior products are all exact
//! combinatorial sign computations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::QVec;
use crate::scalar::GaussianRational as Q;

/// An exterior monomial `e^{i_1} ∧ … ∧ e^{i_p}` with `i_1 < … < i_p`,
/// encoded as a bitmask (bit `t` set means index `t+1` is present). The
/// empty set is the degree-zero monomial `1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_mask(mask: u32) -> Self {
        Monomial(mask)
    }

    /// Builds a monomial from 1-based indices; duplicate indices collapse.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in indices {
            assert!((1..=32).contains(&i), "index out of range");
            mask |= 1 << (i - 1);
        }
        Monomial(mask)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0 & (1 << (index - 1)) != 0
    }

    /// 1-based indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        (1..=32).filter(|i| self.contains(*i)).collect()
    }

    pub fn complement(&self, dim: usize) -> Self {
        let full = if dim == 32 { u32::MAX } else { (1u32 << dim) - 1 };
        Monomial(full & !self.0)
    }

    /// Koszul sign of `self ∧ other` (±1), or `None` when indices repeat.
    /// The sign is the parity of the number of pairs `(i, j)` with
    /// `i ∈ self`, `j ∈ other`, `i > j`.
    pub fn wedge_sign(&self, other: &Monomial) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            inversions += (self.0 >> (j + 1)).count_ones();
            rest &= rest - 1;
        }
        Some(if inversions % 2 == 0 { 1 } else { -1 })
    }

    /// Sign of the permutation sending `(1, …, 2n)` to `(I, I^c)`, both
    /// blocks ascending.
    pub fn star_sign(&self, dim: usize) -> i32 {
        self.wedge_sign(&self.complement(dim))
            .expect("complement is disjoint")
    }

    /// Signed deletion of one index: `ι_{e_k}(e^I)`.
    pub fn delete(&self, index: usize) -> Option<(i32, Monomial)> {
        if !self.contains(index) {
            return None;
        }
        let below = (self.0 & ((1 << (index - 1)) - 1)).count_ones();
        let sign = if below % 2 == 0 { 1 } else { -1 };
        Some((sign, Monomial(self.0 & !(1 << (index - 1)))))
    }
}

impl Ord for Monomial {
    /// Lexicographic order on the ascending index tuples, shorter prefixes
    /// first. This is the canonical basis order everywhere.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            return std::cmp::Ordering::Equal;
        }
        let (mut a, mut b) = (self.0, other.0);
        loop {
            match (a, b) {
                (0, 0) => return std::cmp::Ordering::Equal,
                (0, _) => return std::cmp::Ordering::Less,
                (_, 0) => return std::cmp::Ordering::Greater,
                _ => {
                    let ia = a.trailing_zeros();
                    let ib = b.trailing_zeros();
                    match ia.cmp(&ib) {
                        std::cmp::Ordering::Equal => {
                            a &= a - 1;
                            b &= b - 1;
                        }
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(
            f,
            "e{}",
            self.indices()
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Binomial coefficient as usize; zero outside the valid range.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// The canonical ordered monomial basis of `Λ^j` of a `dim`-dimensional
/// coframe: all degree-`j` monomials in lexicographic index order.
#[derive(Clone)]
pub struct DegreeBasis {
    dim: usize,
    degree: usize,
    monomials: Vec<Monomial>,
    positions: BTreeMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn new(dim: usize, degree: i64) -> Self {
        if degree < 0 || degree as usize > dim {
            return Self {
                dim,
                degree: 0,
                monomials: Vec::new(),
                positions: BTreeMap::new(),
            };
        }
        let degree = degree as usize;
        let mut monomials = Vec::with_capacity(binomial(dim, degree));
        let mut current: Vec<usize> = (1..=degree).collect();
        if degree == 0 {
            monomials.push(Monomial::ONE);
        } else if degree <= dim {
            loop {
                monomials.push(Monomial::from_indices(&current));
                // next combination in lexicographic order
                let mut t = degree;
                while t > 0 && current[t - 1] == dim - (degree - t) {
                    t -= 1;
                }
                if t == 0 {
                    break;
                }
                current[t - 1] += 1;
                for u in t..degree {
                    current[u] = current[u - 1] + 1;
                }
            }
        }
        let positions = monomials
            .iter()
            .enumerate()
            .map(|(idx, m)| (*m, idx))
            .collect();
        Self {
            dim,
            degree,
            monomials,
            positions,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, idx: usize) -> Monomial {
        self.monomials[idx]
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.positions.get(m).copied()
    }
}

/// A sparse, graded combination of exterior monomials with ℚ(i)
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(dim, Monomial::ONE, Q::one())
    }

    pub fn monomial(dim: usize, m: Monomial, coeff: Q) -> Self {
        let mut f = Self::zero(dim);
        f.add_term(m, coeff);
        f
    }

    /// Degree-one coframe covector `e^index` (1-based).
    pub fn covector(dim: usize, index: usize) -> Self {
        assert!(index >= 1 && index <= dim);
        Self::monomial(dim, Monomial::from_indices(&[index]), Q::one())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = &old + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    /// The common degree of all monomials, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous parts, ascending by degree.
    pub fn homogeneous_parts(&self) -> Vec<(usize, Form)> {
        let mut parts: BTreeMap<usize, Form> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree())
                .or_insert_with(|| Form::zero(self.dim))
                .add_term(*m, c.clone());
        }
        parts.into_iter().collect()
    }

    fn check_dim(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Q) -> Form {
        if factor.is_zero() {
            return Form::zero(self.dim);
        }
        Form {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Q::one())
    }

    /// Graded-commutative wedge product with exact Koszul signs.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        let mut out = Form::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(sign) = ma.wedge_sign(mb) {
                    let mut coeff = ca * cb;
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    out.add_term(Monomial::from_mask(ma.mask() | mb.mask()), coeff);
                }
            }
        }
        Ok(out)
    }

    /// Hodge star for the declared-orthonormal coframe, extended
    /// complex-linearly. On a monomial `e^I` this is `ε(I)·e^{I^c}` where
    /// `ε(I)` is the sign of the permutation `(1,…,2n) ↦ (I, I^c)`.
    pub fn star(&self) -> Form {
        let mut out = Form::zero(self.dim);
        for (m, c) in &self.terms {
            let sign = m.star_sign(self.dim);
            let coeff = if sign < 0 { -c.clone() } else { c.clone() };
            out.add_term(m.complement(self.dim), coeff);
        }
        out
    }

    /// Hermitian inner product: linear in the first slot, conjugate-linear
    /// in the second; ordered monomials of the coframe are orthonormal.
    pub fn inner(&self, other: &Form) -> Result<Q> {
        self.check_dim(other)?;
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                acc = &acc + &(c * &d.conjugate());
            }
        }
        Ok(acc)
    }

    /// Interior product by a real degree-one form: the formal adjoint of
    /// wedging with `alpha` under the inner product.
    pub fn interior(&self, alpha: &Form) -> Result<Form> {
        self.check_dim(alpha)?;
        if !alpha.is_zero() && alpha.degree() != Some(1) {
            return Err(Error::InvalidArgument(
                "interior product requires a degree-1 form".into(),
            ));
        }
        if alpha.terms.values().any(|c| !c.is_real()) {
            return Err(Error::InvalidArgument(
                "interior product requires real coefficients".into(),
            ));
        }
        let mut out = Form::zero(self.dim);
        for (ma, ca) in &alpha.terms {
            let index = ma.indices()[0];
            for (m, c) in &self.terms {
                if let Some((sign, deleted)) = m.delete(index) {
                    let mut coeff = ca * c;
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    out.add_term(deleted, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Conjugates all coefficients (the real coframe is fixed pointwise).
    pub fn conjugate(&self) -> Form {
        Form {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.conjugate()))
                .collect(),
        }
    }

    /// Extends `index ↦ images[index-1]` as an algebra homomorphism. Images
    /// must be degree-one (or zero) forms; they may live over a different
    /// ambient interpretation of the same dimension.
    pub fn substitute(&self, images: &[Form]) -> Result<Form> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: images.len(),
            });
        }
        let out_dim = images
            .first()
            .map(Form::ambient_dim)
            .unwrap_or(self.dim);
        let mut out = Form::zero(out_dim);
        for (m, c) in &self.terms {
            let mut acc = Form::monomial(out_dim, Monomial::ONE, c.clone());
            for i in m.indices() {
                acc = acc.wedge(&images[i - 1])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Coordinates with respect to the canonical basis of the form's degree.
    pub fn to_vector(&self, basis: &DegreeBasis) -> Result<QVec> {
        let mut v = vec![Q::zero(); basis.dim()];
        for (m, c) in &self.terms {
            let Some(idx) = basis.position(m) else {
                return Err(Error::DegreeMismatch {
                    expected: basis.degree() as i64,
                    found: m.degree() as i64,
                });
            };
            v[idx] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(basis: &DegreeBasis, v: &[Q]) -> Form {
        assert_eq!(v.len(), basis.dim());
        let mut f = Form::zero(basis.ambient_dim());
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                f.add_term(basis.monomial(idx), c.clone());
            }
        }
        f
    }
}

impl fmt::Debug for Form {
    fmt_form_debug!();
}

macro_rules! fmt_form_debug {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.is_zero() {
                return write!(f, "0");
            }
            let parts: Vec<String> = self
                .terms
                .iter()
                .map(|(m, c)| format!("({c})·{m:?}"))
                .collect();
            write!(f, "{}", parts.join(" + "))
        }
    };
}
use fmt_form_debug;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use proptest::prelude::*;

    fn q(v: i64) -> Q {
        GaussianRational::from_integer(v)
    }

    fn x(dim: usize, indices: &[usize]) -> Form {
        Form::monomial(dim, Monomial::from_indices(indices), Q::one())
    }

    #[test]
    fn wedge_signs() {
        let dim = 6;
        // x^1 ∧ x^3 = x^{13}
        assert_eq!(x(dim, &[1]).wedge(&x(dim, &[3])).unwrap(), x(dim, &[1, 3]));
        // x^3 ∧ x^1 = -x^{13}
        assert_eq!(
            x(dim, &[3]).wedge(&x(dim, &[1])).unwrap(),
            x(dim, &[1, 3]).neg()
        );
        // x^1 ∧ x^1 = 0
        assert!(x(dim, &[1]).wedge(&x(dim, &[1])).unwrap().is_zero());
    }

    #[test]
    fn star_on_basic_monomials() {
        let dim = 6;
        // *(1) is the volume monomial.
        assert_eq!(Form::one(dim).star(), x(dim, &[1, 2, 3, 4, 5, 6]));
        // *(e^1) = +e^{23456}
        assert_eq!(x(dim, &[1]).star(), x(dim, &[2, 3, 4, 5, 6]));
    }

    #[test]
    fn inner_product_conventions() {
        let dim = 6;
        let a = x(dim, &[1, 3]);
        assert_eq!(a.inner(&a).unwrap(), q(1));
        // distinct monomials are orthogonal
        let b = x(dim, &[2, 4]);
        assert_eq!(a.inner(&b).unwrap(), q(0));
        // sesquilinearity: ⟨i·x^1, x^1⟩ = i, ⟨x^1, i·x^1⟩ = -i
        let e1 = x(dim, &[1]);
        let ie1 = e1.scale(&GaussianRational::i());
        assert_eq!(ie1.inner(&e1).unwrap(), GaussianRational::i());
        assert_eq!(e1.inner(&ie1).unwrap(), -GaussianRational::i());
    }

    #[test]
    fn interior_deletes_indices() {
        let dim = 6;
        let alpha = x(dim, &[1]);
        // ι_{x^1}(x^{13}) = x^3
        assert_eq!(x(dim, &[1, 3]).interior(&alpha).unwrap(), x(dim, &[3]));
        // index absent
        assert!(x(dim, &[2, 3]).interior(&alpha).unwrap().is_zero());
    }

    #[test]
    fn degree_basis_is_lexicographic() {
        let basis = DegreeBasis::new(4, 2);
        let listed: Vec<Vec<usize>> = basis.monomials().iter().map(|m| m.indices()).collect();
        assert_eq!(
            listed,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(basis.dim(), binomial(4, 2));
    }

    #[test]
    fn out_of_range_degrees_are_empty() {
        assert_eq!(DegreeBasis::new(6, -1).dim(), 0);
        assert_eq!(DegreeBasis::new(6, 7).dim(), 0);
        assert_eq!(DegreeBasis::new(6, 0).dim(), 1);
    }

    fn arb_monomial(dim: usize, degree: usize) -> impl Strategy<Value = Monomial> {
        proptest::sample::subsequence((1..=dim).collect::<Vec<_>>(), degree)
            .prop_map(|idx| Monomial::from_indices(&idx))
    }

    fn arb_form(dim: usize, degree: usize) -> impl Strategy<Value = Form> {
        proptest::collection::vec((arb_monomial(dim, degree), -9i64..=9, -9i64..=9), 1..4)
            .prop_map(move |terms| {
                let mut f = Form::zero(dim);
                for (m, re, im) in terms {
                    f.add_term(
                        m,
                        Q::new(crate::scalar::rat(re, 1), crate::scalar::rat(im, 1)),
                    );
                }
                f
            })
    }

    proptest! {
        #[test]
        fn wedge_is_associative(
            a in arb_monomial(6, 2),
            b in arb_monomial(6, 1),
            c in arb_monomial(6, 2),
        ) {
            let dim = 6;
            let fa = Form::monomial(dim, a, Q::one());
            let fb = Form::monomial(dim, b, Q::one());
            let fc = Form::monomial(dim, c, Q::one());
            let left = fa.wedge(&fb).unwrap().wedge(&fc).unwrap();
            let right = fa.wedge(&fb.wedge(&fc).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn wedge_is_graded_commutative(
            da in 0usize..4, db in 0usize..4,
            seed_a in 0u32..u32::MAX, seed_b in 0u32..u32::MAX,
        ) {
            let dim = 6;
            // pseudorandom masks of the requested degrees
            let pick = |seed: u32, degree: usize| {
                let mut mask = 0u32;
                let mut s = seed;
                while (mask.count_ones() as usize) < degree {
                    s = s.wrapping_mul(1664525).wrapping_add(1013904223);
                    mask |= 1 << (s % dim as u32);
                }
                Monomial::from_mask(mask)
            };
            let a = Form::monomial(dim, pick(seed_a, da), Q::one());
            let b = Form::monomial(dim, pick(seed_b, db), Q::one());
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let expected = if (da * db) % 2 == 1 { ba.neg() } else { ba };
            prop_assert_eq!(ab, expected);
        }

        #[test]
        fn star_star_is_plus_minus_identity(degree in 0usize..=6, seed in 0u32..u32::MAX) {
            let dim = 6;
            let mut mask = 0u32;
            let mut s = seed;
            while (mask.count_ones() as usize) < degree {
                s = s.wrapping_mul(1664525).wrapping_add(1013904223);
                mask |= 1 << (s % dim as u32);
            }
            let m = Monomial::from_mask(mask);
            let f = Form::monomial(dim, m, Q::one());
            let twice = f.star().star();
            let expected = if degree % 2 == 1 { f.neg() } else { f };
            prop_assert_eq!(twice, expected);
        }

        #[test]
        fn wedge_interior_adjointness(
            beta in arb_form(6, 2),
            gamma in arb_form(6, 3),
        ) {
            // ⟨x^1 ∧ β, γ⟩ = ⟨β, ι_{x^1} γ⟩
            let alpha = Form::covector(6, 1);
            let lhs = alpha.wedge(&beta).unwrap().inner(&gamma).unwrap();
            let rhs = beta.inner(&gamma.interior(&alpha).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inner_product_is_positive_definite(f in arb_form(6, 2)) {
            let norm = f.inner(&f).unwrap();
            prop_assert!(norm.is_real());
            prop_assert!(norm.re() >= &crate::scalar::rat(0, 1));
            prop_assert_eq!(norm.is_zero(), f.is_zero());
        }
    }

    #[test]
    fn star_sign_matches_direct_permutation_count() {
        // Independent oracle: count inversions of the explicit permutation.
        for dim in [4usize, 6] {
            for degree in 0..=dim {
                let basis = DegreeBasis::new(dim, degree as i64);
                for m in basis.monomials() {
                    let mut perm: Vec<usize> = m.indices();
                    perm.extend(m.complement(dim).indices());
                    let mut inversions = 0;
                    for i in 0..perm.len() {
                        for j in (i + 1)..perm.len() {
                            if perm[i] > perm[j] {
                                inversions += 1;
                            }
                        }
                    }
                    let expected = if inversions % 2 == 0 { 1 } else { -1 };
                    assert_eq!(m.star_sign(dim), expected, "monomial {m:?}");
                }
            }
        }
    }
}
