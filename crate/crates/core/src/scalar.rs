//! Exact Gaussian-rational scalars: the field ℚ(i) of complex numbers with
//! arbitrary-precision rational real and imaginary parts.
//!
//! Every coefficient in the engine lives here. Values are kept in a canonical
//! normal form (components in lowest terms, positive denominators), equality
//! is structural, and the string grammar below is the bit-exact number format
//! shared by model files and machine-readable reports:
//!
//! ```text
//! scalar := rat ( ('+'|'-') rat 'i' )?
//! rat    := ['+'|'-'] int ( '/' uint )?
//! ```

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, re-exported as the twist-parameter type.
pub type Rational = BigRational;

/// An element of ℚ(i), stored as normalized real and imaginary rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        // BigRational::new / arithmetic keep lowest terms and positive
        // denominators, so components are already canonical.
        Self { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The fraction `num/den` as a real scalar.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    /// `i^e` for any integer exponent.
    pub fn i_pow(e: i64) -> Self {
        match e.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = z·conj(z), a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero; use [`GaussianRational::checked_div`]
    /// where the divisor is not known to be nonzero.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

/// Formats a rational in the grammar's canonical form: lowest terms, `/den`
/// omitted when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Strict parser for `['+'|'-'] int ('/' uint)?`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let (value, rest) = scan_rational(text, 0, "rational")?;
    if !rest.is_empty() {
        return Err(Error::Parse {
            context: "rational",
            token: rest.to_string(),
            position: text.len() - rest.len(),
        });
    }
    Ok(value)
}

fn scan_rational<'a>(
    text: &'a str,
    offset: usize,
    context: &'static str,
) -> Result<(BigRational, &'a str)> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let negative = match bytes.first() {
        Some(b'-') => {
            pos += 1;
            true
        }
        Some(b'+') => {
            pos += 1;
            false
        }
        _ => false,
    };
    let digits_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == digits_start {
        return Err(Error::Parse {
            context,
            token: text[pos..].chars().take(8).collect::<String>(),
            position: offset + pos,
        });
    }
    let mut numer: BigInt = text[digits_start..pos].parse().expect("digits");
    if negative {
        numer = -numer;
    }
    let denom = if pos < bytes.len() && bytes[pos] == b'/' {
        pos += 1;
        let den_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == den_start {
            return Err(Error::Parse {
                context,
                token: text[pos..].chars().take(8).collect::<String>(),
                position: offset + pos,
            });
        }
        let den: BigInt = text[den_start..pos].parse().expect("digits");
        if den.is_zero() {
            return Err(Error::Parse {
                context,
                token: text[den_start..pos].to_string(),
                position: offset + den_start,
            });
        }
        den
    } else {
        BigInt::one()
    };
    Ok((BigRational::new(numer, denom), &text[pos..]))
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let context = "scalar";
        let (re, rest) = scan_rational(text, 0, context)?;
        if rest.is_empty() {
            return Ok(Self::from_rational(re));
        }
        let consumed = text.len() - rest.len();
        let sign = match rest.as_bytes()[0] {
            b'+' => BigRational::one(),
            b'-' => -BigRational::one(),
            _ => {
                return Err(Error::Parse {
                    context,
                    token: rest.chars().take(8).collect(),
                    position: consumed,
                });
            }
        };
        let (im_abs, rest) = scan_rational(&rest[1..], consumed + 1, context)?;
        if rest != "i" {
            return Err(Error::Parse {
                context,
                token: rest.chars().take(8).collect(),
                position: text.len() - rest.len(),
            });
        }
        Ok(Self::new(re, sign * im_abs))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}i",
            format_rational(&self.re),
            sign,
            format_rational(&self.im.abs())
        )
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Parses a rational-valued twist parameter, rejecting imaginary parts.
pub fn parse_twist(text: &str) -> Result<Rational> {
    let scalar: GaussianRational = text.parse()?;
    if !scalar.is_real() {
        return Err(Error::InvalidArgument(format!(
            "twist parameter must be rational, got {scalar}"
        )));
    }
    Ok(scalar.re().clone())
}

/// Canonical string for a twist parameter.
pub fn format_twist(k: &Rational) -> String {
    format_rational(k)
}

/// Small helper for integer-valued rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(num: i64, den: i64) -> GaussianRational {
        GaussianRational::from_ratio(num, den)
    }

    fn qi(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussianRational {
        GaussianRational::new(rat(re_n, re_d), rat(im_n, im_d))
    }

    #[test]
    fn rational_addition() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), q(-1, 1));
    }

    #[test]
    fn division_by_conjugate() {
        // (1 + i) / (1 - i) = i, verified by back-multiplication.
        let a = qi(1, 1, 1, 1);
        let b = qi(1, 1, -1, 1);
        let quotient = a.checked_div(&b).unwrap();
        assert_eq!(quotient, GaussianRational::i());
        assert_eq!(&quotient * &b, a);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            q(1, 1).checked_div(&GaussianRational::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(qi(3, 4, 1, 2).conjugate(), qi(3, 4, -1, 2));
        assert_eq!(q(5, 1).conjugate(), q(5, 1));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["-1/3", "3/4-1/2i", "0+1i", "5", "0", "-2+3i", "7/2+1/9i"] {
            let value: GaussianRational = text.parse().unwrap();
            assert_eq!(value.to_string(), text);
            let reparsed: GaussianRational = value.to_string().parse().unwrap();
            assert_eq!(reparsed, value);
        }
    }

    #[test]
    fn parse_normalizes() {
        let value: GaussianRational = "2/4+2/4i".parse().unwrap();
        assert_eq!(value.to_string(), "1/2+1/2i");
        assert_eq!(value, qi(1, 2, 1, 2));
    }

    #[test]
    fn parse_rejects_malformed_text() {
        for text in ["", "1/2+", "i", "1//2", "3/4*2i", "1/0", "2+3j", "1 / 2"] {
            assert!(text.parse::<GaussianRational>().is_err(), "{text:?}");
        }
    }

    #[test]
    fn fixed_examples_from_grammar() {
        let value: GaussianRational = "-1/3".parse().unwrap();
        assert_eq!(value, q(-1, 3));
        let value: GaussianRational = "3/4-1/2i".parse().unwrap();
        assert_eq!(value, qi(3, 4, -1, 2));
    }

    fn arb_scalar() -> impl Strategy<Value = GaussianRational> {
        (
            -50i64..50,
            1i64..20,
            -50i64..50,
            1i64..20,
        )
            .prop_map(|(a, b, c, d)| qi(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                let inv = a.inverse().unwrap();
                prop_assert_eq!(&a * &inv, GaussianRational::one());
            }
        }

        #[test]
        fn conjugation_is_a_ring_automorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
            prop_assert_eq!(a.conjugate().conjugate(), a);
        }

        #[test]
        fn display_round_trips(a in arb_scalar()) {
            let text = a.to_string();
            let parsed: GaussianRational = text.parse().unwrap();
            prop_assert_eq!(parsed, a);
        }
    }
}
