//! Ground ring of characteristic zero.
//!
//! Everything in this crate is generic over [`Scalar`], a commutative ring
//! that contains the integers. The default instance is exact rationals
//! ([`Coefficient`]); [`BigInt`] and [`crate::symbolic::Symbolic`] are also
//! provided. Operations that need division (series inversion, block
//! triangular inversion) additionally require [`Field`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kaehler::WeightMatrix;

/// Exact arbitrary-precision rational; always in lowest terms with a
/// positive denominator.
pub type Coefficient = BigRational;

/// A commutative ring of characteristic zero with exact equality.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Image of an integer under the unique ring map `Z -> Self`.
    fn from_integer(n: BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    /// Whether the plain rendering must be parenthesized when used as a
    /// factor in a product (sums of several terms).
    fn needs_parens(&self) -> bool {
        false
    }

    fn to_latex(&self) -> String {
        self.to_string()
    }
}

/// A [`Scalar`] in which every nonzero element is invertible.
pub trait Field: Scalar {
    fn try_inverse(&self) -> Option<Self>;

    fn checked_inverse(&self) -> Result<Self> {
        self.try_inverse().ok_or(Error::DivisionByZero)
    }
}

impl Scalar for BigRational {
    fn from_integer(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn to_latex(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            let sign = if self.is_negative() { "-" } else { "" };
            format!("{sign}\\frac{{{}}}{{{}}}", self.numer().abs(), self.denom())
        }
    }
}

impl Field for BigRational {
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for BigInt {
    fn from_integer(n: BigInt) -> Self {
        n
    }
}

/// Inverse of a rational coefficient.
pub fn inverse(c: &Coefficient) -> Result<Coefficient> {
    c.checked_inverse()
}

/// Parses the textual form `p/q` (or `p`) into a coefficient in lowest terms.
pub fn parse_coefficient(text: &str) -> Result<Coefficient> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Serialization(format!("bad numerator in {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Serialization(format!("bad denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

pub fn factorial_int(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n!` as an integer-valued coefficient.
pub fn factorial(n: u64) -> Coefficient {
    BigRational::from_integer(factorial_int(n))
}

/// Falling factorial `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// `prod_i |l_i|! / prod_{i,j} l_ij!`, the integer prefactor of the
/// monomial `prod y_ij^{l_ij}` in the reduced transformation formula.
pub fn multinomial_weight_int(l: &WeightMatrix) -> BigInt {
    let num = (0..l.m()).fold(BigInt::one(), |acc, i| acc * factorial_int(l.row_sum(i)));
    let den = l
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, &e| acc * factorial_int(e as u64));
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "multinomial weight must be integral");
    q
}

pub fn multinomial_weight(l: &WeightMatrix) -> Coefficient {
    BigRational::from_integer(multinomial_weight_int(l))
}
