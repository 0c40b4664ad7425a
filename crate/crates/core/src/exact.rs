//! Exact arithmetic helpers shared by the congruence Gamma, moment and product
//! modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::real::Real;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Product of a sequence of machine integers, multiplied as a balanced tree so
/// that large products cost `O(M(n) log n)` instead of quadratic time.
pub(crate) fn product<I>(factors: I) -> BigUint
where
    I: IntoIterator<Item = u64>,
{
    let mut level: Vec<BigUint> = Vec::new();
    // Pack small factors into u64 words before going to bignums.
    let mut word: u128 = 1;
    for f in factors {
        if f == 0 {
            return BigUint::zero();
        }
        let next = word * f as u128;
        if next > u64::MAX as u128 {
            level.push(BigUint::from(word as u64));
            word = f as u128;
        } else {
            word = next;
        }
    }
    level.push(BigUint::from(word as u64));
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap_or_else(BigUint::one)
}

/// Builds `num/den` in lowest terms.
pub(crate) fn ratio(num: BigUint, den: BigUint) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn small_ratio(num: u64, den: u64) -> ExactRational {
    ratio(BigUint::from(num), BigUint::from(den))
}

/// A positive real held as `mantissa * 2^exponent` with `mantissa` in `[1, 2)`,
/// so magnitudes far beyond the floating range stay comparable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<T> {
    pub mantissa: T,
    pub exponent: i64,
}

impl<T: Real> Scaled<T> {
    /// From a natural logarithm.
    pub fn from_ln(ln: T) -> Self {
        let ln2 = T::LN_2();
        let exponent = (ln / ln2).floor();
        let mut mantissa = (ln - exponent * ln2).exp();
        let mut exponent = exponent.to_i64().unwrap_or(0);
        // Rounding can land the mantissa a hair outside [1, 2).
        if mantissa >= T::lit(2.0) {
            mantissa = mantissa / T::lit(2.0);
            exponent += 1;
        } else if mantissa < T::one() {
            mantissa = mantissa * T::lit(2.0);
            exponent -= 1;
        }
        Self { mantissa, exponent }
    }

    /// From a positive integer; zero maps to a zero mantissa.
    pub fn from_biguint(n: &BigUint) -> Self {
        let bits = n.bits() as i64;
        if bits == 0 {
            return Self {
                mantissa: T::zero(),
                exponent: 0,
            };
        }
        let shift = (bits - 64).max(0);
        let top: BigUint = n >> (shift as usize);
        let top = top.to_u64().unwrap_or(u64::MAX) as f64;
        let mantissa = top / 2f64.powi((bits - 1 - shift) as i32);
        Self {
            mantissa: T::lit(mantissa),
            exponent: bits - 1,
        }
    }

    pub fn ln(&self) -> T {
        self.mantissa.ln() + T::lit(self.exponent as f64) * T::LN_2()
    }

    /// Value as a plain float; saturates to infinity or zero outside the range.
    pub fn to_float(&self) -> T {
        self.mantissa * T::lit(2.0).powi(self.exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// `|self / other - 1|`.
    pub fn relative_error(&self, other: &Self) -> T {
        let shift = self.exponent - other.exponent;
        let scale = T::lit(2.0).powi(shift.clamp(-2000, 2000) as i32);
        (self.mantissa * scale / other.mantissa - T::one()).abs()
    }
}
