use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating point scalar the numerical routines are generic over: `f32` or `f64`.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(v: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    /// Converts an integer count.
    fn from_u64(n: u64) -> Self {
        Self::lit(n as f64)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// `1 - (1 - u)^m` for `u` in `[0, 1]`, accurate when `u` is tiny.
#[inline]
pub(crate) fn one_minus_pow_complement<T: Real>(u: T, m: u32) -> T {
    -(T::from_u64(m as u64) * (-u).ln_1p()).exp_m1()
}
