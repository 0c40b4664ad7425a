//! Real Gamma and Beta functions.
//!
//! Lanczos approximation with `g = 671/128` and fourteen series terms, which
//! holds about fifteen significant digits for positive arguments. These
//! routines are deliberately unrelated to the integer recursions elsewhere in
//! the crate so that the closed forms built on them act as independent checks.

// Coefficients are kept as published, beyond f64 precision.
#![allow(clippy::excessive_precision)]

use crate::real::Real;

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Natural logarithm of `Γ(x)` for `x > 0`. Returns NaN otherwise.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if !(x > T::zero()) {
        return T::nan();
    }
    let shifted = x + T::lit(LANCZOS_G);
    let lead = (x + T::lit(0.5)) * shifted.ln() - shifted;
    let mut series = T::lit(LANCZOS_C0);
    let mut y = x;
    for &c in LANCZOS_COEFFS.iter() {
        y = y + T::one();
        series = series + T::lit(c) / y;
    }
    lead + (T::lit(SQRT_TWO_PI) * series / x).ln()
}

/// `Γ(x)` for `x > 0`; overflows to infinity past `x ≈ 171` in `f64`.
pub fn gamma<T: Real>(x: T) -> T {
    ln_gamma(x).exp()
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)` for positive arguments.
pub fn beta<T: Real>(a: T, b: T) -> T {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}
