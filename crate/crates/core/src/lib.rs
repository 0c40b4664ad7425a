//! Clover curves, the clover constants `ϖ_m`, the clover function `φ_m`, the
//! congruence Gamma function and a generalized Wallis product for `ϖ_m`.
//!
//! Floating point routines are generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`. Exact quantities are
//! [`ExactRational`] or [`num_bigint::BigUint`].

// `!(a <= b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clover;
pub mod congruence_gamma;
mod error;
mod exact;
pub mod moments;
pub mod quadrature;
mod real;
mod roots;
pub mod special;
pub mod wallis;

pub use clover::{
    arc_length, clover_fn, clover_fn_derivative, leaf_count, sample_curve, varpi, varpi_beta_oracle, Clover,
    CloverIndex, CloverPoint, CloverValue,
};
pub use congruence_gamma::{cong_gamma, cong_gamma_closed_form, cong_gamma_printed_form, CongGammaArgs};
pub use error::{Error, Result};
pub use exact::{ExactRational, Scaled};
pub use quadrature::{integrate_singular, integrate_singular_with, Abscissa, QuadratureResult, Tolerance};
pub use real::Real;

pub type Clover64 = Clover<f64>;
pub type Clover32 = Clover<f32>;
pub type CloverPoint64 = CloverPoint<f64>;
pub type QuadratureResult64 = QuadratureResult<f64>;
pub type Tolerance64 = Tolerance<f64>;
pub type Scaled64 = Scaled<f64>;
