//! The `m`-clover `r^(m/2) = cos(mθ/2)`, its arc length, the constant `ϖ_m`
//! and the clover function `φ_m`.
//!
//! `ϖ_m` is the length of the principal leaf. `φ_m` inverts the arc length
//! measured from the origin and plays the role of `sin` (`φ_2 = sin`,
//! `ϖ_2 = π`; `m = 4` gives the lemniscate).
//!
//! Arc lengths are split at `r = 1/2`. Below the split the integrand is smooth;
//! above it everything is written in terms of `u = 1 - r`, so the square-root
//! singularity at `r = 1` sits at `u = 0` where floating point has full
//! relative precision.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_singular, integrate_singular_with, Abscissa, QuadratureResult, Tolerance};
use crate::real::{one_minus_pow_complement, Real};
use crate::roots::solve_increasing;
use crate::special::beta;

/// Residual accepted on the arc-length equation when inverting it, unless the
/// quadrature tolerance is looser.
const INVERSION_RESIDUAL: f64 = 1e-13;

/// The natural number `m` selecting the `m`-clover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CloverIndex(u32);

impl CloverIndex {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            Err(Error::ZeroCloverIndex)
        } else {
            Ok(Self(m))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for CloverIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A point of the curve in polar and cartesian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloverPoint<T> {
    pub radius: T,
    /// Polar angle. Points on rotated copies of the principal leaf keep the
    /// angle at which the polar equation holds literally, which for odd `m`
    /// can exceed `2π`.
    pub angle: T,
    pub cartesian: (T, T),
    /// Which leaf the point was sampled on; 0 is the principal leaf.
    pub leaf: usize,
}

/// `φ_m(x)` together with `φ_m'(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloverValue<T> {
    pub radius: T,
    pub slope: T,
}

/// An `m`-clover with `ϖ_m` computed once up front.
#[derive(Debug, Clone)]
pub struct Clover<T> {
    m: CloverIndex,
    tol: Tolerance<T>,
    /// `l_m(1/2)`
    head_split: T,
    /// `l_m(1) = ϖ_m / 2`
    half_varpi: T,
    varpi_error: T,
}

impl<T: Real> Clover<T> {
    pub fn new(m: CloverIndex) -> Result<Self> {
        Self::with_tolerance(m, Tolerance::default())
    }

    pub fn with_tolerance(m: CloverIndex, tol: Tolerance<T>) -> Result<Self> {
        let half = T::lit(0.5);
        let mut clover = Self {
            m,
            tol,
            head_split: T::zero(),
            half_varpi: T::zero(),
            varpi_error: T::zero(),
        };
        let head = clover.head_quadrature(half)?;
        let tail = clover.tail_quadrature(half)?;
        clover.head_split = head.value;
        clover.half_varpi = head.value + tail.value;
        clover.varpi_error = T::lit(2.0) * (head.error_estimate + tail.error_estimate);
        Ok(clover)
    }

    pub fn index(&self) -> CloverIndex {
        self.m
    }

    /// `ϖ_m`, the arc length of the principal leaf.
    pub fn varpi(&self) -> T {
        self.half_varpi * T::lit(2.0)
    }

    /// Quadrature error estimate of [`Self::varpi`].
    pub fn varpi_error_estimate(&self) -> T {
        self.varpi_error
    }

    fn inversion_residual(&self) -> T {
        self.tol.absolute.max(T::lit(INVERSION_RESIDUAL))
    }

    /// `∫₀^r dt/√(1 - t^m)` for `r ≤ 1/2`.
    fn head(&self, r: T) -> Result<T> {
        if r == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.head_quadrature(r)?.value)
    }

    fn head_quadrature(&self, r: T) -> Result<QuadratureResult<T>> {
        let m = self.m.get() as i32;
        integrate_singular(|t: T| (T::one() - t.powi(m)).sqrt().recip(), T::zero(), r, self.tol)
    }

    /// `∫_{1-u}^1 dt/√(1 - t^m)` for `u ≤ 1/2`, integrated in `s = 1 - t`.
    fn tail(&self, u: T) -> Result<T> {
        if u == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.tail_quadrature(u)?.value)
    }

    fn tail_quadrature(&self, u: T) -> Result<QuadratureResult<T>> {
        let m = self.m.get();
        let integrand = |p: Abscissa<T>| one_minus_pow_complement(p.to_lower, m).sqrt().recip();
        integrate_singular_with(integrand, T::zero(), u, self.tol)
    }

    /// `l_m(r)`: arc length from the origin to the point of radius `r` on the
    /// upper half of the principal leaf.
    pub fn arc_length(&self, r: T) -> Result<T> {
        if !(r >= T::zero() && r <= T::one()) {
            return Err(Error::RadiusOutOfRange(r.to_f64_lossy()));
        }
        if r <= T::lit(0.5) {
            self.head(r)
        } else {
            Ok(self.half_varpi - self.tail(T::one() - r)?)
        }
    }

    /// `φ_m(x)` and `φ_m'(x)` for `x ∈ [0, ϖ_m]`.
    pub fn evaluate(&self, x: T) -> Result<CloverValue<T>> {
        let varpi = self.varpi();
        if !(x >= T::zero() && x <= varpi) {
            return Err(Error::ArcLengthOutOfRange {
                x: x.to_f64_lossy(),
                max: varpi.to_f64_lossy(),
            });
        }
        let (reduced, sign) = if x > self.half_varpi {
            (varpi - x, -T::one())
        } else {
            (x, T::one())
        };
        let (radius, slope) = if reduced <= self.head_split {
            self.invert_head(reduced)?
        } else {
            self.invert_tail((self.half_varpi - reduced).max(T::zero()))?
        };
        Ok(CloverValue {
            radius,
            slope: sign * slope,
        })
    }

    /// Solves `head(r) = x` on `[0, 1/2]`.
    fn invert_head(&self, x: T) -> Result<(T, T)> {
        let m = self.m.get() as i32;
        let half = T::lit(0.5);
        let residual = |r: T| -> Result<(T, T)> {
            let value = self.head(r)? - x;
            Ok((value, (T::one() - r.powi(m)).sqrt().recip()))
        };
        let r = solve_increasing(
            residual,
            (T::zero(), -x),
            (half, self.head_split - x),
            x.min(half),
            self.inversion_residual(),
        )?;
        Ok((r, (T::one() - r.powi(m)).sqrt()))
    }

    /// Solves `tail(u) = remaining` on `u ∈ [0, 1/2]`, where `remaining` is the
    /// arc length still to go to the tip of the leaf. The unknown is `v = √u`,
    /// in which the tail grows roughly linearly (`≈ 2v/√m`).
    fn invert_tail(&self, remaining: T) -> Result<(T, T)> {
        if remaining == T::zero() {
            return Ok((T::one(), T::zero()));
        }
        let m = self.m.get();
        let root_m = T::from_u64(m as u64).sqrt();
        let tail_total = self.half_varpi - self.head_split;
        let residual = |v: T| -> Result<(T, T)> {
            let u = v * v;
            let value = self.tail(u)? - remaining;
            let slope = if v == T::zero() {
                T::lit(2.0) / root_m
            } else {
                T::lit(2.0) * v / one_minus_pow_complement(u, m).sqrt()
            };
            Ok((value, slope))
        };
        let v_max = T::lit(0.5).sqrt();
        let v = solve_increasing(
            residual,
            (T::zero(), -remaining),
            (v_max, tail_total - remaining),
            remaining * root_m / T::lit(2.0),
            self.inversion_residual(),
        )?;
        let u = v * v;
        Ok((T::one() - u, one_minus_pow_complement(u, m).sqrt()))
    }

    /// `φ_m(x)`.
    pub fn clover_fn(&self, x: T) -> Result<T> {
        Ok(self.evaluate(x)?.radius)
    }

    /// `φ_m'(x)`: `+√(1 - φ^m)` up to `ϖ_m/2`, negative beyond.
    pub fn clover_fn_derivative(&self, x: T) -> Result<T> {
        Ok(self.evaluate(x)?.slope)
    }
}

/// `l_m(r) = ∫₀^r dt/√(1 - t^m)`.
pub fn arc_length<T: Real>(m: CloverIndex, r: T) -> Result<T> {
    Clover::new(m)?.arc_length(r)
}

/// `ϖ_m = 2 ∫₀¹ dt/√(1 - t^m)` by quadrature.
pub fn varpi<T: Real>(m: CloverIndex) -> Result<T> {
    Ok(Clover::new(m)?.varpi())
}

/// `ϖ_m` through the Beta function: `(2/m) B(1/m, 1/2)`.
pub fn varpi_beta_oracle<T: Real>(m: CloverIndex) -> T {
    let m = T::from_u64(m.get() as u64);
    T::lit(2.0) / m * beta(m.recip(), T::lit(0.5))
}

pub fn clover_fn<T: Real>(m: CloverIndex, x: T) -> Result<T> {
    Clover::new(m)?.clover_fn(x)
}

pub fn clover_fn_derivative<T: Real>(m: CloverIndex, x: T) -> Result<T> {
    Clover::new(m)?.clover_fn_derivative(x)
}

/// Number of leaves: `m` for odd `m`, `m/2` for even `m`.
pub fn leaf_count(m: CloverIndex) -> usize {
    let m = m.get() as usize;
    if m % 2 == 1 {
        m
    } else {
        m / 2
    }
}

/// Samples the curve at `samples` angles spread evenly over
/// `[-π/m, π/m]`, either on the principal leaf alone or on every leaf.
///
/// Leaf `j` is the principal leaf turned by `4πj/m`; its points are emitted
/// after those of leaf `j - 1`, `samples` per leaf.
pub fn sample_curve<T: Real>(m: CloverIndex, principal_only: bool, samples: usize) -> Result<Vec<CloverPoint<T>>> {
    if samples < 2 {
        return Err(Error::TooFewSamples { min: 2, got: samples });
    }
    let leaves = if principal_only { 1 } else { leaf_count(m) };
    let mf = T::from_u64(m.get() as u64);
    let two = T::lit(2.0);
    let limit = T::PI() / mf;
    let span = T::from_u64((samples - 1) as u64);

    let mut points = Vec::with_capacity(leaves * samples);
    for leaf in 0..leaves {
        let turn = T::lit(4.0) * T::PI() * T::from_u64(leaf as u64) / mf;
        for i in 0..samples {
            let theta = if i + 1 == samples {
                limit
            } else {
                -limit + two * limit * T::from_u64(i as u64) / span
            };
            let c = (mf * theta / two).cos().max(T::zero());
            let radius = c.powf(two / mf);
            let angle = theta + turn;
            points.push(CloverPoint {
                radius,
                angle,
                cartesian: (radius * angle.cos(), radius * angle.sin()),
                leaf,
            });
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn idx(m: u32) -> CloverIndex {
        CloverIndex::new(m).unwrap()
    }

    #[test]
    fn index_rejects_zero() {
        assert_eq!(CloverIndex::new(0), Err(Error::ZeroCloverIndex));
    }

    #[test]
    fn arc_length_closed_forms() {
        let circle = Clover::<f64>::new(idx(2)).unwrap();
        assert!((circle.arc_length(1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        for &r in &[0.1, 0.5, 0.7, 0.999, 1.0 - 1e-12] {
            assert!((circle.arc_length(r).unwrap() - r.asin()).abs() < 1e-14, "r={r}");
        }
        // m = 1: antiderivative 2(1 - √(1 - r)).
        let cardioid = Clover::<f64>::new(idx(1)).unwrap();
        assert!((cardioid.arc_length(0.75).unwrap() - 1.0).abs() < 1e-15);
        for m in 1..=9 {
            assert_eq!(arc_length::<f64>(idx(m), 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn arc_length_rejects_outside_unit_interval() {
        let c = Clover::<f64>::new(idx(3)).unwrap();
        assert!(matches!(c.arc_length(1.0 + 1e-12), Err(Error::RadiusOutOfRange(_))));
        assert!(matches!(c.arc_length(-0.1), Err(Error::RadiusOutOfRange(_))));
        assert!(c.arc_length(f64::NAN).is_err());
    }

    #[test]
    fn arc_length_increases() {
        let c = Clover::<f64>::new(idx(5)).unwrap();
        let mut last = -1.0;
        for i in 0..=200 {
            let l = c.arc_length(i as f64 / 200.0).unwrap();
            assert!(l > last);
            last = l;
        }
    }

    #[test]
    fn varpi_known_values() {
        assert!((varpi::<f64>(idx(2)).unwrap() - PI).abs() < 1e-14);
        assert!((varpi::<f64>(idx(1)).unwrap() - 4.0).abs() < 1e-14);
        // Lemniscate constant Γ(1/4)²/(2√(2π)).
        let lemniscate = 2.622_057_554_292_119_8;
        assert!((varpi::<f64>(idx(4)).unwrap() - lemniscate).abs() < 1e-14);
    }

    #[test]
    fn beta_oracle_known_values() {
        assert!((varpi_beta_oracle::<f64>(idx(2)) - PI).abs() < 1e-14);
        assert!((varpi_beta_oracle::<f64>(idx(1)) - 4.0).abs() < 1e-14);
        assert!((varpi_beta_oracle::<f64>(idx(4)) - 2.622_057_554_292_119_8).abs() < 1e-14);
    }

    #[test]
    fn quadrature_and_beta_agree_up_to_64() {
        for m in 1..=64 {
            let q = varpi::<f64>(idx(m)).unwrap();
            let b = varpi_beta_oracle::<f64>(idx(m));
            assert!((q - b).abs() < 1e-12, "m={m}: {q} vs {b}");
        }
    }

    #[test]
    fn clover_fn_closed_forms() {
        let circle = Clover::<f64>::new(idx(2)).unwrap();
        for i in 0..=100 {
            let x = PI * i as f64 / 100.0;
            assert!((circle.clover_fn(x).unwrap() - x.sin()).abs() < 1e-14, "x={x}");
            assert!((circle.clover_fn_derivative(x).unwrap() - x.cos()).abs() < 1e-13, "x={x}");
        }
        let cardioid = Clover::<f64>::new(idx(1)).unwrap();
        assert!((cardioid.clover_fn(1.0).unwrap() - 0.75).abs() < 1e-15);
        for i in 0..=40 {
            let x = 2.0 * i as f64 / 40.0;
            assert!((cardioid.clover_fn(x).unwrap() - (x - x * x / 4.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn important_values() {
        for m in 1..=8 {
            let c = Clover::<f64>::new(idx(m)).unwrap();
            let v = c.varpi();
            let at0 = c.evaluate(0.0).unwrap();
            let mid = c.evaluate(v / 2.0).unwrap();
            let end = c.evaluate(v).unwrap();
            assert_eq!((at0.radius, at0.slope), (0.0, 1.0));
            assert_eq!((mid.radius, mid.slope), (1.0, 0.0));
            assert_eq!(end.radius, 0.0);
            assert!((end.slope + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn domain_is_exactly_zero_to_varpi() {
        let c = Clover::<f64>::new(idx(3)).unwrap();
        assert!(matches!(c.clover_fn(-1e-9), Err(Error::ArcLengthOutOfRange { .. })));
        assert!(matches!(c.clover_fn(c.varpi() * (1.0 + 1e-12)), Err(Error::ArcLengthOutOfRange { .. })));
    }

    #[test]
    fn symmetric_about_the_tip() {
        let c = Clover::<f64>::new(idx(6)).unwrap();
        let v = c.varpi();
        for i in 0..=50 {
            let x = v * i as f64 / 100.0;
            let a = c.clover_fn(x).unwrap();
            let b = c.clover_fn(v - x).unwrap();
            assert!((a - b).abs() < 1e-15, "x={x}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        for m in [1, 3, 4, 7, 12, 40] {
            let c = Clover::<f64>::new(idx(m)).unwrap();
            let v = c.varpi();
            for i in 0..=64 {
                let x = v / 2.0 * i as f64 / 64.0;
                let r = c.clover_fn(x).unwrap();
                assert!((c.arc_length(r).unwrap() - x).abs() <= 1e-10, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn leaf_counts() {
        assert_eq!(leaf_count(idx(3)), 3);
        assert_eq!(leaf_count(idx(4)), 2);
        assert_eq!(leaf_count(idx(1)), 1);
        assert_eq!(leaf_count(idx(2)), 1);
    }

    #[test]
    fn sampled_points_lie_on_the_curve() {
        for m in 1..=9 {
            let pts = sample_curve::<f64>(idx(m), false, 181).unwrap();
            assert_eq!(pts.len(), 181 * leaf_count(idx(m)));
            for p in &pts {
                let mf = m as f64;
                let lhs = p.radius.powf(mf / 2.0);
                let rhs = (mf * p.angle / 2.0).cos();
                assert!((lhs - rhs).abs() < 1e-12, "m={m} {p:?}");
                assert!((p.cartesian.0 - p.radius * p.angle.cos()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sample_anchors() {
        let pts = sample_curve::<f64>(idx(3), true, 3).unwrap();
        assert_eq!(pts[1].cartesian, (1.0, 0.0));
        assert!(pts[0].radius < 1e-10 && pts[2].radius < 1e-10);
        let pts = sample_curve::<f64>(idx(2), true, 5).unwrap();
        // θ = π/4
        let (x, y) = pts[3].cartesian;
        assert!((x - 0.5).abs() < 1e-15 && (y - 0.5).abs() < 1e-15);
        assert!(matches!(sample_curve::<f64>(idx(2), true, 1), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn single_precision_clover() {
        let tol = Tolerance::<f32>::new(1e-5, 10).unwrap();
        let c = Clover::<f32>::with_tolerance(idx(2), tol).unwrap();
        assert!((c.varpi() - std::f32::consts::PI).abs() < 1e-5);
    }
}
