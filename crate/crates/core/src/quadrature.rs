//! Tanh-sinh (double-exponential) quadrature for integrands with integrable
//! endpoint singularities.
//!
//! The substitution `x = tanh(π/2 · sinh t)` maps `(-1, 1)` onto the real line
//! and makes the transformed integrand decay double-exponentially, so a plain
//! trapezoid sum in `t` converges fast even when the original integrand blows
//! up like `(1 - x)^(-1/2)` at an end. Each level halves the step and only adds
//! the new odd-indexed nodes.
//!
//! Nodes very close to an endpoint cannot be represented as `b - δ` in floating
//! point, so integrands receive an [`Abscissa`] carrying the distance to each
//! end as well as the point itself.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::real::Real;

/// Deepest refinement level the node tables support.
pub const MAX_LEVELS: usize = 16;

const MIN_LEVELS: usize = 3;
const T_MAX: f64 = 6.5;

/// Convergence controls for [`integrate_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub absolute: T,
    pub max_levels: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn new(absolute: T, max_levels: usize) -> Result<Self> {
        let a = absolute.to_f64_lossy();
        if !(1e-15..=1e-3).contains(&a) {
            return Err(Error::InvalidTolerance(a));
        }
        if max_levels > MAX_LEVELS {
            return Err(Error::TooManyLevels(max_levels, MAX_LEVELS));
        }
        Ok(Self {
            absolute,
            max_levels,
        })
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            absolute: T::lit(1e-13),
            max_levels: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
}

/// A quadrature node together with its distances to both interval ends.
///
/// Whichever distance is small is computed directly from the transform, so it
/// keeps full relative precision even when `x` itself rounds onto the endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa<T> {
    pub x: T,
    pub to_lower: T,
    pub to_upper: T,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    /// `tanh(π/2 sinh t)`
    x: f64,
    /// `1 - x`
    complement: f64,
    weight: f64,
}

fn node_at(t: f64) -> Option<Node> {
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u).exp();
    let complement = 2.0 * e / (1.0 + e);
    if complement < f64::MIN_POSITIVE {
        return None;
    }
    // π/2 cosh t / cosh²u, with cosh²u rewritten to avoid overflow.
    let weight = std::f64::consts::FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    Some(Node {
        x: (1.0 - e) / (1.0 + e),
        complement,
        weight,
    })
}

/// Nodes at positive `t` added by one level; level 0 has `t = 1, 2, ...` and
/// level `k > 0` the odd multiples of `2^-k`.
fn level_nodes(level: usize) -> &'static [Node] {
    static TABLES: [OnceLock<Vec<Node>>; MAX_LEVELS + 1] = [const { OnceLock::new() }; MAX_LEVELS + 1];
    TABLES[level].get_or_init(|| {
        let h = 0.5f64.powi(level as i32);
        let (first, stride) = if level == 0 { (1usize, 1usize) } else { (1, 2) };
        (0..)
            .map(|i| (first + stride * i) as f64 * h)
            .take_while(|&t| t <= T_MAX)
            .map_while(node_at)
            .collect()
    })
}

/// Integrates `f` over `[lower, upper]`, tolerating inverse-square-root type
/// singularities at either end.
///
/// The integrand is never evaluated at a point that rounds onto an endpoint;
/// such nodes contribute nothing. Use [`integrate_singular_with`] when the
/// integrand can exploit the endpoint distances instead.
pub fn integrate_singular<T, F>(f: F, lower: T, upper: T, tol: Tolerance<T>) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_singular_with(
        |p: Abscissa<T>| {
            if p.x <= lower || p.x >= upper {
                T::zero()
            } else {
                f(p.x)
            }
        },
        lower,
        upper,
        tol,
    )
}

/// Like [`integrate_singular`], but the integrand sees the full [`Abscissa`].
pub fn integrate_singular_with<T, F>(f: F, lower: T, upper: T, tol: Tolerance<T>) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(Abscissa<T>) -> T,
{
    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
        return Err(Error::InvalidInterval {
            lower: lower.to_f64_lossy(),
            upper: upper.to_f64_lossy(),
        });
    }
    if tol.max_levels > MAX_LEVELS {
        return Err(Error::TooManyLevels(tol.max_levels, MAX_LEVELS));
    }

    let half = (upper - lower) / T::lit(2.0);
    let mid = lower + half;
    let mut evaluations = 0usize;

    let mut eval = |p: Abscissa<T>| -> Result<T> {
        evaluations += 1;
        let y = f(p);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { at: p.x.to_f64_lossy() })
        }
    };

    let center = eval(Abscissa {
        x: mid,
        to_lower: half,
        to_upper: half,
    })?;
    let mut sum = T::FRAC_PI_2() * center;
    let mut abs_sum = sum.abs();
    let mut previous: Option<T> = None;
    let mut difference = T::infinity();

    for level in 0..=tol.max_levels {
        let mut level_abs = T::zero();
        for node in level_nodes(level) {
            let c = half * T::lit(node.complement);
            // Remaining nodes of this level are closer still to the ends.
            if c <= T::zero() {
                break;
            }
            let far = half * (T::lit(1.0) + T::lit(node.x));
            let right = eval(Abscissa {
                x: upper - c,
                to_lower: far,
                to_upper: c,
            })?;
            let left = eval(Abscissa {
                x: lower + c,
                to_lower: c,
                to_upper: far,
            })?;
            let w = T::lit(node.weight);
            sum = sum + w * (left + right);
            level_abs = level_abs + w * (left.abs() + right.abs());
        }
        abs_sum = abs_sum + level_abs;

        let step = T::lit(0.5f64.powi(level as i32));
        let estimate = half * step * sum;
        if let Some(prev) = previous {
            difference = (estimate - prev).abs();
            if level >= MIN_LEVELS && difference <= tol.absolute {
                let rounding = T::lit(16.0) * T::epsilon() * half * step * abs_sum;
                return Ok(QuadratureResult {
                    value: estimate,
                    error_estimate: difference.max(rounding),
                    evaluations,
                });
            }
        }
        previous = Some(estimate);
    }

    Err(Error::QuadratureNotConverged {
        levels: tol.max_levels,
        difference: difference.to_f64_lossy(),
    })
}
