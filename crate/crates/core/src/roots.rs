//! Safeguarded Newton iteration on a bracketed, increasing function.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_ITERATIONS: usize = 100;

/// Finds a root of the increasing function `f` inside `[lo, hi]`.
///
/// `f` returns `(value, derivative)`. Newton steps are taken while they stay
/// inside the current bracket and shrink it quickly enough; otherwise the step
/// falls back to bisection. Iteration stops once the step is at the rounding
/// level of `x` and the residual is then checked against `residual_tol`.
/// The caller supplies `f` at both ends of the bracket.
pub(crate) fn solve_increasing<T, F>(
    mut f: F,
    (lo, f_lo): (T, T),
    (hi, f_hi): (T, T),
    guess: T,
    residual_tol: T,
) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<(T, T)>,
{
    let (mut lo, mut hi) = (lo, hi);
    if f_lo >= T::zero() {
        return if f_lo <= residual_tol {
            Ok(lo)
        } else {
            Err(bracket_failure(lo, hi))
        };
    }
    if f_hi <= T::zero() {
        return if -f_hi <= residual_tol {
            Ok(hi)
        } else {
            Err(bracket_failure(lo, hi))
        };
    }

    let two = T::lit(2.0);
    let mut x = if guess > lo && guess < hi { guess } else { (lo + hi) / two };
    let mut last_step = hi - lo;
    let mut best = (x, T::infinity());
    for _ in 0..MAX_ITERATIONS {
        let (value, slope) = f(x)?;
        if value.abs() < best.1 {
            best = (x, value.abs());
        }
        if value == T::zero() {
            return Ok(x);
        }
        if value < T::zero() {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - value / slope;
        let step = if slope > T::zero()
            && slope.is_finite()
            && newton > lo
            && newton < hi
            && (value / slope).abs() * two <= last_step
        {
            newton
        } else {
            lo + (hi - lo) / two
        };
        last_step = (step - x).abs();
        x = step;

        let scale = x.abs().max(T::min_positive_value());
        if last_step <= T::lit(2.0) * T::epsilon() * scale || hi - lo <= T::epsilon() * scale {
            let (value, _) = f(x)?;
            if value.abs() < best.1 {
                best = (x, value.abs());
            }
            break;
        }
    }

    if best.1 <= residual_tol {
        Ok(best.0)
    } else {
        Err(Error::RootNotConverged {
            residual: best.1.to_f64_lossy(),
        })
    }
}

fn bracket_failure<T: Real>(lo: T, hi: T) -> Error {
    Error::BracketFailure {
        lower: lo.to_f64_lossy(),
        upper: hi.to_f64_lossy(),
    }
}
