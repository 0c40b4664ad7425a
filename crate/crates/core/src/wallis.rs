//! The generalized Wallis product
//!
//! ```text
//! ϖ_m = 2(m+2)/m · ∏_{n≥1} 2n(2mn + m + 2) / ((2n + 1)(2mn + 2))
//! ```
//!
//! At `m = 2` the factors are the classical `2n(2n+2)/(2n+1)²`. Every factor
//! is `1 - 2/((2n+1)(2mn+2))`, so partial products decrease monotonically to
//! `ϖ_m` with error `~ C/N`.

use crate::clover::{varpi, CloverIndex};
use crate::congruence_gamma::{cong_gamma, CongGammaArgs};
use crate::error::{Error, Result};
use crate::exact::{product, ratio, small_ratio, ExactRational};
use crate::real::Real;

/// Partial products are carried exactly up to this many factors; beyond it
/// only the floating value keeps growing.
pub const EXACT_TERM_LIMIT: u64 = 10_000;

/// Hard cap on the number of factors [`estimate_varpi`] may multiply.
pub const TERM_BUDGET: u64 = 100_000_000;

/// Smallest target accepted by [`estimate_varpi`].
pub const MIN_TARGET: f64 = 1e-10;

const FIRST_CHECKPOINT: u64 = 16;
const MAX_AITKEN_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct PartialProduct<T> {
    pub m: CloverIndex,
    pub terms: u64,
    /// Exact product over the first `exact_terms` factors, in lowest terms.
    pub exact: ExactRational,
    /// `min(terms, EXACT_TERM_LIMIT)`
    pub exact_terms: u64,
    /// Floating product over all `terms` factors, accumulated left to right.
    pub approx: T,
}

/// `(2n + 1)(2mn + 2)`; the factor's numerator is this minus 2.
fn term_denominator(m: u64, n: u64) -> u64 {
    (2 * n + 1) * (2 * m * n + 2)
}

/// The `n`-th factor `2n(2mn + m + 2) / ((2n + 1)(2mn + 2))`.
pub fn product_term(m: CloverIndex, n: u64) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::ZeroIndex { what: "product_term" });
    }
    let m = m.get() as u64;
    Ok(small_ratio(2 * n * (2 * m * n + m + 2), term_denominator(m, n)))
}

/// Exact prefactor times the first `terms` factors.
pub fn exact_partial_product(m: CloverIndex, terms: u64) -> ExactRational {
    let mm = m.get() as u64;
    let numer = product(std::iter::once(2 * (mm + 2)).chain((1..=terms).flat_map(|n| [2 * n, 2 * mm * n + mm + 2])));
    let denom = product(std::iter::once(mm).chain((1..=terms).flat_map(|n| [2 * n + 1, 2 * mm * n + 2])));
    ratio(numer, denom)
}

/// Left-to-right floating accumulation of the product, reporting the value
/// after each factor to `visit`.
fn accumulate<T: Real>(m: u64, terms: u64, mut visit: impl FnMut(u64, T)) -> T {
    let mut p = T::lit(2.0) * T::from_u64(m + 2) / T::from_u64(m);
    let two = T::lit(2.0);
    for n in 1..=terms {
        let d = T::from_u64(2 * n + 1) * T::from_u64(2 * m * n + 2);
        p = p - p * (two / d);
        visit(n, p);
    }
    p
}

/// Floating partial product only.
pub fn approx_partial_product<T: Real>(m: CloverIndex, terms: u64) -> T {
    accumulate(m.get() as u64, terms, |_, _: T| {})
}

/// Partial product over `terms` factors; exact up to [`EXACT_TERM_LIMIT`].
pub fn partial_product<T: Real>(m: CloverIndex, terms: u64) -> PartialProduct<T> {
    let exact_terms = terms.min(EXACT_TERM_LIMIT);
    PartialProduct {
        m,
        terms,
        exact: exact_partial_product(m, exact_terms),
        exact_terms,
        approx: approx_partial_product(m, terms),
    }
}

/// `(4/m) Γ_2(n,0) Γ_{2m}(n,m+2) / (Γ_2(n,1) Γ_{2m}(n,2))`, which equals the
/// partial product over `n - 1` factors.
pub fn limit_formula(m: CloverIndex, n: u64) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::ZeroIndex { what: "limit_formula" });
    }
    let mm = m.get() as u64;
    let g = |modulus, residue| -> Result<_> { Ok(cong_gamma(CongGammaArgs::unreduced(modulus, n, residue)?)) };
    let numer = g(2, 0)? * g(2 * mm, mm + 2)? * 4u32;
    let denom = g(2, 1)? * g(2 * mm, 2)? * mm;
    Ok(ratio(numer, denom))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarpiEstimate<T> {
    pub value: T,
    pub terms_used: u64,
    pub accelerated: bool,
    /// Error predicted by the stopping rule.
    pub predicted_error: T,
}

/// Iterated Aitken Δ² table over a sequence whose error shrinks
/// geometrically.
#[derive(Debug, Default)]
struct AitkenTable<T> {
    columns: Vec<Vec<T>>,
}

impl<T: Real> AitkenTable<T> {
    fn push(&mut self, value: T) {
        let mut carry = Some(value);
        let mut depth = 0;
        while let Some(v) = carry.take() {
            if self.columns.len() == depth {
                self.columns.push(Vec::new());
            }
            let col = &mut self.columns[depth];
            col.push(v);
            if depth < MAX_AITKEN_DEPTH && col.len() >= 3 {
                let n = col.len();
                carry = aitken(col[n - 3], col[n - 2], col[n - 1]);
            }
            depth += 1;
        }
    }

    /// Latest entry of the deepest column with two entries, and the gap to
    /// its predecessor.
    fn best(&self) -> Option<(T, T)> {
        self.columns.iter().rev().find(|c| c.len() >= 2).map(|c| {
            let n = c.len();
            (c[n - 1], (c[n - 1] - c[n - 2]).abs())
        })
    }
}

fn aitken<T: Real>(s0: T, s1: T, s2: T) -> Option<T> {
    let d1 = s1 - s0;
    let d2 = s2 - s1;
    let curvature = d2 - d1;
    if curvature == T::zero() || !curvature.is_finite() {
        None
    } else {
        Some(s2 - d2 * d2 / curvature)
    }
}

/// Estimates `ϖ_m` from the product, aiming for absolute error `target`.
///
/// Partial products are taken at `N = 16, 32, 64, ...`. Without acceleration
/// the first-order model `P_N - ϖ ≈ C/N` predicts the error at `N` as
/// `P_{N/2} - P_N`, and the product stops once that is below `target`. With
/// acceleration the doubling subsequence, whose leading error term halves at
/// each step, is fed through iterated Aitken Δ² and the stop rule uses the gap
/// between successive accelerated values.
pub fn estimate_varpi<T: Real>(m: CloverIndex, target: T, accelerate: bool) -> Result<VarpiEstimate<T>> {
    let target_f = target.to_f64_lossy();
    if !(target_f >= MIN_TARGET) {
        return Err(Error::TargetTooSmall(target_f));
    }
    let mm = m.get() as u64;
    let two = T::lit(2.0);
    let mut p = two * T::from_u64(mm + 2) / T::from_u64(mm);
    let mut n = 0u64;
    let mut checkpoint = FIRST_CHECKPOINT;
    let mut previous: Option<T> = None;
    let mut table = AitkenTable::default();

    while checkpoint <= TERM_BUDGET {
        while n < checkpoint {
            n += 1;
            let d = T::from_u64(2 * n + 1) * T::from_u64(2 * mm * n + 2);
            p = p - p * (two / d);
        }
        if accelerate {
            table.push(p);
            if let Some((value, gap)) = table.best() {
                if table.columns.len() >= 2 && gap <= target {
                    return Ok(VarpiEstimate {
                        value,
                        terms_used: n,
                        accelerated: true,
                        predicted_error: gap,
                    });
                }
            }
        } else if let Some(prev) = previous {
            let predicted = prev - p;
            if predicted <= target {
                return Ok(VarpiEstimate {
                    value: p,
                    terms_used: n,
                    accelerated: false,
                    predicted_error: predicted,
                });
            }
        }
        previous = Some(p);
        checkpoint *= 2;
    }
    Err(Error::TermBudgetExhausted(TERM_BUDGET))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub terms: u64,
    pub product: T,
    /// `P_N - ϖ_m`
    pub error: T,
    /// `N · (P_N - ϖ_m)`
    pub scaled_error: T,
}

/// Partial products at each checkpoint measured against the quadrature value
/// of `ϖ_m`. One left-to-right pass covers all checkpoints.
pub fn convergence_report<T: Real>(m: CloverIndex, checkpoints: &[u64]) -> Result<Vec<ConvergenceRow<T>>> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedCheckpoints);
    }
    let reference = varpi::<T>(m)?;
    let last = checkpoints.last().copied().unwrap_or(0);
    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().peekable();
    let mut record = |terms: u64, product: T| {
        let error = product - reference;
        rows.push(ConvergenceRow {
            terms,
            product,
            error,
            scaled_error: T::from_u64(terms) * error,
        });
    };
    if next.peek() == Some(&0) {
        next.next();
        record(0, approx_partial_product(m, 0));
    }
    accumulate(m.get() as u64, last, |n, p| {
        if next.peek() == Some(&n) {
            next.next();
            record(n, p);
        }
    });
    Ok(rows)
}

/// Classical Wallis factor `2n(2n + 2)/(2n + 1)²`.
pub fn classical_wallis_term(n: u64) -> ExactRational {
    small_ratio(2 * n * (2 * n + 2), (2 * n + 1) * (2 * n + 1))
}

impl<T: Real> PartialProduct<T> {
    /// Whether `exact` covers every factor.
    pub fn is_fully_exact(&self) -> bool {
        self.exact_terms == self.terms
    }
}
