//! The moment sequence `I_m(n) = ∫₀^{ϖ_m} φ_m(x)^n dx`.
//!
//! Substituting `t = φ_m(x)` on each half of `[0, ϖ_m]` gives
//! `I_m(n) = 2 ∫₀¹ t^n / √(1 - t^m) dt`, which is what the quadrature route
//! evaluates. Integration by parts yields
//! `I_m(n + m) / I_m(n) = 2(n + 1) / (2(n + 1) + m)`, and together with the
//! seeds `I_m(0) = ϖ_m` and `I_m(m - 1) = 4/m` this pins down `I_m(mn)` and
//! `I_m(mn - 1)` as exact rational multiples of `ϖ_m` and `4/m`.

use num_traits::{One, ToPrimitive};

use crate::clover::CloverIndex;
use crate::congruence_gamma::{cong_gamma, CongGammaArgs};
use crate::error::{Error, Result};
use crate::exact::{ratio, small_ratio, ExactRational};
use crate::quadrature::{integrate_singular_with, Abscissa, Tolerance};
use crate::real::{one_minus_pow_complement, Real};

/// Largest `n` the quadrature route accepts. Past this the integrand is a
/// narrow spike at `t = 1`; the exact route covers `n ≡ 0, -1 (mod m)`.
pub const MAX_QUADRATURE_INDEX: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentRoute {
    Quadrature,
    Recurrence,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue<T> {
    pub m: CloverIndex,
    pub n: u64,
    pub value: T,
    pub route: MomentRoute,
}

/// Which irrational (or rational) factor an exact coefficient multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `ϖ_m`
    Varpi,
    /// `4/m`
    FourOverM,
}

/// Which of the two exactly known residue classes of the moment index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentClass {
    /// `I_m(mn)`
    AtMn,
    /// `I_m(mn - 1)`
    AtMnMinusOne,
}

impl MomentClass {
    pub fn basis(self) -> Basis {
        match self {
            MomentClass::AtMn => Basis::Varpi,
            MomentClass::AtMnMinusOne => Basis::FourOverM,
        }
    }

    /// The moment index `mn` or `mn - 1`.
    pub fn index(self, m: CloverIndex, n: u64) -> u64 {
        let mn = m.get() as u64 * n;
        match self {
            MomentClass::AtMn => mn,
            MomentClass::AtMnMinusOne => mn - 1,
        }
    }
}

/// `I_m(j) = coefficient × basis`, with the coefficient exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCoefficient {
    pub coefficient: ExactRational,
    pub basis: Basis,
}

impl ClosedFormCoefficient {
    /// Numerical value given `ϖ_m`.
    pub fn evaluate<T: Real>(&self, m: CloverIndex, varpi: T) -> T {
        let basis = match self.basis {
            Basis::Varpi => varpi,
            Basis::FourOverM => T::lit(4.0) / T::from_u64(m.get() as u64),
        };
        rational_to_real::<T>(&self.coefficient) * basis
    }
}

pub(crate) fn rational_to_real<T: Real>(q: &ExactRational) -> T {
    T::lit(q.to_f64().unwrap_or(f64::NAN))
}

/// `I_m(n)` by tanh-sinh quadrature of `2 ∫₀¹ t^n (1 - t^m)^(-1/2) dt`.
pub fn moment_quadrature<T: Real>(m: CloverIndex, n: u64) -> Result<MomentValue<T>> {
    moment_quadrature_with(m, n, Tolerance::default())
}

pub fn moment_quadrature_with<T: Real>(m: CloverIndex, n: u64, tol: Tolerance<T>) -> Result<MomentValue<T>> {
    if n > MAX_QUADRATURE_INDEX {
        return Err(Error::MomentIndexTooLarge(n));
    }
    let mm = m.get();
    let nf = T::from_u64(n);
    let half = T::lit(0.5);
    let integrand = |p: Abscissa<T>| {
        let (power, gap) = if p.to_upper < half {
            // t = 1 - u with u small: keep both factors relative to u.
            let u = p.to_upper;
            ((nf * (-u).ln_1p()).exp(), one_minus_pow_complement(u, mm))
        } else {
            (p.x.powi(n as i32), T::one() - p.x.powi(mm as i32))
        };
        power / gap.sqrt()
    };
    let q = integrate_singular_with(integrand, T::zero(), T::one(), tol)?;
    Ok(MomentValue {
        m,
        n,
        value: T::lit(2.0) * q.value,
        route: MomentRoute::Quadrature,
    })
}

/// `I_m(n + m) / I_m(n) = 2(n + 1) / (2(n + 1) + m)`, exactly.
pub fn recurrence_ratio(m: CloverIndex, n: u64) -> ExactRational {
    let a = 2 * (n + 1);
    small_ratio(a, a + m.get() as u64)
}

/// Exact coefficient of `I_m(mn)` or `I_m(mn - 1)` as a ratio of congruence
/// Gamma values:
///
/// * `I_m(mn) = Γ_{2m}(n, 2) / Γ_{2m}(n, m + 2) · ϖ_m`
/// * `I_m(mn - 1) = Γ_2(n, 0) / Γ_2(n, 1) · 4/m`
pub fn moment_closed_form(m: CloverIndex, n: u64, class: MomentClass) -> Result<ClosedFormCoefficient> {
    if n == 0 {
        return Err(Error::ZeroIndex {
            what: "moment_closed_form",
        });
    }
    let mm = m.get() as u64;
    let (num, den) = match class {
        MomentClass::AtMn => (
            CongGammaArgs::unreduced(2 * mm, n, 2)?,
            CongGammaArgs::unreduced(2 * mm, n, mm + 2)?,
        ),
        MomentClass::AtMnMinusOne => (CongGammaArgs::new(2, n, 0)?, CongGammaArgs::new(2, n, 1)?),
    };
    Ok(ClosedFormCoefficient {
        coefficient: ratio(cong_gamma(num), cong_gamma(den)),
        basis: class.basis(),
    })
}

/// The same coefficient obtained by chaining [`recurrence_ratio`] from the
/// seeds `I_m(0) = ϖ_m` and `I_m(m - 1) = 4/m`.
pub fn telescoped_coefficient(m: CloverIndex, n: u64, class: MomentClass) -> Result<ClosedFormCoefficient> {
    if n == 0 {
        return Err(Error::ZeroIndex {
            what: "telescoped_coefficient",
        });
    }
    let mm = m.get() as u64;
    let mut coefficient = ExactRational::one();
    for j in 1..n {
        let from = match class {
            MomentClass::AtMn => mm * j,
            MomentClass::AtMnMinusOne => mm * j - 1,
        };
        coefficient *= recurrence_ratio(m, from);
    }
    if class == MomentClass::AtMn {
        // The seed step I_m(0) → I_m(m).
        coefficient *= recurrence_ratio(m, 0);
    }
    Ok(ClosedFormCoefficient {
        coefficient,
        basis: class.basis(),
    })
}

/// Evaluates a moment through the exact recurrence, given `ϖ_m`.
pub fn moment_by_recurrence<T: Real>(m: CloverIndex, n: u64, class: MomentClass, varpi: T) -> Result<MomentValue<T>> {
    let c = telescoped_coefficient(m, n, class)?;
    Ok(MomentValue {
        m,
        n: class.index(m, n),
        value: c.evaluate(m, varpi),
        route: MomentRoute::Recurrence,
    })
}

/// Evaluates a moment through the congruence Gamma closed form, given `ϖ_m`.
pub fn moment_by_closed_form<T: Real>(m: CloverIndex, n: u64, class: MomentClass, varpi: T) -> Result<MomentValue<T>> {
    let c = moment_closed_form(m, n, class)?;
    Ok(MomentValue {
        m,
        n: class.index(m, n),
        value: c.evaluate(m, varpi),
        route: MomentRoute::ClosedForm,
    })
}

/// Ratio of consecutive moments against the lower bound that squeezes it to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeDiagnostic<T> {
    /// `I_m(n + 1) / I_m(n)` by quadrature.
    pub ratio_n1_n: T,
    /// `2(n + 1) / (2(n + 1) + m)`
    pub lower_bound: ExactRational,
}

impl<T: Real> SqueezeDiagnostic<T> {
    /// Whether `1 ≥ ratio ≥ bound` up to `slack`.
    pub fn holds(&self, slack: T) -> bool {
        let bound = rational_to_real::<T>(&self.lower_bound);
        self.ratio_n1_n <= T::one() + slack && self.ratio_n1_n >= bound - slack
    }
}

pub fn squeeze_diagnostic<T: Real>(m: CloverIndex, n: u64) -> Result<SqueezeDiagnostic<T>> {
    let lo = moment_quadrature::<T>(m, n)?.value;
    let hi = moment_quadrature::<T>(m, n + 1)?.value;
    Ok(SqueezeDiagnostic {
        ratio_n1_n: hi / lo,
        lower_bound: recurrence_ratio(m, n),
    })
}

/// `(2/m) B((n + 1)/m, 1/2)`; an independent closed form for every `n`, used
/// only in tests and diagnostics.
pub fn moment_beta<T: Real>(m: CloverIndex, n: u64) -> T {
    let mf = T::from_u64(m.get() as u64);
    T::lit(2.0) / mf * crate::special::beta(T::from_u64(n + 1) / mf, T::lit(0.5))
}
