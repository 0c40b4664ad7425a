//! The congruence Gamma function `Γ_m(n, k)`.
//!
//! Defined by `Γ_m(0, k) = 1`, `Γ_m(1, 0) = 1` and
//! `Γ_m(n + 1, k) = (m n + k) Γ_m(n, k)`. For `1 ≤ k < m` this is the product of
//! the members of the residue class `k mod m` in `[1, m n]`; for `k = 0` the
//! recursion gives `m^(n-1) (n-1)!`. `Γ_1(n, 0) = (n-1)!`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::{product, Scaled};
use crate::real::Real;
use crate::special::ln_gamma;

/// Arguments `(m, n, k)` of `Γ_m(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CongGammaArgs {
    modulus: u64,
    count: u64,
    residue: u64,
}

impl CongGammaArgs {
    /// Canonical arguments: `modulus ≥ 1` and `residue < modulus`.
    pub fn new(modulus: u64, count: u64, residue: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if residue >= modulus {
            return Err(Error::ResidueOutOfRange { modulus, residue });
        }
        Ok(Self {
            modulus,
            count,
            residue,
        })
    }

    /// Arguments whose residue may be at or above the modulus.
    ///
    /// The recursion still makes sense there (it multiplies `k, m + k, ...`),
    /// and the moment formulas need it: `Γ_{2m}(n, m + 2)` has `m + 2 ≥ 2m`
    /// whenever `m ≤ 2`.
    pub fn unreduced(modulus: u64, count: u64, residue: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            modulus,
            count,
            residue,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    fn factors(&self) -> impl Iterator<Item = u64> {
        let Self {
            modulus: m,
            count: n,
            residue: k,
        } = *self;
        // For k = 0 the n = 1 step is pinned to 1, so the first factor is m·1.
        let start = if k == 0 { 1 } else { 0 };
        (start..n).map(move |j| m * j + k)
    }
}

/// Exact `Γ_m(n, k)` by unrolling the defining recursion.
pub fn cong_gamma(args: CongGammaArgs) -> BigUint {
    product(args.factors())
}

/// `m^n Γ(n + k/m) / Γ(k/m)` from the real Gamma function, as a scaled value
/// so it stays representable far past the floating range.
///
/// Agrees with [`cong_gamma`] whenever `k ≥ 1`. The `k = 0` case sits on the
/// pole of `Γ` and is rejected.
pub fn cong_gamma_closed_form<T: Real>(args: CongGammaArgs) -> Result<Scaled<T>> {
    if args.residue == 0 {
        return Err(Error::ZeroResidue);
    }
    let m = T::from_u64(args.modulus);
    let n = T::from_u64(args.count);
    let a = T::from_u64(args.residue) / m;
    let ln = n * m.ln() + ln_gamma(n + a) - ln_gamma(a);
    Ok(Scaled::from_ln(ln))
}

/// The expression `Γ(n + k/m) / (m^n Γ(k/m))` exactly as it is usually quoted
/// for this function. It is off from [`cong_gamma`] by a factor `m^(2n)`; kept
/// so the discrepancy can be demonstrated.
pub fn cong_gamma_printed_form<T: Real>(args: CongGammaArgs) -> Result<Scaled<T>> {
    if args.residue == 0 {
        return Err(Error::ZeroResidue);
    }
    let m = T::from_u64(args.modulus);
    let n = T::from_u64(args.count);
    let a = T::from_u64(args.residue) / m;
    let ln = ln_gamma(n + a) - ln_gamma(a) - n * m.ln();
    Ok(Scaled::from_ln(ln))
}

/// `|closed / exact - 1|` for one argument triple.
pub fn closed_form_relative_error<T: Real>(args: CongGammaArgs) -> Result<T> {
    let closed = cong_gamma_closed_form::<T>(args)?;
    let exact = Scaled::<T>::from_biguint(&cong_gamma(args));
    Ok(closed.relative_error(&exact))
}
