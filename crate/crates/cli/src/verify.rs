//! `clover verify`: every identity the library relies on, checked over ranges
//! of `m` and `n`, one row per check.
//!
//! Rows carry the measured residual and the tolerance it was held to. Exact
//! identities use tolerance 0 and a residual of exactly 0 when they hold.
//! Checks that are about an ordering or a sign report the size of the worst
//! violation, or the number of violating cases where no size makes sense.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use clap::Args;
use clover_core::congruence_gamma::closed_form_relative_error;
use clover_core::moments::{moment_closed_form, moment_quadrature, recurrence_ratio, telescoped_coefficient, MomentClass, MAX_QUADRATURE_INDEX};
use clover_core::wallis::{classical_wallis_term, convergence_report, estimate_varpi, exact_partial_product, limit_formula, product_term, MIN_TARGET};
use clover_core::{
    cong_gamma, cong_gamma_printed_form, integrate_singular, sample_curve, varpi_beta_oracle, Clover64, CloverIndex, CongGammaArgs,
    ExactRational, Scaled64, Tolerance64,
};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::output::{num, opt, render, Format, Payload, Table};
use crate::{CliError, Outcome};

/// An inclusive range written `a..b` (or `a..=b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span(pub u64, pub u64);

impl Span {
    fn iter(self) -> impl Iterator<Item = u64> {
        self.0..=self.1
    }

    fn contains(self, x: u64) -> bool {
        (self.0..=self.1).contains(&x)
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        if a > b {
            return Err(format!("range {s:?} is empty"));
        }
        Ok(Span(a, b))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Inclusive range of m.
    #[arg(long, default_value = "1..6")]
    pub m_range: Span,
    /// Inclusive range of n.
    #[arg(long, default_value = "0..12")]
    pub n_range: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A documented discrepancy that was observed, as asserted.
    ExpectedFail,
    /// A documented discrepancy that failed to show up.
    UnexpectedPass,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub identity: &'static str,
    pub m: Option<u32>,
    pub n: Option<u64>,
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Row {
    fn new(identity: &'static str, m: Option<u32>, n: Option<u64>, residual: f64, tolerance: f64, ok: bool) -> Self {
        Self {
            identity,
            m,
            n,
            residual,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn check(identity: &'static str, m: Option<u32>, n: Option<u64>, residual: f64, tolerance: f64) -> Self {
        Self::new(identity, m, n, residual, tolerance, residual <= tolerance)
    }

    pub fn ok(&self) -> bool {
        matches!(self.status, Status::Pass | Status::ExpectedFail)
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    expected_failures: usize,
}

#[derive(Debug, Serialize)]
struct VerifyPayload {
    command: &'static str,
    m_range: Span,
    n_range: Span,
    tolerance: f64,
    summary: Summary,
    passed: bool,
    first_failure: Option<String>,
    rows: Vec<Row>,
}

impl Payload for VerifyPayload {
    fn human(&self) -> String {
        let mut s = format!(
            "{:<28} {:>4} {:>4} {:>11} {:>9}  status\n",
            "identity", "m", "n", "residual", "tolerance"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<28} {:>4} {:>4} {:>11.3e} {:>9.0e}  {}",
                r.identity,
                opt(r.m),
                opt(r.n),
                r.residual,
                r.tolerance,
                status_name(r.status)
            );
        }
        let _ = writeln!(
            s,
            "{} checks: {} passed, {} failed, {} expected failures",
            self.summary.total, self.summary.passed, self.summary.failed, self.summary.expected_failures
        );
        s
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["identity", "m", "n", "residual", "tolerance", "status"]);
        for r in &self.rows {
            t.push(vec![
                r.identity.into(),
                opt(r.m),
                opt(r.n),
                num(r.residual),
                num(r.tolerance),
                status_name(r.status).into(),
            ]);
        }
        t
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::ExpectedFail => "expected_fail",
        Status::UnexpectedPass => "unexpected_pass",
    }
}

pub fn run(args: &VerifyArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    if args.m_range.0 == 0 || args.m_range.1 > u32::MAX as u64 {
        return Err(CliError::Usage(format!(
            "--m-range must lie within 1..{}, got {}..{}",
            u32::MAX,
            args.m_range.0,
            args.m_range.1
        )));
    }
    let rows = rows(args.m_range, args.n_range, tol)?;
    let failed = rows.iter().filter(|r| !r.ok()).count();
    let expected_failures = rows.iter().filter(|r| r.status == Status::ExpectedFail).count();
    let first_failure = rows.iter().find(|r| !r.ok()).map(|r| {
        format!(
            "first failing identity: {} (m = {}, n = {}): residual {:e}, tolerance {:e}",
            r.identity,
            opt(r.m),
            opt(r.n),
            r.residual,
            r.tolerance
        )
    });
    let payload = VerifyPayload {
        command: "verify",
        m_range: args.m_range,
        n_range: args.n_range,
        tolerance: tol,
        summary: Summary {
            total: rows.len(),
            passed: rows.len() - failed - expected_failures,
            failed,
            expected_failures,
        },
        passed: failed == 0,
        first_failure: first_failure.clone(),
        rows,
    };
    Ok(Outcome::new(render(&payload, format)?, first_failure))
}

/// All rows, sorted by identity, then `m`, then `n`.
pub fn rows(m_range: Span, n_range: Span, tol: f64) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    rows.extend(cong_gamma_rows(m_range, n_range));
    rows.extend(quadrature_rows()?);
    for m in m_range.iter() {
        let m = CloverIndex::new(m as u32)?;
        rows.extend(clover_rows(m, tol)?);
        rows.extend(moment_rows(m, n_range, tol)?);
        rows.extend(wallis_rows(m, n_range, tol)?);
    }
    if m_range.contains(2) {
        let mismatches = (1..=1000u64)
            .filter(|&n| product_term(CloverIndex::new(2).unwrap(), n).ok() != Some(classical_wallis_term(n)))
            .count();
        rows.push(Row::check("wallis.classical_term", Some(2), None, mismatches as f64, 0.0));
    }
    rows.sort_by(|a, b| (a.identity, a.m, a.n).cmp(&(b.identity, b.m, b.n)));
    Ok(rows)
}

fn rational_residual(a: &ExactRational, b: &ExactRational) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs().to_f64().unwrap_or(f64::INFINITY).max(f64::MIN_POSITIVE)
    }
}

fn cong_gamma_rows(m_range: Span, n_range: Span) -> Vec<Row> {
    let g = |m, n, k| cong_gamma(CongGammaArgs::new(m, n, k).expect("k < m"));
    let mut rows = Vec::new();
    for m in m_range.iter() {
        let mi = Some(m as u32);
        for n in n_range.iter() {
            if m * n <= 200 {
                let worst = (0..m)
                    .map(|k| {
                        let next = g(m, n + 1, k);
                        let expected = if n == 0 && k == 0 { BigUint::from(1u32) } else { g(m, n, k) * (m * n + k) };
                        if next == expected {
                            0.0
                        } else {
                            let (a, b) = (next.to_f64().unwrap_or(f64::INFINITY), expected.to_f64().unwrap_or(1.0));
                            ((a - b) / b).abs().max(f64::MIN_POSITIVE)
                        }
                    })
                    .fold(0.0, f64::max);
                rows.push(Row::check("cong_gamma.recursion", mi, Some(n), worst, 0.0));
            }

            let errors: Vec<f64> = (1..m)
                .filter(|&k| m * n + k <= 300)
                .map(|k| closed_form_relative_error::<f64>(CongGammaArgs::new(m, n, k).unwrap()).unwrap_or(f64::INFINITY))
                .collect();
            if !errors.is_empty() {
                let worst = errors.into_iter().fold(0.0, f64::max);
                rows.push(Row::check("cong_gamma.closed_form", mi, Some(n), worst, 1e-12));
            }

            if n >= 1 && m >= 2 {
                // Γ_m(1, 1) = Γ_m(0, 1) = 1: the only step whose factor is 1.
                let violations = (1..m)
                    .filter(|&k| !(g(m, n, k) > g(m, n - 1, k)) && m * (n - 1) + k != 1)
                    .count();
                rows.push(Row::check("cong_gamma.monotone", mi, Some(n), violations as f64, 0.0));
            }

            if m == 1 && (1..=100).contains(&n) {
                let factorial = (1..n).fold(BigUint::from(1u32), |acc, j| acc * j);
                let ok = g(1, n, 0) == factorial;
                rows.push(Row::check("cong_gamma.factorial", mi, Some(n), if ok { 0.0 } else { 1.0 }, 0.0));
            }
        }
    }

    // The closed form as it is usually printed, Γ(n + k/m) / (m^n Γ(k/m)),
    // disagrees with the recursion already at Γ_2(1, 1) = 1, where it gives 1/4.
    let args = CongGammaArgs::new(2, 1, 1).unwrap();
    let printed = cong_gamma_printed_form::<f64>(args).expect("k ≥ 1");
    let exact = Scaled64::from_biguint(&cong_gamma(args));
    let residual = printed.relative_error(&exact);
    let mut row = Row::check("cong_gamma.printed_form", Some(2), Some(1), residual, 1e-12);
    row.status = if residual > 1e-12 {
        Status::ExpectedFail
    } else {
        Status::UnexpectedPass
    };
    rows.push(row);
    rows
}

fn quadrature_rows() -> Result<Vec<Row>, CliError> {
    let tol = Tolerance64::default();
    let f = |t: f64| (2.0 * t).cos();
    let g = |t: f64| t * t * (1.0 + t).sqrt();
    let (a, b) = (1.5, -0.75);
    let q = |h: &dyn Fn(f64) -> f64, lo, hi| integrate_singular(h, lo, hi, tol).map(|r| r.value);

    let combo = q(&|t| a * f(t) + b * g(t), 0.0, 1.0)?;
    let separate = a * q(&f, 0.0, 1.0)? + b * q(&g, 0.0, 1.0)?;
    let whole = q(&f, 0.0, 1.0)?;
    let split = q(&f, 0.0, 0.37)? + q(&f, 0.37, 1.0)?;
    let again = q(&f, 0.0, 1.0)?;
    let bound = 10.0 * tol.absolute;
    Ok(vec![
        Row::check("quadrature.linearity", None, None, (combo - separate).abs(), bound),
        Row::check("quadrature.additivity", None, None, (whole - split).abs(), bound),
        Row::new(
            "quadrature.determinism",
            None,
            None,
            (whole - again).abs(),
            0.0,
            whole.to_bits() == again.to_bits(),
        ),
    ])
}

fn clover_rows(m: CloverIndex, tol: f64) -> Result<Vec<Row>, CliError> {
    let c = Clover64::new(m)?;
    let v = c.varpi();
    let mi = m.get() as i32;
    let mm = Some(m.get());
    let mut rows = Vec::new();

    let mut anchors = 0.0f64;
    for (x, r, d) in [(0.0, 0.0, 1.0), (v / 2.0, 1.0, 0.0), (v, 0.0, -1.0)] {
        let p = c.evaluate(x)?;
        anchors = anchors.max((p.radius - r).abs()).max((p.slope - d).abs());
    }
    rows.push(Row::check("clover.anchors", mm, None, anchors, 1e-10));

    let mut pythagorean = 0.0f64;
    for i in 0..1000 {
        let p = c.evaluate(v * i as f64 / 999.0)?;
        pythagorean = pythagorean.max((p.radius.powi(mi) + p.slope * p.slope - 1.0).abs());
    }
    rows.push(Row::check("clover.pythagorean", mm, None, pythagorean, 1e-10));

    let (mut first, mut second) = (0.0f64, 0.0f64);
    for i in 1..1000 {
        let x = v * i as f64 / 1000.0;
        let p = c.evaluate(x)?;
        let h = 1e-6;
        let fd = (c.clover_fn(x + h)? - c.clover_fn(x - h)?) / (2.0 * h);
        first = first.max((fd - p.slope).abs());
        let h = 1e-4;
        let dd = (c.clover_fn(x + h)? - 2.0 * p.radius + c.clover_fn(x - h)?) / (h * h);
        second = second.max((dd + m.get() as f64 / 2.0 * p.radius.powi(mi - 1)).abs());
    }
    rows.push(Row::check("clover.finite_difference", mm, None, first, 1e-5));
    rows.push(Row::check("clover.second_derivative", mm, None, second, 1e-4));

    let mut round_trip = 0.0f64;
    let mut symmetry = 0.0f64;
    for i in 0..=200 {
        let x = v / 2.0 * i as f64 / 200.0;
        round_trip = round_trip.max((c.arc_length(c.clover_fn(x)?)? - x).abs());
        let y = v - x;
        symmetry = symmetry.max((c.clover_fn(y)? - c.clover_fn(v - y)?).abs());
    }
    rows.push(Row::check("clover.round_trip", mm, None, round_trip, 1e-10));
    rows.push(Row::check("clover.symmetry", mm, None, symmetry, 0.0));

    rows.push(Row::check(
        "clover.beta_agreement",
        mm,
        None,
        (v - varpi_beta_oracle::<f64>(m)).abs(),
        tol,
    ));

    let half_m = m.get() as f64 / 2.0;
    let locus = sample_curve::<f64>(m, false, 181)?
        .iter()
        .map(|p| (p.radius.powf(half_m) - (half_m * p.angle).cos()).abs())
        .fold(0.0, f64::max);
    rows.push(Row::check("clover.polar_locus", mm, None, locus, 1e-12));
    Ok(rows)
}

fn moment_rows(m: CloverIndex, n_range: Span, tol: f64) -> Result<Vec<Row>, CliError> {
    let mm = m.get() as u64;
    let mi = Some(m.get());
    let mut cache = BTreeMap::new();
    let mut moment = |n: u64| -> Result<f64, CliError> {
        if let Some(&v) = cache.get(&n) {
            return Ok(v);
        }
        let v = moment_quadrature::<f64>(m, n)?.value;
        cache.insert(n, v);
        Ok(v)
    };
    let mut rows = Vec::new();

    let varpi = Clover64::new(m)?.varpi();
    let anchors = (moment(0)? - varpi)
        .abs()
        .max((moment(mm - 1)? - 4.0 / mm as f64).abs())
        .max((moment(mm)? - 2.0 * varpi / (mm as f64 + 2.0)).abs());
    rows.push(Row::check("moments.anchors", mi, None, anchors, 1e-10));

    for n in n_range.iter() {
        if n + mm > MAX_QUADRATURE_INDEX {
            continue;
        }
        let here = moment(n)?;
        let ratio = moment(n + mm)? / here;
        let expected = recurrence_ratio(m, n).to_f64().unwrap_or(f64::NAN);
        rows.push(Row::check("moments.recurrence", mi, Some(n), (ratio - expected).abs(), tol));

        let rise = moment(n + 1)? - here;
        rows.push(Row::check("moments.monotone", mi, Some(n), rise.max(0.0), 1e-12));
        rows.push(Row::new(
            "moments.positive",
            mi,
            Some(n),
            (-here).max(0.0),
            0.0,
            here > 0.0,
        ));

        if n >= 1 {
            let mut worst = 0.0f64;
            for class in [MomentClass::AtMn, MomentClass::AtMnMinusOne] {
                let a = moment_closed_form(m, n, class)?;
                let b = telescoped_coefficient(m, n, class)?;
                worst = worst.max(rational_residual(&a.coefficient, &b.coefficient));
            }
            rows.push(Row::check("moments.closed_form_exact", mi, Some(n), worst, 0.0));
        }
    }
    Ok(rows)
}

fn wallis_rows(m: CloverIndex, n_range: Span, tol: f64) -> Result<Vec<Row>, CliError> {
    const MONOTONE_TERMS: u64 = 10_000;
    let mi = Some(m.get());
    let mut rows = Vec::new();

    for n in n_range.iter().filter(|&n| n >= 1) {
        let residual = rational_residual(&limit_formula(m, n)?, &exact_partial_product(m, n - 1));
        rows.push(Row::check("wallis.index_identity", mi, Some(n), residual, 0.0));
    }

    let checkpoints: Vec<u64> = (0..=MONOTONE_TERMS).collect();
    let table = convergence_report::<f64>(m, &checkpoints)?;
    let varpi = table[0].product - table[0].error;
    let mut violation = 0.0f64;
    let mut strict = true;
    for w in table.windows(2) {
        strict &= w[1].product < w[0].product;
        violation = violation.max(w[1].product - w[0].product);
    }
    let below = table.iter().map(|r| varpi - 1e-12 - r.product).fold(0.0, f64::max);
    rows.push(Row::new(
        "wallis.monotone",
        mi,
        None,
        violation.max(below).max(0.0),
        0.0,
        strict && below <= 0.0,
    ));

    let requested = (tol / 10.0).max(MIN_TARGET);
    let product = estimate_varpi::<f64>(m, requested, true)?.value;
    let beta = varpi_beta_oracle::<f64>(m);
    let spread = (product - varpi).abs().max((product - beta).abs()).max((varpi - beta).abs());
    rows.push(Row::check("wallis.cross_route", mi, None, spread, 10.0 * requested));
    Ok(rows)
}
