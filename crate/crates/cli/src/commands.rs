use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Args, ValueEnum};
use clover_core::moments::{
    moment_beta, moment_by_closed_form, moment_by_recurrence, moment_closed_form, moment_quadrature_with, Basis, MomentClass,
    MAX_QUADRATURE_INDEX,
};
use clover_core::quadrature::MAX_LEVELS;
use clover_core::wallis::{approx_partial_product, convergence_report, estimate_varpi, exact_partial_product, EXACT_TERM_LIMIT, MIN_TARGET};
use clover_core::{sample_curve, varpi_beta_oracle, Clover64, CloverIndex, Tolerance64};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::output::{num, opt, rational, render, svg, Format, Payload, Table};
use crate::{parse_index, CliError, Outcome};

/// Quadrature target for a requested tolerance: ten times tighter, clamped to
/// what the engine accepts.
pub(crate) fn quadrature_tolerance(tol: f64) -> Tolerance64 {
    Tolerance64::new((tol / 10.0).clamp(1e-15, 1e-3), MAX_LEVELS).expect("clamped into the accepted range")
}

fn max_pairwise(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in values.clone().enumerate() {
        for b in values.clone().skip(i + 1) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

// ---------------------------------------------------------------- varpi

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    Product,
    Beta,
    All,
}

#[derive(Debug, Args)]
pub struct VarpiArgs {
    #[arg(long, value_parser = parse_index)]
    pub m: CloverIndex,
    #[arg(long, value_enum, default_value_t = Method::Quadrature)]
    pub method: Method,
}

#[derive(Debug, Serialize)]
struct MethodValue {
    method: &'static str,
    value: f64,
    error_estimate: Option<f64>,
    terms: Option<u64>,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct VarpiPayload {
    command: &'static str,
    m: u32,
    tolerance: f64,
    values: Vec<MethodValue>,
    max_discrepancy: Option<f64>,
    passed: bool,
}

impl Payload for VarpiPayload {
    fn human(&self) -> String {
        let mut s = format!("varpi_{}\n", self.m);
        for v in &self.values {
            let _ = write!(s, "  {:<10}  {:.15}", v.method, v.value);
            if let Some(e) = v.error_estimate {
                let _ = write!(s, "  ± {e:.1e}");
            }
            if let Some(n) = v.terms {
                let _ = write!(s, "  ({n} terms)");
            }
            s.push('\n');
        }
        if let Some(d) = self.max_discrepancy {
            let _ = writeln!(s, "  max discrepancy {d:.2e} (tolerance {:e})", self.tolerance);
        }
        s
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["m", "method", "value", "error_estimate", "terms", "passed"]);
        for v in &self.values {
            t.push(vec![
                self.m.to_string(),
                v.method.into(),
                num(v.value),
                opt(v.error_estimate.map(num)),
                opt(v.terms),
                v.passed.to_string(),
            ]);
        }
        t
    }
}

pub fn varpi(args: &VarpiArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let m = args.m;
    let wanted = |x: Method| args.method == x || args.method == Method::All;
    let mut values = Vec::new();

    if wanted(Method::Quadrature) {
        let c = Clover64::with_tolerance(m, quadrature_tolerance(tol)).map_err(|source| CliError::Method {
            method: "quadrature",
            source,
        })?;
        let e = c.varpi_error_estimate();
        values.push(MethodValue {
            method: "quadrature",
            value: c.varpi(),
            error_estimate: Some(e),
            terms: None,
            passed: e <= tol,
        });
    }
    if wanted(Method::Product) {
        let est = estimate_varpi(m, (tol / 10.0).max(MIN_TARGET), true).map_err(|source| CliError::Method {
            method: "product",
            source,
        })?;
        values.push(MethodValue {
            method: "product",
            value: est.value,
            error_estimate: Some(est.predicted_error),
            terms: Some(est.terms_used),
            passed: est.predicted_error <= tol,
        });
    }
    if wanted(Method::Beta) {
        values.push(MethodValue {
            method: "beta",
            value: varpi_beta_oracle(m),
            error_estimate: None,
            terms: None,
            passed: true,
        });
    }

    let max_discrepancy = (values.len() > 1).then(|| max_pairwise(values.iter().map(|v| v.value)));
    let failure = values
        .iter()
        .find(|v| !v.passed)
        .map(|v| {
            format!(
                "{}: error estimate {:e} exceeds tolerance {tol:e}",
                v.method,
                v.error_estimate.unwrap_or(f64::NAN)
            )
        })
        .or_else(|| {
            max_discrepancy
                .filter(|&d| !(d <= tol))
                .map(|d| format!("methods disagree by {d:e}, tolerance {tol:e}"))
        });
    let payload = VarpiPayload {
        command: "varpi",
        m: m.get(),
        tolerance: tol,
        values,
        max_discrepancy,
        passed: failure.is_none(),
    };
    Ok(Outcome::new(render(&payload, format)?, failure))
}

// ---------------------------------------------------------------- product

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long, value_parser = parse_index)]
    pub m: CloverIndex,
    /// Number of factors after the prefactor 2(m + 2)/m.
    #[arg(long, default_value_t = 1000)]
    pub terms: u64,
    /// Also compute the product as a reduced fraction (at most 10000 terms).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Serialize)]
struct ProductPayload {
    command: &'static str,
    m: u32,
    terms: u64,
    value: f64,
    exact: Option<String>,
}

impl Payload for ProductPayload {
    fn human(&self) -> String {
        let mut s = format!("P_{} for m = {}: {:.15}\n", self.terms, self.m, self.value);
        if let Some(q) = &self.exact {
            let q = q.strip_suffix("/1").unwrap_or(q);
            let _ = writeln!(s, "exact: {q}");
        }
        s
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["m", "terms", "value", "exact"]);
        t.push(vec![
            self.m.to_string(),
            self.terms.to_string(),
            num(self.value),
            self.exact.clone().unwrap_or_default(),
        ]);
        t
    }
}

pub fn product(args: &ProductArgs, format: Format) -> Result<Outcome, CliError> {
    let (value, exact) = if args.exact {
        if args.terms > EXACT_TERM_LIMIT {
            return Err(CliError::Usage(format!(
                "--exact supports at most {EXACT_TERM_LIMIT} terms, got {}",
                args.terms
            )));
        }
        let q = exact_partial_product(args.m, args.terms);
        (q.to_f64().unwrap_or(f64::NAN), Some(rational(&q)))
    } else {
        (approx_partial_product::<f64>(args.m, args.terms), None)
    };
    let payload = ProductPayload {
        command: "product",
        m: args.m.get(),
        terms: args.terms,
        value,
        exact,
    };
    Ok(Outcome::new(render(&payload, format)?, None))
}

// ---------------------------------------------------------------- clover

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["eval", "render"])))]
pub struct CloverArgs {
    #[arg(long, value_parser = parse_index)]
    pub m: CloverIndex,
    /// Arc length x in [0, ϖ_m] at which to evaluate φ_m and φ_m'.
    #[arg(long, allow_negative_numbers = true)]
    pub eval: Option<f64>,
    /// Sample the curve: SVG by default, or CSV/JSON with --format.
    #[arg(long)]
    pub render: bool,
    /// Points per leaf.
    #[arg(long, default_value_t = 200, requires = "render")]
    pub samples: usize,
    /// Draw every leaf instead of the principal one only.
    #[arg(long, requires = "render")]
    pub all_leaves: bool,
    /// Write the payload to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct EvalPayload {
    command: &'static str,
    mode: &'static str,
    m: u32,
    x: f64,
    phi: f64,
    phi_prime: f64,
    /// `|φ^m + φ'^2 - 1|`
    residual: f64,
    tolerance: f64,
    passed: bool,
}

impl Payload for EvalPayload {
    fn human(&self) -> String {
        format!(
            "phi_{m}({x}) = {:.15}\nphi_{m}'({x}) = {:.15}\n|phi^m + phi'^2 - 1| = {:.1e}\n",
            self.phi,
            self.phi_prime,
            self.residual,
            m = self.m,
            x = self.x
        )
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["m", "x", "phi", "phi_prime", "residual"]);
        t.push(vec![
            self.m.to_string(),
            num(self.x),
            num(self.phi),
            num(self.phi_prime),
            num(self.residual),
        ]);
        t
    }
}

#[derive(Debug, Serialize)]
struct RenderPoint {
    leaf: usize,
    theta: f64,
    r: f64,
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize)]
struct RenderPayload {
    command: &'static str,
    mode: &'static str,
    m: u32,
    samples: usize,
    leaves: usize,
    /// `max |r^(m/2) - cos(mθ/2)|` over the points.
    locus_residual: f64,
    tolerance: f64,
    passed: bool,
    points: Vec<RenderPoint>,
}

impl Payload for RenderPayload {
    fn human(&self) -> String {
        unreachable!("human render output is SVG")
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["theta", "r", "x", "y"]);
        for p in &self.points {
            t.push(vec![num(p.theta), num(p.r), num(p.x), num(p.y)]);
        }
        t
    }
}

pub fn clover(args: &CloverArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let mut outcome = match args.eval {
        Some(x) => clover_eval(args.m, x, tol, format)?,
        None => clover_render(args, tol, format)?,
    };
    outcome.out = args.out.clone();
    Ok(outcome)
}

fn clover_eval(m: CloverIndex, x: f64, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let c = Clover64::with_tolerance(m, quadrature_tolerance(tol))?;
    let v = c.evaluate(x)?;
    let residual = (v.radius.powi(m.get() as i32) + v.slope * v.slope - 1.0).abs();
    let failure = (!(residual <= tol)).then(|| format!("|phi^m + phi'^2 - 1| = {residual:e} exceeds tolerance {tol:e}"));
    let payload = EvalPayload {
        command: "clover",
        mode: "eval",
        m: m.get(),
        x,
        phi: v.radius,
        phi_prime: v.slope,
        residual,
        tolerance: tol,
        passed: failure.is_none(),
    };
    Ok(Outcome::new(render(&payload, format)?, failure))
}

fn clover_render(args: &CloverArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let points = sample_curve::<f64>(args.m, !args.all_leaves, args.samples)?;
    let half_m = args.m.get() as f64 / 2.0;
    let locus_residual = points
        .iter()
        .map(|p| (p.radius.powf(half_m) - (half_m * p.angle).cos()).abs())
        .fold(0.0, f64::max);
    let leaves = points.last().map_or(0, |p| p.leaf + 1);
    let failure = (!(locus_residual <= tol))
        .then(|| format!("sampled points miss the curve by {locus_residual:e}, tolerance {tol:e}"));

    let body = match format {
        Format::Human | Format::Svg => {
            let paths: Vec<Vec<(f64, f64)>> = (0..leaves)
                .map(|leaf| points.iter().filter(|p| p.leaf == leaf).map(|p| p.cartesian).collect())
                .collect();
            svg(&paths)
        }
        Format::Json | Format::Csv => {
            let payload = RenderPayload {
                command: "clover",
                mode: "render",
                m: args.m.get(),
                samples: args.samples,
                leaves,
                locus_residual,
                tolerance: tol,
                passed: failure.is_none(),
                points: points
                    .iter()
                    .map(|p| RenderPoint {
                        leaf: p.leaf,
                        theta: p.angle,
                        r: p.radius,
                        x: p.cartesian.0,
                        y: p.cartesian.1,
                    })
                    .collect(),
            };
            render(&payload, format)?
        }
    };
    Ok(Outcome::new(body, failure))
}

// ---------------------------------------------------------------- moments

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, value_parser = parse_index)]
    pub m: CloverIndex,
    /// Moment index: I_m(n) = ∫₀^ϖ φ_m(x)^n dx.
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Serialize)]
struct RouteValue {
    route: &'static str,
    value: f64,
}

#[derive(Debug, Serialize)]
struct ExactMoment {
    /// `"mn"` or `"mn-1"`.
    class: &'static str,
    j: u64,
    coefficient: String,
    /// `"varpi"` or `"4/m"`.
    basis: &'static str,
}

#[derive(Debug, Serialize)]
struct MomentsPayload {
    command: &'static str,
    m: u32,
    n: u64,
    tolerance: f64,
    values: Vec<RouteValue>,
    exact: Option<ExactMoment>,
    max_discrepancy: f64,
    passed: bool,
}

impl Payload for MomentsPayload {
    fn human(&self) -> String {
        let mut s = format!("I_{}({})\n", self.m, self.n);
        for v in &self.values {
            let _ = writeln!(s, "  {:<12}  {:.15}", v.route, v.value);
        }
        if let Some(e) = &self.exact {
            let basis = if e.basis == "varpi" { "varpi_m" } else { "4/m" };
            let _ = writeln!(s, "  exact: {} * {basis}", e.coefficient);
        }
        let _ = writeln!(
            s,
            "  max discrepancy {:.2e} (tolerance {:e})",
            self.max_discrepancy, self.tolerance
        );
        s
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["m", "n", "route", "value"]);
        for v in &self.values {
            t.push(vec![self.m.to_string(), self.n.to_string(), v.route.into(), num(v.value)]);
        }
        t
    }
}

/// The exactly known residue class containing `n`, with its `j`.
fn moment_class(m: u64, n: u64) -> Option<(MomentClass, u64)> {
    if n > 0 && n.is_multiple_of(m) {
        Some((MomentClass::AtMn, n / m))
    } else if (n + 1).is_multiple_of(m) {
        Some((MomentClass::AtMnMinusOne, (n + 1) / m))
    } else {
        None
    }
}

pub fn moments(args: &MomentsArgs, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let (m, n) = (args.m, args.n);
    let qtol = quadrature_tolerance(tol);
    let class = moment_class(m.get() as u64, n);
    if n > MAX_QUADRATURE_INDEX && class.is_none() {
        return Err(CliError::Usage(format!(
            "n = {n} is above the quadrature limit {MAX_QUADRATURE_INDEX} and not ≡ 0 or -1 (mod m), so only one route is available"
        )));
    }

    let mut values = Vec::new();
    if n <= MAX_QUADRATURE_INDEX {
        let q = moment_quadrature_with(m, n, qtol).map_err(|source| CliError::Method {
            method: "quadrature",
            source,
        })?;
        values.push(RouteValue {
            route: "quadrature",
            value: q.value,
        });
    }
    values.push(RouteValue {
        route: "beta",
        value: moment_beta(m, n),
    });

    let mut exact = None;
    if let Some((class, j)) = class {
        let varpi = Clover64::with_tolerance(m, qtol)?.varpi();
        let rec = moment_by_recurrence(m, j, class, varpi)?;
        let closed = moment_by_closed_form(m, j, class, varpi)?;
        values.push(RouteValue {
            route: "recurrence",
            value: rec.value,
        });
        values.push(RouteValue {
            route: "closed_form",
            value: closed.value,
        });
        let c = moment_closed_form(m, j, class)?;
        exact = Some(ExactMoment {
            class: match class {
                MomentClass::AtMn => "mn",
                MomentClass::AtMnMinusOne => "mn-1",
            },
            j,
            coefficient: rational(&c.coefficient),
            basis: match c.basis {
                Basis::Varpi => "varpi",
                Basis::FourOverM => "4/m",
            },
        });
    }

    let max_discrepancy = max_pairwise(values.iter().map(|v| v.value));
    let failure = (!(max_discrepancy <= tol)).then(|| format!("routes disagree by {max_discrepancy:e}, tolerance {tol:e}"));
    let payload = MomentsPayload {
        command: "moments",
        m: m.get(),
        n,
        tolerance: tol,
        values,
        exact,
        max_discrepancy,
        passed: failure.is_none(),
    };
    Ok(Outcome::new(render(&payload, format)?, failure))
}

// ---------------------------------------------------------------- report

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_parser = parse_index)]
    pub m: CloverIndex,
    /// Strictly ascending term counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000])]
    pub checkpoints: Vec<u64>,
}

#[derive(Debug, Serialize)]
struct ReportRow {
    #[serde(rename = "N")]
    terms: u64,
    #[serde(rename = "P_N")]
    product: f64,
    error: f64,
    #[serde(rename = "N_error")]
    scaled_error: f64,
}

#[derive(Debug, Serialize)]
struct ReportPayload {
    command: &'static str,
    m: u32,
    varpi: f64,
    rows: Vec<ReportRow>,
}

impl Payload for ReportPayload {
    fn human(&self) -> String {
        let mut s = format!("m = {}, varpi_m = {:.15}\n", self.m, self.varpi);
        let _ = writeln!(s, "{:>12}  {:>18}  {:>10}  {:>10}", "N", "P_N", "error", "N*error");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>12}  {:>18.15}  {:>10.3e}  {:>10.6}",
                r.terms, r.product, r.error, r.scaled_error
            );
        }
        s
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["N", "P_N", "error", "N_error"]);
        for r in &self.rows {
            t.push(vec![r.terms.to_string(), num(r.product), num(r.error), num(r.scaled_error)]);
        }
        t
    }
}

pub fn report(args: &ReportArgs, format: Format) -> Result<Outcome, CliError> {
    let rows = convergence_report::<f64>(args.m, &args.checkpoints)?;
    let payload = ReportPayload {
        command: "report",
        m: args.m.get(),
        varpi: rows.first().map_or(f64::NAN, |r| r.product - r.error),
        rows: rows
            .into_iter()
            .map(|r| ReportRow {
                terms: r.terms,
                product: r.product,
                error: r.error,
                scaled_error: r.scaled_error,
            })
            .collect(),
    };
    Ok(Outcome::new(render(&payload, format)?, None))
}
