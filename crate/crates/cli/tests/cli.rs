use std::process::{Command, Output};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde_json::Value;

fn clover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, Output) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = clover(&full);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o)
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn schema() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let raw = include_str!("../schema/output.schema.json");
        jsonschema::validator_for(&serde_json::from_str(raw).unwrap()).unwrap()
    })
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = schema().iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn value_of(v: &Value, key: &str, name: &str) -> f64 {
    v["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x[key] == name)
        .unwrap_or_else(|| panic!("no {name}"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn varpi_two_all_methods_agree_with_pi() {
    let (v, o) = json(&["varpi", "--m", "2", "--method", "all"]);
    assert!(o.status.success());
    for method in ["quadrature", "product", "beta"] {
        assert!((value_of(&v, "method", method) - std::f64::consts::PI).abs() <= 1e-9, "{method}");
    }
    assert!(v["max_discrepancy"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn varpi_four_is_the_lemniscate_constant() {
    let (v, o) = json(&["varpi", "--m", "4", "--method", "quadrature"]);
    assert!(o.status.success());
    // Γ(1/4)² / (2√(2π))
    assert!((value_of(&v, "method", "quadrature") - 2.622_057_554_292_119_8).abs() <= 1e-12);
}

#[test]
fn varpi_one_by_product_at_loose_tolerance() {
    let (v, o) = json(&["varpi", "--m", "1", "--method", "product", "--tol", "1e-6"]);
    assert!(o.status.success());
    assert!((value_of(&v, "method", "product") - 4.0).abs() <= 1e-5);
}

#[test]
fn varpi_names_the_method_that_misses_the_tolerance() {
    let o = clover(&["varpi", "--m", "3", "--method", "product", "--tol", "1e-13"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("product"), "{}", stderr(&o));

    let o = clover(&["varpi", "--m", "3", "--method", "quadrature", "--tol", "1e-17"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("quadrature"), "{}", stderr(&o));
}

#[test]
fn product_exact_fractions() {
    let (v, o) = json(&["product", "--m", "2", "--terms", "1", "--exact"]);
    assert!(o.status.success());
    assert_eq!(v["exact"], "32/9");

    let (v, _) = json(&["product", "--m", "2", "--terms", "0", "--exact"]);
    assert_eq!(v["exact"], "4/1");
    assert_eq!(v["value"], 4.0);

    let human = stdout(&clover(&["product", "--m", "2", "--terms", "1", "--exact"]));
    assert!(human.contains("32/9"), "{human}");
}

#[test]
fn product_refuses_large_exact_requests() {
    let o = clover(&["product", "--m", "2", "--terms", "10001", "--exact"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(clover(&["product", "--m", "2", "--terms", "10000", "--exact"]).status.success());
}

#[test]
fn product_approaches_varpi_three() {
    let (p, _) = json(&["product", "--m", "3", "--terms", "100000"]);
    let (q, _) = json(&["varpi", "--m", "3"]);
    let diff = p["value"].as_f64().unwrap() - value_of(&q, "method", "quadrature");
    assert!(diff > 0.0 && diff <= 1e-4, "{diff}");
}

#[test]
fn clover_eval_at_the_tip_of_the_circle() {
    let (v, o) = json(&["clover", "--m", "2", "--eval", "1.5707963268"]);
    assert!(o.status.success());
    assert!((v["phi"].as_f64().unwrap() - 1.0).abs() <= 1e-10);
    assert!(v["phi_prime"].as_f64().unwrap().abs() <= 1e-10);
}

#[test]
fn clover_eval_rejects_points_outside_the_leaf() {
    let o = clover(&["clover", "--m", "2", "--eval", "3.2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("outside"));
    assert_eq!(clover(&["clover", "--m", "2", "--eval", "-0.1"]).status.code(), Some(3));
}

#[test]
fn clover_render_svg_has_one_path_per_leaf() {
    for (m, leaves) in [(1, 1), (2, 1), (3, 3), (4, 2), (6, 3), (9, 9)] {
        let o = clover(&["clover", "--m", &m.to_string(), "--render", "--all-leaves"]);
        assert!(o.status.success());
        let svg = stdout(&o);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("viewBox=\"-1.1 -1.1 2.2 2.2\""));
        assert_eq!(svg.matches("<path").count(), leaves, "m={m}");
        assert!(!svg.contains("fill=\"black\""));
    }
    let principal = stdout(&clover(&["clover", "--m", "4", "--render"]));
    assert_eq!(principal.matches("<path").count(), 1);
}

#[test]
fn clover_render_csv_points_lie_on_the_circle() {
    let o = clover(&["clover", "--m", "2", "--render", "--samples", "360", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["theta", "r", "x", "y"]);
    assert_eq!(rows.len(), 361);
    for row in &rows[1..] {
        let x: f64 = row[2].parse().unwrap();
        let y: f64 = row[3].parse().unwrap();
        assert!(((x - 0.5).powi(2) + y * y - 0.25).abs() <= 1e-12);
    }
}

#[test]
fn clover_render_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clover.svg");
    let o = clover(&["clover", "--m", "3", "--render", "--all-leaves", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<path").count(), 3);

    let missing = dir.path().join("no/such/dir/x.svg");
    let o = clover(&["clover", "--m", "3", "--render", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn moments_report_every_route() {
    let (v, o) = json(&["moments", "--m", "3", "--n", "6"]);
    assert!(o.status.success());
    assert_eq!(v["values"].as_array().unwrap().len(), 4);
    assert_eq!(v["exact"]["class"], "mn");
    assert_eq!(v["exact"]["basis"], "varpi");

    let (v, _) = json(&["moments", "--m", "3", "--n", "4"]);
    assert_eq!(v["values"].as_array().unwrap().len(), 2);
    assert!(v["exact"].is_null());

    // Beyond the quadrature limit the exact class still gives two routes.
    let (v, o) = json(&["moments", "--m", "5", "--n", "300"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value_of(&v, "route", "closed_form") > 0.0);
    assert_eq!(clover(&["moments", "--m", "5", "--n", "301"]).status.code(), Some(2));
}

#[test]
fn report_is_first_order() {
    let o = clover(&["report", "--m", "2", "--checkpoints", "1000,10000,100000", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["N", "P_N", "error", "N_error"]);
    let scaled: Vec<f64> = rows[1..].iter().map(|r| r[3].parse().unwrap()).collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    assert!((hi - lo) / lo < 0.2, "{scaled:?}");
}

#[test]
fn report_defaults_decrease() {
    let (v, o) = json(&["report", "--m", "1"]);
    assert!(o.status.success());
    let errors: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["error"].as_f64().unwrap()).collect();
    assert_eq!(errors.len(), 3);
    assert!(errors.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0), "{errors:?}");
    assert_eq!(clover(&["report", "--m", "1", "--checkpoints", "100,10"]).status.code(), Some(3));
}

fn default_verify() -> &'static (Value, Output, Duration) {
    static RUN: OnceLock<(Value, Output, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let (v, o) = json(&["verify"]);
        (v, o, start.elapsed())
    })
}

#[test]
fn verify_default_ranges_pass_quickly() {
    let (v, o, elapsed) = default_verify();
    assert!(o.status.success(), "{}", stderr(o));
    assert!(*elapsed < Duration::from_secs(60));
    assert_eq!(v["passed"], true);
    assert_eq!(v["m_range"], serde_json::json!([1, 6]));
    assert_eq!(v["n_range"], serde_json::json!([0, 12]));
}

#[test]
fn verify_rows_are_canonical() {
    let (v, ..) = default_verify();
    let rows = v["rows"].as_array().unwrap();
    let key = |r: &Value| (r["identity"].as_str().unwrap().to_owned(), r["m"].as_u64(), r["n"].as_u64());
    let keys: Vec<_> = rows.iter().map(key).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    let of = |id: &'static str| rows.iter().filter(move |r| r["identity"] == id);
    assert!(of("moments.closed_form_exact").count() > 0);
    for r in of("moments.closed_form_exact").chain(of("wallis.index_identity")) {
        assert_eq!(r["residual"], 0.0);
    }
    assert_eq!(of("clover.anchors").count(), 6);
    for r in of("clover.anchors") {
        assert!(r["residual"].as_f64().unwrap() <= 1e-10);
    }
    let printed: Vec<_> = of("cong_gamma.printed_form").collect();
    assert_eq!(printed.len(), 1);
    assert_eq!(printed[0]["status"], "expected_fail");
}

#[test]
fn verify_names_the_first_failure() {
    let o = clover(&["verify", "--m-range", "2..3", "--n-range", "0..3", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("first failing identity: clover.beta_agreement (m = 2"), "{err}");
}

#[test]
fn verify_csv_header() {
    let o = clover(&["verify", "--m-range", "1..2", "--n-range", "0..2", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("identity,m,n,residual,tolerance,status\r\n"));
}

#[test]
fn every_json_payload_validates() {
    let cases: &[&[&str]] = &[
        &["varpi", "--m", "5", "--method", "all"],
        &["varpi", "--m", "5", "--method", "beta"],
        &["product", "--m", "3", "--terms", "7", "--exact"],
        &["product", "--m", "3", "--terms", "7"],
        &["clover", "--m", "3", "--eval", "0.5"],
        &["clover", "--m", "3", "--render", "--samples", "5", "--all-leaves"],
        &["moments", "--m", "2", "--n", "4"],
        &["moments", "--m", "4", "--n", "2"],
        &["report", "--m", "2", "--checkpoints", "0,10,20"],
        &["verify", "--m-range", "1..2", "--n-range", "0..2"],
    ];
    for args in cases {
        let (v, o) = json(args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        assert_valid(&v);
        assert_eq!(v["command"], args[0]);
    }
    assert_valid(&default_verify().0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["varpi", "--m", "7", "--method", "all", "--format", "json"][..],
        &["clover", "--m", "5", "--render", "--all-leaves"],
        &["verify", "--m-range", "1..3", "--n-range", "0..4", "--format", "csv"],
        &["report", "--m", "3", "--format", "csv"],
    ] {
        assert_eq!(clover(args).stdout, clover(args).stdout, "{args:?}");
    }
}

#[test]
fn global_flag_contract() {
    let o = clover(&["varpi", "--m", "2", "--seedless"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seedless"));

    assert_eq!(clover(&["varpi", "--m", "2", "--format", "svg"]).status.code(), Some(2));
    assert!(clover(&["clover", "--m", "2", "--render", "--format", "svg"]).status.success());
    assert_eq!(clover(&["varpi", "--m", "0"]).status.code(), Some(2));
    assert_eq!(clover(&["varpi", "--m", "2", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(clover(&["clover", "--m", "2"]).status.code(), Some(2));
}
