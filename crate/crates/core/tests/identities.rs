//! Cross-checks between independent routes: direct sampling of the clover
//! function against the moment integrals, and the differential identities on a
//! dense grid.

use clover_core::moments::{moment_beta, moment_by_closed_form, moment_by_recurrence, moment_quadrature, MomentClass};
use clover_core::{Clover64, CloverIndex};

fn idx(m: u32) -> CloverIndex {
    CloverIndex::new(m).unwrap()
}

/// Trapezoid rule on `φ^n` over `[0, ϖ]` with 1e5 intervals. The curve is
/// symmetric about `ϖ/2`, so only the left half is sampled.
fn sampled_moments(m: u32, powers: &[i32]) -> Vec<f64> {
    const INTERVALS: usize = 100_000;
    let c = Clover64::new(idx(m)).unwrap();
    let half = INTERVALS / 2;
    let h = c.varpi() / INTERVALS as f64;
    let mut sums = vec![0.0; powers.len()];
    for i in 0..=half {
        let r = c.clover_fn(i as f64 * h).unwrap();
        // Endpoints of the half-interval count once; the midpoint is shared
        // by both halves, so it also enters with weight 1/2 per half.
        let w = if i == 0 || i == half { 0.5 } else { 1.0 };
        for (s, &n) in sums.iter_mut().zip(powers) {
            *s += w * r.powi(n);
        }
    }
    sums.into_iter().map(|s| 2.0 * h * s).collect()
}

#[test]
fn sampled_clover_matches_moment_integrals() {
    let powers = [0, 1, 2, 3, 5, 8];
    for m in [1, 3, 4, 7] {
        for (&n, sampled) in powers.iter().zip(sampled_moments(m, &powers)) {
            let quad = moment_quadrature::<f64>(idx(m), n as u64).unwrap().value;
            assert!((sampled - quad).abs() <= 1e-6, "m={m} n={n}: sampled {sampled} vs {quad}");
        }
    }
}

#[test]
fn three_moment_routes_agree() {
    for m in 1..=9u32 {
        let c = Clover64::new(idx(m)).unwrap();
        for n in 1..=6 {
            for class in [MomentClass::AtMn, MomentClass::AtMnMinusOne] {
                let k = class.index(idx(m), n);
                let quad = moment_quadrature::<f64>(idx(m), k).unwrap().value;
                let rec = moment_by_recurrence(idx(m), n, class, c.varpi()).unwrap().value;
                let closed = moment_by_closed_form(idx(m), n, class, c.varpi()).unwrap().value;
                let beta = moment_beta::<f64>(idx(m), k);
                for other in [rec, closed, beta] {
                    assert!((quad - other).abs() <= 1e-12 * quad.max(1.0), "m={m} k={k}: {quad} vs {other}");
                }
            }
        }
    }
}

#[test]
fn derivative_is_consistent_with_clover_function() {
    let h = 1e-6;
    for m in 1..=8u32 {
        let c = Clover64::new(idx(m)).unwrap();
        let v = c.varpi();
        for i in 1..200 {
            let x = v * i as f64 / 200.0;
            let fd = (c.clover_fn(x + h).unwrap() - c.clover_fn(x - h).unwrap()) / (2.0 * h);
            let d = c.clover_fn_derivative(x).unwrap();
            assert!((fd - d).abs() <= 1e-5, "m={m} x={x}: {fd} vs {d}");
        }
    }
}

#[test]
fn arc_length_inverts_clover_function_on_rising_half() {
    for m in [1u32, 2, 5, 12] {
        let c = Clover64::new(idx(m)).unwrap();
        for i in 0..=50 {
            let r = i as f64 / 50.0;
            let x = c.arc_length(r).unwrap();
            assert!((c.clover_fn(x).unwrap() - r).abs() <= 1e-12, "m={m} r={r}");
        }
    }
}
