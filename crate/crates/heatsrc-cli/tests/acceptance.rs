//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible under `--nocapture`). Heavy criteria serialize on a mutex so
//! their runtime caps measure the work itself, not harness contention.
//!
//! Criteria 4 and 5 are implemented exactly as specified and are expected to
//! fail in part: the remainder-product inequality is genuinely violated at
//! r ∈ {1,2,3} by direct computation, and the cosh interpolation certificate,
//! while mathematically true at every tested combination, cannot be witnessed
//! in double precision beyond r = 1 because the evaluation noise floor
//! eps·Σ|ℓ_j·cosh(a z_j)| crosses the e^{-r} cap (reaching ~1e16 at r = 3,
//! a = 1). Both are documented failures, not implementation defects.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heatsrc::interpolation::{
    basis_growth_check, interpolate_even, node_set, remainder_product_check,
};
use heatsrc::model::{
    h1_norm, kappa, l1_norm, CosineCoefficients, SpatialField, TimeProfile,
};
use heatsrc::numerics::{composite_nodes, integrate_1d, integrate_2d, QuadratureSpec};
use heatsrc::problems::{data_error_l1, make_case, solution_error_l2, ExampleId};
use heatsrc::regularizer::{recover_coefficients, regularize, RegularizationParams};
use heatsrc::spectral::truncation_error_bound;
use heatsrc::transforms::{d_transform, g_transform, solution_residual};

static HEAVY: Mutex<()> = Mutex::new(());

fn heavy_guard() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(name: &str, ok: bool, details: &str) {
    println!("[{}] {name}: {details}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {details}");
}

fn random_table(rng: &mut ChaCha8Rng, degree: usize, amplitude: f64) -> CosineCoefficients {
    let mut t = CosineCoefficients::zeros(degree);
    for m in 0..=degree {
        for n in 0..=degree {
            t.set(m, n, rng.gen_range(-amplitude..amplitude));
        }
    }
    t
}

/// Uniform rule whose panel edges contain every kink of |cos(k·pi·t)|.
fn aligned_spec(k: u32) -> QuadratureSpec {
    let base = 2 * k as usize;
    QuadratureSpec::uniform(16, base * 32usize.div_ceil(base))
}

#[test]
fn criterion_1_example1_reproduction() {
    let _g = heavy_guard();
    let started = Instant::now();
    let case = make_case(ExampleId::Example1, 100).unwrap();
    let rep = regularize(&case.phi, &case.g, 1e-2, Some(&case.f0)).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let kf = |m: usize, n: usize| kappa(m, n) as f64 * rep.coefficients.get(m, n);
    let err = rep.l2_error_vs_exact.unwrap();
    let ok = (kf(0, 1) + 2.999721).abs() <= 2e-3
        && (kf(1, 1) + 1.997145).abs() <= 2e-3
        && kf(0, 0).abs() <= 5e-3
        && kf(1, 0).abs() <= 5e-3
        && (0.0005..=0.005).contains(&err)
        && elapsed < 10.0;
    report(
        "criterion 1 (example 1, k=100)",
        ok,
        &format!(
            "kF01={:.6} (want -2.999721±2e-3), kF11={:.6} (want -1.997145±2e-3), \
             |kF00|={:.2e}, |kF10|={:.2e} (cap 5e-3), L2 err={:.6} (want [0.0005,0.005]), {:.2}s (cap 10s)",
            kf(0, 1),
            kf(1, 1),
            kf(0, 0).abs(),
            kf(1, 0).abs(),
            err,
            elapsed
        ),
    );
}

#[test]
fn criterion_2_example2_reproduction() {
    let _g = heavy_guard();
    let started = Instant::now();
    let case = make_case(ExampleId::Example2, 100).unwrap();
    let rep = regularize(&case.phi, &case.g, 1e-2, Some(&case.f0)).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let kf = |m: usize, n: usize| kappa(m, n) as f64 * rep.coefficients.get(m, n);
    let want = [
        ((0, 0), 0.040435),
        ((1, 0), 0.426992),
        ((0, 1), -0.431701),
        ((1, 1), -0.800509),
    ];
    let coef_ok = want
        .iter()
        .all(|((m, n), v)| (kf(*m, *n) - v).abs() <= 5e-3);
    let err = rep.l2_error_vs_exact.unwrap();
    let ok = coef_ok && (0.05..=0.07).contains(&err) && elapsed < 10.0;
    report(
        "criterion 2 (example 2, k=100)",
        ok,
        &format!(
            "kF=[{:.6}, {:.6}, {:.6}, {:.6}] (want [0.040435, 0.426992, -0.431701, -0.800509]±5e-3), \
             L2 err={:.6} (want [0.05,0.07]), {:.2}s (cap 10s)",
            kf(0, 0),
            kf(1, 0),
            kf(0, 1),
            kf(1, 1),
            err,
            elapsed
        ),
    );
}

#[test]
fn criterion_3_ill_posedness_exhibit() {
    let _g = heavy_guard();
    let mut details = String::new();
    let mut ok = true;
    for k in [1u32, 2, 10, 100] {
        let case = make_case(ExampleId::Example1, k).unwrap();
        let closed = solution_error_l2(ExampleId::Example1, k);
        let quad = integrate_2d(
            |x, y| (case.f_disturbed.eval(x, y) - case.f0.eval(x, y)).powi(2),
            &aligned_spec(k),
        )
        .unwrap()
        .max(0.0)
        .sqrt();
        let sol_ok = (quad - closed).abs() <= 1e-4 * closed;

        let data_quad = integrate_2d(
            |x, y| (case.g.eval(x, y) - case.g_exact.eval(x, y)).abs(),
            &aligned_spec(k),
        )
        .unwrap();
        let data_ok = (data_quad - data_error_l1(ExampleId::Example1, k)).abs() <= 1e-6;

        ok &= sol_ok && data_ok;
        details.push_str(&format!(
            "k={k}: sol quad {quad:.4} vs closed {closed:.4}, data quad {data_quad:.8} vs 1/k; "
        ));
    }
    report("criterion 3 (ill-posedness, example 1)", ok, &details);
}

#[test]
fn criterion_4_certified_inequalities() {
    let started = Instant::now();
    let mut product_fails = Vec::new();
    let mut growth_fails = Vec::new();
    for r in 1..=200usize {
        if !remainder_product_check(r).holds {
            product_fails.push(r);
        }
        if !basis_growth_check(r).holds {
            growth_fails.push(r);
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let ok = product_fails.is_empty() && growth_fails.is_empty() && elapsed < 5.0;
    report(
        "criterion 4 (remainder product r=1..200, basis growth r=1..200)",
        ok,
        &format!(
            "product fails at r={product_fails:?} (direct computation: lhs_log exceeds rhs_log \
             there; holds for every other r to 200), growth fails at r={growth_fails:?}, {elapsed:.2}s (cap 5s)"
        ),
    );
}

#[test]
fn criterion_5_interpolation_certificate() {
    let mut ok = true;
    let mut details = String::new();
    for r in [1usize, 2, 3] {
        let nodes = node_set(r).unwrap();
        let cap = (-(r as f64)).exp();
        for a in [0.25, 0.5, 1.0] {
            let values: Vec<f64> = nodes
                .positive_nodes()
                .iter()
                .map(|z| (a * z).cosh())
                .collect();
            let worst = (0..=r)
                .map(|m| {
                    let got =
                        interpolate_even(&nodes, &values, -((m as f64 * PI).powi(2))).unwrap();
                    (got - (a * m as f64 * PI).cos()).abs()
                })
                .fold(0.0f64, f64::max);
            ok &= worst <= cap;
            details.push_str(&format!(
                "r={r},a={a}: max err {worst:.3e} vs cap {cap:.3e}{}; ",
                if worst <= cap { "" } else { " EXCEEDED" }
            ));
        }
    }
    report("criterion 5 (cosh interpolation certificate)", ok, &details);
}

#[test]
fn criterion_6_truncation_bound() {
    let _g = heavy_guard();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let spec = QuadratureSpec::uniform(16, 8);
    let (xs, ws) = composite_nodes_for_test(&spec);
    let mut ok = true;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_cross = 0.0f64;
    for _ in 0..100 {
        let table = random_table(&mut rng, 8, 1.0);
        let h1 = h1_norm(&table);
        for max_degree in 0..=7usize {
            let mut tail = table.clone();
            for m in 0..=max_degree {
                for n in 0..=max_degree {
                    tail.set(m, n, 0.0);
                }
            }
            let err_parseval = tail.l2_parseval();
            let cap = truncation_error_bound(max_degree, h1);
            ok &= err_parseval <= cap + 1e-9;
            worst_gap = worst_gap.max(err_parseval - cap);

            let err_quad = l2_on_grid(&tail, &xs, &ws);
            ok &= (err_quad - err_parseval).abs() <= 1e-6;
            worst_cross = worst_cross.max((err_quad - err_parseval).abs());
        }
    }
    report(
        "criterion 6 (truncation error cap, 100 tables x M=0..7)",
        ok,
        &format!(
            "max (err - cap) = {worst_gap:.3e} (must be <= 1e-9), \
             max |quadrature - Parseval| = {worst_cross:.3e} (must be <= 1e-6)"
        ),
    );
}

fn composite_nodes_for_test(spec: &QuadratureSpec) -> (Vec<f64>, Vec<f64>) {
    composite_nodes(0.0, 1.0, spec)
}

/// L2 norm of a coefficient table by quadrature on a tensor grid, with the
/// cosine tables precomputed per axis.
fn l2_on_grid(table: &CosineCoefficients, xs: &[f64], ws: &[f64]) -> f64 {
    let deg = table.max_degree();
    let cos_t: Vec<Vec<f64>> = (0..=deg)
        .map(|k| xs.iter().map(|t| (k as f64 * PI * t).cos()).collect())
        .collect();
    let mut total = 0.0;
    for (i, wx) in ws.iter().enumerate() {
        // row_m over y: value(x_i, y_j) = sum_m cx[m][i]·(sum_n kappa F cos(n pi y_j))
        let mut row = vec![0.0; xs.len()];
        for m in 0..=deg {
            let cmi = cos_t[m][i];
            for (j, slot) in row.iter_mut().enumerate() {
                let mut inner = 0.0;
                for (n, cn) in cos_t.iter().enumerate() {
                    inner += kappa(m, n) as f64 * table.get(m, n) * cn[j];
                }
                *slot += cmi * inner;
            }
        }
        for (j, wy) in ws.iter().enumerate() {
            total += wx * wy * row[j] * row[j];
        }
    }
    total.max(0.0).sqrt()
}

#[test]
fn criterion_7_solution_identity() {
    let _g = heavy_guard();
    let mut ok = true;
    let mut worst_exact = 0.0f64;
    let mut worst_disturbed = 0.0f64;
    for id in [ExampleId::Example1, ExampleId::Example2] {
        for k in [1u32, 10, 100] {
            let case = make_case(id, k).unwrap();
            for alpha in [5.0, 10.0, 24.0] {
                for n in [0usize, 1] {
                    let e = solution_residual(&case.u0_at_t, &case.g_exact, &case.phi, &case.f0, alpha, n)
                        .unwrap()
                        .abs();
                    let d = solution_residual(
                        &case.u_disturbed_at_t,
                        &case.g,
                        &case.phi,
                        &case.f_disturbed,
                        alpha,
                        n,
                    )
                    .unwrap()
                    .abs();
                    worst_exact = worst_exact.max(e);
                    worst_disturbed = worst_disturbed.max(d);
                    ok &= e <= 1e-7 && d <= 1e-6;
                }
            }
        }
    }
    report(
        "criterion 7 (solution identity residuals)",
        ok,
        &format!(
            "worst exact residual {worst_exact:.3e} (cap 1e-7), \
             worst disturbed residual {worst_disturbed:.3e} (cap 1e-6)"
        ),
    );
}

#[test]
fn criterion_8_bound_consistency() {
    let _g = heavy_guard();
    let mut ok = true;
    let mut details = String::new();
    for (epsilon, k) in [(1e-2, 100u32), (1e-3, 1000), (1e-4, 10000)] {
        let case = make_case(ExampleId::Example1, k).unwrap();
        let rep = regularize(&case.phi, &case.g, epsilon, Some(&case.f0)).unwrap();
        let err = rep.l2_error_vs_exact.unwrap();
        let bound = rep.bound_value.unwrap();
        ok &= err <= bound;
        details.push_str(&format!("eps={epsilon:.0e}: err {err:.4e} vs bound {bound:.3e}; "));
    }
    report("criterion 8 (a-priori bound across epsilons)", ok, &details);
}

#[test]
fn criterion_9_property_suites() {
    let _g = heavy_guard();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut ok = true;
    let mut notes = Vec::new();

    // transform evenness (exact) and linearity
    {
        let w = SpatialField::coefficients(random_table(&mut rng, 2, 1.0));
        let even = [3.0, 11.5]
            .iter()
            .all(|a| g_transform(&w, -a, 1).unwrap() == g_transform(&w, *a, 1).unwrap());
        ok &= even;
        notes.push(format!("evenness exact: {even}"));

        let a = random_table(&mut rng, 2, 1.0);
        let b = random_table(&mut rng, 2, 1.0);
        let mut combo = CosineCoefficients::zeros(2);
        for m in 0..=2 {
            for n in 0..=2 {
                combo.set(m, n, 1.25 * a.get(m, n) - 2.0 * b.get(m, n));
            }
        }
        let (fa, fb, fc) = (
            SpatialField::coefficients(a),
            SpatialField::coefficients(b),
            SpatialField::coefficients(combo),
        );
        let lhs = g_transform(&fc, 9.0, 1).unwrap();
        let rhs = 1.25 * g_transform(&fa, 9.0, 1).unwrap() - 2.0 * g_transform(&fb, 9.0, 1).unwrap();
        let linear = (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0);
        ok &= linear;
        notes.push(format!("G linearity: {linear}"));
    }

    // growth cap |G| <= e^alpha ||w||_1 and decay-regime cap |D| <= ||phi||_1
    {
        let w = SpatialField::coefficients(random_table(&mut rng, 3, 2.0));
        let l1 = l1_norm(&w).unwrap();
        let growth = [0.0, 7.0, 18.0, 30.0].iter().all(|alpha| {
            [0usize, 1, 2].iter().all(|n| {
                g_transform(&w, *alpha, *n).unwrap().abs() <= alpha.exp() * l1 + 1e-9
            })
        });
        ok &= growth;
        notes.push(format!("G growth cap: {growth}"));

        let times: Vec<f64> = (0..=32).map(|i| i as f64 / 32.0).collect();
        let values: Vec<f64> = (0..=32).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let phi = TimeProfile::sampled(times, values).unwrap();
        let phi_l1 = integrate_1d(
            |t| phi.eval(t).abs(),
            0.0,
            1.0,
            &QuadratureSpec::uniform(8, 32),
        )
        .unwrap();
        let decay = [(2.0, 0usize), (7.0, 2), (20.0, 1)]
            .iter()
            .all(|(alpha, n)| d_transform(&phi, *alpha, *n).unwrap().abs() <= phi_l1 + 1e-9);
        ok &= decay;
        notes.push(format!("D decay cap: {decay}"));
    }

    // polynomial reproduction at r=1 (1e-6 relative; higher r carry
    // conditioning beyond double precision and live in the library suites)
    {
        let nodes = node_set(1).unwrap();
        let smax = 24.0f64.powi(2);
        let mut reproduced = true;
        for _ in 0..25 {
            let coefs: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = |s: f64| {
                let u = s / smax;
                coefs.iter().rev().fold(0.0, |acc, c| acc * u + c)
            };
            let values: Vec<f64> = nodes.positive_nodes().iter().map(|z| p(z * z)).collect();
            for m in 0..=1usize {
                let target = -((m as f64 * PI).powi(2));
                let got = interpolate_even(&nodes, &values, target).unwrap();
                reproduced &= (got - p(target)).abs() <= 1e-6 * p(target).abs().max(1e-3);
            }
        }
        ok &= reproduced;
        notes.push(format!("degree-19 reproduction at r=1: {reproduced}"));
    }

    // analyze/synthesize round trip on tables
    {
        let t = random_table(&mut rng, 5, 2.0);
        let back = heatsrc::spectral::analyze(&SpatialField::coefficients(t.clone()), 5).unwrap();
        let round = t
            .iter()
            .all(|(m, n, v)| (back.get(m, n) - v).abs() <= 1e-8 * v.abs().max(1e-8));
        ok &= round;
        notes.push(format!("round trip: {round}"));
    }

    // pipeline scaling equivariance (exact power-of-two scalar)
    {
        let table = random_table(&mut rng, 1, 1.0);
        let phi = TimeProfile::builtin(heatsrc::model::BuiltinProfile::Example1Source, 1.0).unwrap();
        let params = RegularizationParams::new(1e-2).unwrap();
        let base =
            recover_coefficients(&phi, &SpatialField::coefficients(table.clone()), &params)
                .unwrap();
        let mut doubled = table.clone();
        for m in 0..=1 {
            for n in 0..=1 {
                doubled.set(m, n, 2.0 * table.get(m, n));
            }
        }
        let scaled =
            recover_coefficients(&phi, &SpatialField::coefficients(doubled), &params).unwrap();
        let equivariant = base
            .coefficients
            .iter()
            .all(|(m, n, v)| (scaled.coefficients.get(m, n) - 2.0 * v).abs() <= 1e-9 * v.abs().max(1e-9));
        ok &= equivariant;
        notes.push(format!("scaling equivariance: {equivariant}"));
    }

    // byte-determinism of CLI outputs
    {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        for out in [&a, &b] {
            let res = Command::new(env!("CARGO_BIN_EXE_heatsrc"))
                .args(["reproduce", "--example", "1", "--k", "100", "--out", out.to_str().unwrap()])
                .output()
                .unwrap();
            assert_eq!(res.status.code(), Some(0));
        }
        let identical = ["coefficients.csv", "errors.json", "grid.csv"].iter().all(|name| {
            fs::read(a.join(name)).unwrap() == fs::read(b.join(name)).unwrap()
        });
        ok &= identical;
        notes.push(format!("CLI byte-determinism: {identical}"));
    }

    report("criterion 9 (property suites)", ok, &notes.join("; "));
}
