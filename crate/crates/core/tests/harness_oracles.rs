use std::f64::consts::PI;

use weylcover::harness::{
    density_histogram, expected_probabilities, jacobian_root_scan, mc_lhs, mc_rhs, radial_jacobian,
    radial_jacobian_fd, verify_integration, TestFunction,
};
use weylcover::numeric::{haar_sample, CompactGroup, RngStream};
use weylcover::registry::{instance_lookup, Catalog};
use weylcover::weyl::{coset_reps, weyl_act};
use weylcover::{Error, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn haar_entry_moments() {
    // E|u_11|² = 1/n and E|tr u|² = 1 for Haar U(n); E o_11² = 1/n for O(n).
    let n_draws = 40_000;
    for n in [2usize, 3] {
        let mut rng = RngStream::new(11, n as u64);
        let (mut e11, mut tr2, mut o11) = (0.0, 0.0, 0.0);
        for _ in 0..n_draws {
            let u = haar_sample(CompactGroup::Unitary(n), &mut rng);
            e11 += u.at(0, 0).norm_sqr();
            tr2 += u.trace().norm_sqr();
            o11 += haar_sample(CompactGroup::Orthogonal(n), &mut rng).re(0, 0).powi(2);
        }
        let m = n_draws as f64;
        assert!((e11 / m - 1.0 / n as f64).abs() < 0.01, "U({n}) |u11|²");
        assert!((tr2 / m - 1.0).abs() < 0.03, "U({n}) |tr|²");
        assert!((o11 / m - 1.0 / n as f64).abs() < 0.01, "O({n}) o11²");
    }
}

#[test]
fn gaussian_second_moment_anchor() {
    // E tr x² = n + 2·(n(n−1)/2)·(1/2) = 3 at n = 2.
    let inst = instance_lookup("lin-sym-O2").unwrap();
    let est = mc_lhs(&inst, &[TestFunction::TraceSquare, TestFunction::Trace], 100_000, 42, &tol()).unwrap();
    assert!((est[0].mean - 3.0).abs() < 4.0 * est[0].std_error, "{:?}", est[0]);
    assert!(est[1].mean.abs() < 4.0 * est[1].std_error, "{:?}", est[1]);
}

#[test]
fn constant_function_integrates_to_one_exactly() {
    for id in ["lin-sym-O(2)", "grp-U(2)", "cpt-sphere"] {
        let inst = instance_lookup(id).unwrap();
        for est in [
            mc_lhs(&inst, &[TestFunction::One], 2_000, 1, &tol()).unwrap(),
            mc_rhs(&inst, &[TestFunction::One], 2_000, 1, &tol()).unwrap(),
        ] {
            assert_eq!(est[0].mean, 1.0);
            assert_eq!(est[0].std_error, 0.0);
        }
    }
}

#[test]
fn haar_conjugation_averages_the_corner_entry() {
    let inst = instance_lookup("lin-sym-O(2)").unwrap();
    let est = mc_rhs(&inst, &[TestFunction::ReX11], 50_000, 3, &tol()).unwrap();
    assert!(est[0].mean.abs() < 4.0 * est[0].std_error);
}

#[test]
fn integration_formula_spot_checks() {
    for (id, f) in [
        ("lin-sym-O(2)", TestFunction::TraceSquare),
        ("cpt-sphere", TestFunction::X3),
        ("alg-u(2)", TestFunction::ReX11),
    ] {
        let v = verify_integration(&instance_lookup(id).unwrap(), f, 100_000, 7, &tol()).unwrap();
        assert!(v.pass, "{id} {f}: {v:?}");
    }
}

#[test]
fn standard_error_scales_with_root_samples() {
    let inst = instance_lookup("lin-sym-O(2)").unwrap();
    let f = [TestFunction::TraceSquare];
    let ratios: Vec<f64> = (0..4u64)
        .map(|s| {
            let a = mc_lhs(&inst, &f, 20_000, s, &tol()).unwrap()[0].std_error;
            let b = mc_lhs(&inst, &f, 40_000, s, &tol()).unwrap()[0].std_error;
            a / b
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean / 2f64.sqrt() - 1.0).abs() < 0.1, "{ratios:?}");
}

#[test]
fn symmetrized_slice_law_is_weyl_invariant() {
    // Two-sample comparison of the first slice coordinate: symmetrized draws
    // versus the same draws moved by a fixed Weyl representative.
    for id in ["lin-sym-O(2)", "alg-u(3)", "cpt-sphere"] {
        let inst = instance_lookup(id).unwrap();
        let weyl = coset_reps(&inst, &tol()).unwrap();
        let mut rng = RngStream::new(5, 0);
        let draw = |rng: &mut RngStream| {
            let x = inst.sample_ambient(rng, &tol()).unwrap().value;
            let (_, y) = inst.decompose(&x, &tol()).unwrap();
            weyl_act(&inst, &weyl.reps[rng.below(weyl.order)], &y.coords)
        };
        let n = 20_000;
        let a: Vec<f64> = (0..n).map(|_| draw(&mut rng)[0]).collect();
        let b: Vec<f64> = (0..n).map(|_| weyl_act(&inst, &weyl.reps[1], &draw(&mut rng))[0]).collect();
        let moments = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
            (m, var / v.len() as f64)
        };
        let ((ma, va), (mb, vb)) = (moments(&a), moments(&b));
        assert!((ma - mb).abs() < 3.0 * (va + vb).sqrt(), "{id}: {ma} vs {mb}");
    }
}

#[test]
fn radial_jacobian_matches_finite_differences() {
    let t = tol();
    for inst in Catalog::shared().iter() {
        let mut rng = RngStream::new(8, 0);
        for _ in 0..10 {
            let y = inst.sample_regular_slice(&mut rng, &t).unwrap();
            let a = radial_jacobian(inst, &y, &t).unwrap();
            let b = radial_jacobian_fd(inst, &y, &t).unwrap();
            assert!((a - b).abs() <= 1e-6 * a, "{}: {a} vs {b}", inst.id);
        }
    }
}

#[test]
fn sphere_jacobian_values() {
    let inst = instance_lookup("cpt-sphere").unwrap();
    assert!((radial_jacobian(&inst, &[PI / 2.0], &tol()).unwrap() - 1.0).abs() < 1e-12);
    assert!((radial_jacobian(&inst, &[PI / 4.0], &tol()).unwrap() - (PI / 4.0).sin()).abs() < 1e-9);
}

#[test]
fn root_scans_are_flat() {
    for (id, bound) in [("lin-sym-O(3)", 1e-6), ("grp-U(2)", 1e-6), ("cpt-sphere", 1e-9)] {
        let scan = jacobian_root_scan(&instance_lookup(id).unwrap(), 100, &mut RngStream::new(3, 3), &tol()).unwrap();
        assert!(scan.max_deviation < bound, "{id}: {}", scan.max_deviation);
    }
}

#[test]
fn histogram_probabilities_are_normalized() {
    for id in ["cpt-sphere", "lin-sym-O(2)", "grp-U(2)"] {
        let inst = instance_lookup(id).unwrap();
        let (lo, hi) = inst.histogram_layout().unwrap().range;
        let edges: Vec<f64> = (0..=16).map(|k| lo + (hi - lo) * k as f64 / 16.0).collect();
        let p = expected_probabilities(&inst, &edges, &tol()).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{id}");
    }
}

#[test]
fn gap_density_reduces_to_rayleigh_form() {
    // Gap s = λ₁ − λ₂ of the 2 × 2 ensemble has density ∝ s·exp(−s²/4), whose
    // mass on [a, b] is proportional to exp(−a²/4) − exp(−b²/4).
    let inst = instance_lookup("lin-sym-O(2)").unwrap();
    let edges: Vec<f64> = (0..=12).map(|k| k as f64 * 0.5).collect();
    let p = expected_probabilities(&inst, &edges, &tol()).unwrap();
    let cdf = |s: f64| 1.0 - (-s * s / 4.0).exp();
    let total = cdf(6.0);
    for (k, w) in edges.windows(2).enumerate() {
        let exact = (cdf(w[1]) - cdf(w[0])) / total;
        assert!((p[k] - exact).abs() < 1e-6, "bin {k}: {} vs {exact}", p[k]);
    }
}

#[test]
fn phase_gap_density_reduces_to_sine_squared() {
    // For U(2) the circular gap c ∈ (0, π) has density ∝ sin²(c/2).
    let inst = instance_lookup("grp-U(2)").unwrap();
    let edges: Vec<f64> = (0..=8).map(|k| k as f64 * PI / 8.0).collect();
    let p = expected_probabilities(&inst, &edges, &tol()).unwrap();
    let antideriv = |c: f64| (c - c.sin()) / 2.0;
    let total = antideriv(PI);
    for (k, w) in edges.windows(2).enumerate() {
        let exact = (antideriv(w[1]) - antideriv(w[0])) / total;
        assert!((p[k] - exact).abs() < 1e-6, "bin {k}: {} vs {exact}", p[k]);
    }
}

#[test]
fn histograms_pass_on_small_runs() {
    let h = density_histogram(&instance_lookup("cpt-sphere").unwrap(), 20_000, 20, 9, &tol()).unwrap();
    assert!(h.pass, "{h:?}");
}

#[test]
fn harness_rejects_noncompact_and_tiny_runs() {
    let sl = instance_lookup("grp-SL2C").unwrap();
    assert!(matches!(mc_lhs(&sl, &[TestFunction::One], 10_000, 0, &tol()), Err(Error::NotEligible(..))));
    assert!(matches!(density_histogram(&sl, 10_000, 10, 0, &tol()), Err(Error::NotEligible(..))));
    let o = instance_lookup("lin-sym-O(2)").unwrap();
    assert!(matches!(mc_lhs(&o, &[TestFunction::One], 10, 0, &tol()), Err(Error::InsufficientSamples(_))));
    assert!(matches!(density_histogram(&o, 30, 40, 0, &tol()), Err(Error::InsufficientSamples(_))));
}
