//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! line per criterion and exits nonzero if any fails.

mod fixtures;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use weylcover::checker::{fiber, run_conditions, sample_regular_point, ConditionOptions, ConditionReport};
use weylcover::harness::{density_histogram, jacobian_root_scan, verify_integration_all, TestFunction};
use weylcover::numeric::RngStream;
use weylcover::registry::{Catalog, EnsembleInstance};
use weylcover::Tolerances;
use weylcover_cli::{run_with, EXIT_FAIL};

const SEED: u64 = 42;
const PROBES: usize = 100;
const SAMPLES: usize = 100_000;

/// Covering degrees, each confirmed by brute-force coset enumeration in the core tests.
const DEGREES: [(&str, usize); 15] = [
    ("lin-sym-O(2)", 2),
    ("lin-sym-O(3)", 6),
    ("lin-sym-O(4)", 24),
    ("nl-posdef-O(2)", 2),
    ("cpt-sphere", 2),
    ("grp-U(2)", 2),
    ("grp-U(3)", 6),
    ("alg-u(2)", 2),
    ("alg-u(3)", 6),
    ("grp-SL2C", 2),
    ("alg-sl2C", 2),
    ("pgrp-GL2R-split", 2),
    ("pgrp-GL2R-rotation", 2),
    ("palg-gl2R-split", 2),
    ("palg-gl2R-rotation", 2),
];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            Outcome { pass: true, detail: summary }
        } else {
            Outcome { pass: false, detail: failures.join("; ") }
        }
    }
}

fn lookup(id: &str) -> &'static EnsembleInstance {
    Catalog::shared().lookup(id).expect("registered instance")
}

fn within(limit: Duration, elapsed: Duration, what: &str, failures: &mut Vec<String>) {
    if elapsed > limit {
        failures.push(format!("{what} took {:.1}s > {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
    }
}

fn covering_degree(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (id, d) in DEGREES {
        let inst = lookup(id);
        let mut counts = BTreeMap::new();
        let (mut res, mut sep) = (0f64, f64::INFINITY);
        for i in 0..PROBES {
            let x = sample_regular_point(inst, &mut RngStream::new(SEED, i as u64), tol).expect("regular draw");
            match fiber(inst, &x, tol) {
                Ok(r) => {
                    *counts.entry(r.count).or_insert(0) += 1;
                    res = res.max(r.max_residual);
                    sep = sep.min(r.min_coset_separation);
                }
                Err(e) => failures.push(format!("{id} probe {i}: {e}")),
            }
        }
        if counts.keys().any(|&c| c != d) || res >= 1e-8 || sep <= 1e-4 {
            failures.push(format!("{id}: counts {counts:?} (want {d}), residual {res:.1e}, separation {sep:.1e}"));
        }
    }
    within(Duration::from_secs(30), start.elapsed(), "fiber sweep", &mut failures);
    Outcome::new(failures, format!("15 instances x {PROBES} points, all counts exact"))
}

fn conditions(reports: &[ConditionReport], elapsed: Duration) -> Outcome {
    let mut failures = Vec::new();
    for r in reports {
        let inst = lookup(&r.instance_id);
        if r.max_rank_defect != 0 || r.isotropy_observed != [inst.stabilizer_dim] || r.max_gram_entry.is_nan()
            || r.max_gram_entry >= 1e-8 {
            failures.push(format!(
                "{}: rank defect {}, isotropy {:?} (want {}), gram {:.1e}",
                r.instance_id, r.max_rank_defect, r.isotropy_observed, inst.stabilizer_dim, r.max_gram_entry
            ));
        }
        if !r.errors.is_empty() {
            failures.push(format!("{}: {} probe errors", r.instance_id, r.errors.len()));
        }
    }
    within(Duration::from_secs(10), elapsed, "condition runs", &mut failures);
    let gram = reports.iter().map(|r| r.max_gram_entry).fold(0.0, f64::max);
    Outcome::new(failures, format!("{} instances, rank defect 0, max Gram entry {gram:.1e}", reports.len()))
}

fn regularity(reports: &[ConditionReport]) -> Outcome {
    let mut failures = Vec::new();
    for r in reports {
        let det_ok = r.min_abs_det > 1e-10;
        let fd_ok = r.max_det_fd_relative_error <= 1e-6;
        if !det_ok || !fd_ok {
            failures.push(format!(
                "{}: min |det| {:.1e}, finite-difference error {:.1e}",
                r.instance_id, r.min_abs_det, r.max_det_fd_relative_error
            ));
        }
    }
    let det = reports.iter().map(|r| r.min_abs_det).fold(f64::INFINITY, f64::min);
    let fd = reports.iter().map(|r| r.max_det_fd_relative_error).fold(0.0, f64::max);
    Outcome::new(failures, format!("min |det| {det:.2e}, max finite-difference error {fd:.1e}"))
}

fn root_products(tol: &Tolerances) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0f64;
    let cases = [
        ("lin-sym-O(2)", 1e-6),
        ("lin-sym-O(3)", 1e-6),
        ("lin-sym-O(4)", 1e-6),
        ("alg-u(2)", 1e-6),
        ("alg-u(3)", 1e-6),
        ("grp-U(2)", 1e-6),
        ("grp-U(3)", 1e-6),
        ("cpt-sphere", 1e-9),
    ];
    for (k, (id, bound)) in cases.into_iter().enumerate() {
        match jacobian_root_scan(lookup(id), PROBES, &mut RngStream::new(SEED, 100 + k as u64), tol) {
            Ok(s) if s.max_deviation < bound => worst = worst.max(s.max_deviation),
            Ok(s) => failures.push(format!("{id}: deviation {:.1e} >= {bound:.0e}", s.max_deviation)),
            Err(e) => failures.push(format!("{id}: {e}")),
        }
    }
    Outcome::new(failures, format!("{} scans, max deviation {worst:.1e}", cases.len()))
}

fn integration_formula(tol: &Tolerances) -> Outcome {
    let mut failures = Vec::new();
    let ids = ["lin-sym-O(2)", "lin-sym-O(3)", "alg-u(2)", "alg-u(3)", "grp-U(2)", "grp-U(3)", "nl-posdef-O(2)", "cpt-sphere"];
    let mut checks = 0;
    for id in ids {
        let inst = lookup(id);
        let start = Instant::now();
        match verify_integration_all(inst, &TestFunction::registry_for(inst), SAMPLES, SEED, tol) {
            Ok(vs) => {
                for v in vs {
                    checks += 1;
                    if !v.pass {
                        failures.push(format!("{id} {}: gap {:.2e} > 4 x {:.2e}", v.f_id, v.gap, v.combined_se));
                    }
                    if id == "lin-sym-O(2)" && v.f_id == TestFunction::TraceSquare {
                        let off = (v.lhs.mean - 3.0).abs();
                        if off > 4.0 * v.lhs.std_error {
                            failures.push(format!("anchor E tr x^2 = {:.4}, want 3 within 4 SE", v.lhs.mean));
                        }
                    }
                }
            }
            Err(e) => failures.push(format!("{id}: {e}")),
        }
        within(Duration::from_secs(60), start.elapsed(), id, &mut failures);
    }
    Outcome::new(failures, format!("{checks} two-sided comparisons at {SAMPLES} samples, anchor E tr x^2 = 3 holds"))
}

fn histograms(tol: &Tolerances) -> Outcome {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for id in ["cpt-sphere", "lin-sym-O(2)", "grp-U(2)"] {
        match density_histogram(lookup(id), SAMPLES, 40, SEED, tol) {
            Ok(h) => {
                parts.push(format!("{id} chi2 {:.1}/{:.1}", h.chi2, h.threshold));
                if !h.pass {
                    failures.push(format!("{id}: chi2 {:.1} > {:.1} (dof {})", h.chi2, h.threshold, h.dof));
                }
            }
            Err(e) => failures.push(format!("{id}: {e}")),
        }
    }
    Outcome::new(failures, parts.join(", "))
}

fn slice_escape(reports: &[ConditionReport], tol: &Tolerances) -> Outcome {
    let mut failures = Vec::new();
    let (mut lo, mut hi, mut hits) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for r in reports {
        match &r.escape {
            Some(e) => {
                lo = lo.min(e.min_slope);
                hi = hi.max(e.max_slope);
                hits += e.screen_hits;
                if e.min_slope < tol.escape_slope_min || e.max_slope > tol.escape_slope_max || e.unmatched_hits > 0 {
                    failures.push(format!(
                        "{}: slopes [{:.3}, {:.3}], {} unmatched screen hits",
                        r.instance_id, e.min_slope, e.max_slope, e.unmatched_hits
                    ));
                }
            }
            None => failures.push(format!("{}: no escape record", r.instance_id)),
        }
        if r.verdicts.iter().any(|v| v.check == "slice-escape" && !v.pass) {
            failures.push(format!("{}: slice-escape verdict failed", r.instance_id));
        }
    }
    Outcome::new(failures, format!("slopes in [{lo:.4}, {hi:.4}], {hits} screen hits all matched to Weyl cosets"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_weylcover");
    let runs: [&[&str]; 2] = [
        &["verify", "--instance", "lin-sym-O2,grp-U2,grp-SL2C,palg-gl2R-split", "--probes", "50", "--seed", "42", "--no-timestamp"],
        &["integrate", "--instance", "lin-sym-O2,cpt-sphere", "--samples", "20000", "--seed", "42", "--no-timestamp"],
    ];
    let mut failures = Vec::new();
    for args in runs {
        let outputs: Vec<_> = ["1", "4"]
            .iter()
            .map(|t| Command::new(bin).args(args).env("WEYLCOVER_THREADS", t).output().expect("binary runs"))
            .collect();
        for o in &outputs {
            if !o.status.success() {
                failures.push(format!("`{}` exited with {:?}", args[0], o.status.code()));
            }
        }
        if outputs[0].stdout != outputs[1].stdout || outputs[0].stdout.is_empty() {
            failures.push(format!("`{}` reports differ between 1 and 4 workers", args[0]));
        }
    }
    Outcome::new(failures, "verify and integrate reports byte-identical at 1 and 4 workers".to_string())
}

fn negative_control() -> Outcome {
    let catalog = fixtures::corrupted_catalog();
    let mut failures = Vec::new();
    for command in ["verify", "fiber"] {
        let args: Vec<String> = ["weylcover", command, "--instance", fixtures::CORRUPT_ID, "--probes", "20", "--no-timestamp"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(&args, &catalog, None, &mut out, &mut err);
        if code != EXIT_FAIL {
            failures.push(format!("{command}: exit {code}, want {EXIT_FAIL}"));
        }
        let report: serde_json::Value = match serde_json::from_slice(&out) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{command}: report is not JSON ({e})"));
                continue;
            }
        };
        let errors = match command {
            "verify" => &report["results"][0]["errors"],
            _ => &report["errors"],
        };
        let has_defect = errors.as_array().is_some_and(|a| a.iter().any(|e| e["kind"] == "FiberDefect"));
        if !has_defect || report["pass"] != false {
            failures.push(format!("{command}: no FiberDefect record in the report"));
        }
    }
    Outcome::new(failures, "wrong-degree fixture exits 1 with FiberDefect records".to_string())
}

fn main() {
    let tol = Tolerances::default();
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    fn timed(results: &mut Vec<(usize, &'static str, Outcome, Duration)>, n: usize, name: &'static str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let o = f();
        results.push((n, name, o, start.elapsed()));
    }

    timed(&mut results, 1, "covering degree", || covering_degree(&tol));

    let start = Instant::now();
    let reports: Vec<ConditionReport> = Catalog::shared()
        .iter()
        .map(|i| run_conditions(i, PROBES, SEED, &ConditionOptions::default(), &tol))
        .collect();
    let conditions_time = start.elapsed();

    timed(&mut results, 2, "transversality, isotropy, orthogonality", || conditions(&reports, conditions_time));
    // The shared condition runs are charged to criterion 2.
    results[1].3 += conditions_time;
    timed(&mut results, 3, "regularity of phi", || regularity(&reports));
    timed(&mut results, 4, "root-product law", || root_products(&tol));
    timed(&mut results, 5, "integration formula", || integration_formula(&tol));
    timed(&mut results, 6, "eigenvalue-density histograms", || histograms(&tol));
    timed(&mut results, 7, "slice escape and global screen", || slice_escape(&reports, &tol));
    timed(&mut results, 8, "determinism across worker counts", determinism);
    timed(&mut results, 9, "negative control", negative_control);

    println!();
    let mut all = true;
    for (n, name, o, t) in &results {
        all &= o.pass;
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} [{tag}] {name} ({:.2}s): {}", t.as_secs_f64(), o.detail);
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("\nacceptance: {passed}/{} criteria passed", results.len());
    if !all {
        std::process::exit(1);
    }
}
