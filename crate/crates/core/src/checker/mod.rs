//! Numerical checks of the covering hypotheses on registered instances.

mod conditions;
mod escape;
mod fiber;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use conditions::{
    check_branch_exhaustiveness, check_invariance, check_isotropy_dim, check_orthogonality, check_phi_regular,
    check_transversality, phi_columns, phi_columns_fd, phi_det_fd, BranchRecord, InvarianceRecord,
};
pub use escape::{check_slice_escape, measure_slice_escape, EscapeRecord, ESCAPE_SWEEP, SCREEN_DRAWS};
pub use fiber::{fiber, FiberEntry, FiberReport};

use crate::error::{Error, Result};
use crate::numeric::{DenseMatrix, RngStream};
use crate::registry::{Catalog, EnsembleInstance};
use crate::tol::Tolerances;

/// Size of each parallel chunk of the invariance check.
const INVARIANCE_CHUNK: usize = 1000;

/// Draws a regular ambient point from p, retrying past the measure-zero set.
pub fn sample_regular_point(instance: &EnsembleInstance, rng: &mut RngStream, tol: &Tolerances) -> Result<DenseMatrix> {
    for _ in 0..1000 {
        let x = instance.sample_ambient(rng, tol)?.value;
        if instance.decompose(&x, tol).is_ok() {
            return Ok(x);
        }
    }
    Err(Error::RejectionOverflow(1000))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionOptions {
    pub invariance_samples: usize,
    pub screen_draws: usize,
    pub sweep: Vec<f64>,
    pub escape: bool,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        Self { invariance_samples: 10_000, screen_draws: SCREEN_DRAWS, sweep: ESCAPE_SWEEP.to_vec(), escape: true }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub probe: usize,
    pub stage: &'static str,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberSummary {
    /// Observed preimage count → number of probes.
    pub counts: BTreeMap<usize, usize>,
    pub max_residual: f64,
    pub min_coset_separation: f64,
    pub defects: usize,
    /// The first few defective reports in full.
    pub defect_reports: Vec<FiberReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EscapeSummary {
    pub min_slope: f64,
    pub max_slope: f64,
    pub min_escape_ratio: f64,
    pub screen_draws: usize,
    pub screen_hits: usize,
    pub unmatched_hits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub instance_id: String,
    pub seed: u64,
    pub probes: usize,
    pub expected_degree: usize,
    pub thresholds: Tolerances,
    pub options: ConditionOptions,
    /// `None` when skipped; see `invariance_note`.
    pub invariance: Option<InvarianceRecord>,
    pub invariance_note: String,
    pub branch_exhaustiveness: Option<BranchRecord>,
    pub max_rank_defect: usize,
    pub stabilizer_dim: usize,
    pub isotropy_observed: Vec<usize>,
    pub max_gram_entry: f64,
    pub min_abs_det: f64,
    pub max_det_fd_relative_error: f64,
    pub fiber: FiberSummary,
    pub escape: Option<EscapeSummary>,
    pub errors: Vec<ErrorRecord>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

#[derive(Default)]
struct ProbeOutcome {
    rank_defect: Option<usize>,
    isotropy: Option<usize>,
    gram: Option<f64>,
    det: Option<f64>,
    det_fd_error: Option<f64>,
    fiber: Option<FiberReport>,
    fiber_defect: bool,
    escape: Option<EscapeRecord>,
    errors: Vec<ErrorRecord>,
}

fn record<T>(out: &mut Vec<ErrorRecord>, probe: usize, stage: &'static str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            out.push(ErrorRecord { probe, stage, kind: e.kind(), message: e.to_string() });
            None
        }
    }
}

fn run_probe(
    instance: &EnsembleInstance,
    probe: usize,
    seed: u64,
    opts: &ConditionOptions,
    tol: &Tolerances,
) -> ProbeOutcome {
    let mut out = ProbeOutcome::default();
    let mut rng = RngStream::new(seed, probe as u64 + 1);
    let Some(x) = record(&mut out.errors, probe, "sample", sample_regular_point(instance, &mut rng, tol)) else {
        return out;
    };
    match fiber(instance, &x, tol) {
        Ok(r) => out.fiber = Some(r),
        Err(Error::FiberDefect(r)) => {
            out.errors.push(ErrorRecord { probe, stage: "fiber", kind: "FiberDefect", message: r.summary() });
            out.fiber = Some(*r);
            out.fiber_defect = true;
        }
        Err(e) => {
            record::<()>(&mut out.errors, probe, "fiber", Err(e));
        }
    }
    let Some((_, y)) = record(&mut out.errors, probe, "decompose", instance.decompose(&x, tol)) else {
        return out;
    };
    let y = y.coords;
    out.rank_defect = record(&mut out.errors, probe, "transversality", check_transversality(instance, &y, tol));
    out.isotropy = record(&mut out.errors, probe, "isotropy", check_isotropy_dim(instance, &y, tol));
    out.gram = record(&mut out.errors, probe, "orthogonality", check_orthogonality(instance, &y, tol));
    out.det = record(&mut out.errors, probe, "phi-regular", check_phi_regular(instance, &y, tol));
    if let (Some(det), Some(fd)) = (out.det, record(&mut out.errors, probe, "phi-regular-fd", phi_det_fd(instance, &y, tol))) {
        out.det_fd_error = Some((fd - det).abs() / det.abs().max(f64::MIN_POSITIVE));
    }
    if opts.escape {
        out.escape = record(
            &mut out.errors,
            probe,
            "slice-escape",
            measure_slice_escape(instance, &y, &opts.sweep, opts.screen_draws, &mut rng, tol),
        );
    }
    out
}

fn branch_siblings(instance: &EnsembleInstance) -> Option<(EnsembleInstance, EnsembleInstance)> {
    instance.branch?;
    let stem = instance.id.rsplit_once('-')?.0;
    let catalog = Catalog::shared();
    let split = catalog.lookup(&format!("{stem}-split")).ok()?.clone();
    let rotation = catalog.lookup(&format!("{stem}-rotation")).ok()?.clone();
    Some((split, rotation))
}

/// Runs every check on `probes` random regular points and aggregates the extremes.
///
/// Probes run in parallel on per-probe streams `(seed, probe + 1)`; stream 0
/// feeds the invariance and branch checks. Aggregation happens in probe order,
/// so the report does not depend on the worker count.
pub fn run_conditions(
    instance: &EnsembleInstance,
    probes: usize,
    seed: u64,
    opts: &ConditionOptions,
    tol: &Tolerances,
) -> ConditionReport {
    let outcomes: Vec<ProbeOutcome> =
        (0..probes).into_par_iter().map(|p| run_probe(instance, p, seed, opts, tol)).collect();

    let mut errors = Vec::new();
    let base = RngStream::new(seed, 0);
    let (invariance, invariance_note) = if instance.harness_eligible {
        let chunks = opts.invariance_samples.div_ceil(INVARIANCE_CHUNK);
        let parts: Vec<Result<InvarianceRecord>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let n = INVARIANCE_CHUNK.min(opts.invariance_samples - c * INVARIANCE_CHUNK);
                check_invariance(instance, n, &mut base.fork(c as u64), tol)
            })
            .collect();
        let mut samples = 0;
        let mut successes = 0;
        let mut failed = false;
        for part in parts {
            match part {
                Ok(r) => {
                    samples += r.samples;
                    successes += r.successes;
                }
                Err(e) => {
                    failed = true;
                    errors.push(ErrorRecord { probe: 0, stage: "invariance", kind: e.kind(), message: e.to_string() });
                }
            }
        }
        if failed {
            (None, "invariance sampling failed".to_string())
        } else {
            let fraction = successes as f64 / samples.max(1) as f64;
            (Some(InvarianceRecord { samples, successes, fraction }), "run".to_string())
        }
    } else {
        (None, "skipped by policy: sampling is conditioned on regularity for this instance".to_string())
    };
    let branch_exhaustiveness = branch_siblings(instance).map(|(split, rotation)| {
        check_branch_exhaustiveness(&split, &rotation, opts.invariance_samples, &mut base.fork(u64::MAX), tol)
    });

    let mut max_rank_defect = 0;
    let mut isotropy_observed = Vec::new();
    let mut max_gram: f64 = 0.0;
    let mut min_det = f64::INFINITY;
    let mut max_fd: f64 = 0.0;
    let mut counts = BTreeMap::new();
    let mut max_residual: f64 = 0.0;
    let mut min_sep = f64::INFINITY;
    let mut defects = 0;
    let mut defect_reports = Vec::new();
    let mut escape: Option<EscapeSummary> = None;
    let mut escape_pass = true;
    let mut missing = false;

    for o in outcomes {
        errors.extend(o.errors);
        match (o.rank_defect, o.isotropy, o.gram, o.det, o.det_fd_error) {
            (Some(r), Some(i), Some(g), Some(d), Some(f)) => {
                max_rank_defect = max_rank_defect.max(r);
                if !isotropy_observed.contains(&i) {
                    isotropy_observed.push(i);
                }
                max_gram = max_gram.max(g);
                min_det = min_det.min(d);
                max_fd = max_fd.max(f);
            }
            _ => missing = true,
        }
        match o.fiber {
            Some(f) => {
                *counts.entry(f.count).or_insert(0) += 1;
                max_residual = max_residual.max(f.max_residual);
                min_sep = min_sep.min(f.min_coset_separation);
                if o.fiber_defect {
                    defects += 1;
                    if defect_reports.len() < 3 {
                        defect_reports.push(f);
                    }
                }
            }
            None => missing = true,
        }
        if opts.escape {
            match o.escape {
                Some(e) => {
                    escape_pass &= e.pass;
                    let s = escape.get_or_insert(EscapeSummary {
                        min_slope: f64::INFINITY,
                        max_slope: f64::NEG_INFINITY,
                        min_escape_ratio: f64::INFINITY,
                        screen_draws: 0,
                        screen_hits: 0,
                        unmatched_hits: 0,
                    });
                    for &sl in &e.slopes {
                        s.min_slope = s.min_slope.min(sl);
                        s.max_slope = s.max_slope.max(sl);
                    }
                    s.min_escape_ratio = s.min_escape_ratio.min(e.min_escape_ratio);
                    s.screen_draws += e.screen_draws;
                    s.screen_hits += e.screen_hits;
                    s.unmatched_hits += e.unmatched_hits;
                }
                None => missing = true,
            }
        }
    }
    isotropy_observed.sort_unstable();

    let mut verdicts = vec![
        Verdict { check: "all-probes-evaluated", pass: !missing && errors.is_empty() },
        Verdict { check: "transversality", pass: max_rank_defect == 0 },
        Verdict { check: "isotropy-dimension", pass: isotropy_observed == vec![instance.stabilizer_dim] },
        Verdict { check: "orthogonality", pass: max_gram < tol.orthogonality },
        Verdict { check: "phi-regular", pass: min_det > tol.det_floor && max_fd <= tol.fd_relative },
        Verdict {
            check: "fiber",
            pass: defects == 0
                && counts.keys().all(|&c| c == instance.expected_degree)
                && counts.values().sum::<usize>() == probes,
        },
    ];
    if opts.escape {
        verdicts.push(Verdict { check: "slice-escape", pass: escape_pass });
    }
    if let Some(inv) = &invariance {
        verdicts.push(Verdict { check: "invariance", pass: inv.fraction >= 1.0 - tol.invariance_failure });
    }
    if let Some(b) = &branch_exhaustiveness {
        verdicts.push(Verdict { check: "branch-exhaustiveness", pass: b.pass });
    }
    let pass = verdicts.iter().all(|v| v.pass);

    ConditionReport {
        instance_id: instance.id.clone(),
        seed,
        probes,
        expected_degree: instance.expected_degree,
        thresholds: tol.clone(),
        options: opts.clone(),
        invariance,
        invariance_note,
        branch_exhaustiveness,
        max_rank_defect,
        stabilizer_dim: instance.stabilizer_dim,
        isotropy_observed,
        max_gram_entry: max_gram,
        min_abs_det: min_det,
        max_det_fd_relative_error: max_fd,
        fiber: FiberSummary { counts, max_residual, min_coset_separation: min_sep, defects, defect_reports },
        escape,
        errors,
        verdicts,
        pass,
    }
}
