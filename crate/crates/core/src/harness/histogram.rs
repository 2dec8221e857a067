//! Histogram of the canonical slice point's statistic against the density
//! `V(y)·p(y)` integrated over the canonical chamber.

use rayon::prelude::*;
use serde::Serialize;

use super::montecarlo::BATCH;
use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::registry::{EnsembleInstance, HistogramLayout};
use crate::tol::Tolerances;

/// Trapezoid nodes per bin along the statistic, and along the transverse axis.
pub const QUADRATURE_NODES: usize = 512;

/// Bins expecting fewer counts are pooled with their neighbours.
pub const MIN_EXPECTED: f64 = 20.0;

const HISTOGRAM_STREAM: u64 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub observed: u64,
    /// Expected probability mass.
    pub expected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramComparison {
    pub instance_id: String,
    pub statistic: &'static str,
    pub samples: usize,
    /// Bins after pooling.
    pub bins: Vec<HistogramBin>,
    pub chi2: f64,
    pub dof: usize,
    pub threshold: f64,
    pub pass: bool,
}

impl HistogramComparison {
    /// Rows of `(bin_left, bin_right, observed, expected count)`.
    pub fn rows(&self) -> Vec<(f64, f64, u64, f64)> {
        self.bins.iter().map(|b| (b.left, b.right, b.observed, b.expected * self.samples as f64)).collect()
    }
}

fn trapezoid(a: f64, b: f64, nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / (nodes - 1) as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for k in 1..nodes - 1 {
        s += f(a + k as f64 * h);
    }
    s * h
}

/// Unnormalized mass of `V·p` over `[a, b]` of the statistic.
fn bin_mass(instance: &EnsembleInstance, layout: &HistogramLayout, a: f64, b: f64, tol: &Tolerances) -> f64 {
    let weight = |y: Vec<f64>| {
        let v = instance.root_product(&y).unwrap_or(0.0);
        v * instance.density_at(&instance.embed(&y), tol)
    };
    trapezoid(a, b, QUADRATURE_NODES, |s| match layout.transverse {
        None => weight((layout.chamber_point)(s, 0.0)),
        Some((lo, hi)) => trapezoid(lo, hi, QUADRATURE_NODES, |t| weight((layout.chamber_point)(s, t))),
    })
}

/// Expected bin probabilities, normalized to sum to one.
pub fn expected_probabilities(instance: &EnsembleInstance, edges: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let layout = instance
        .histogram_layout()
        .ok_or_else(|| Error::NotEligible(instance.id.clone(), "no histogram layout"))?;
    let masses: Vec<f64> = edges.par_windows(2).map(|w| bin_mass(instance, &layout, w[0], w[1], tol)).collect();
    let total: f64 = masses.iter().sum();
    Ok(masses.iter().map(|m| m / total).collect())
}

/// Merges bins left to right until each expects at least [`MIN_EXPECTED`].
fn pool(bins: Vec<HistogramBin>, samples: usize) -> Vec<HistogramBin> {
    let n = samples as f64;
    let mut out: Vec<HistogramBin> = Vec::new();
    let mut open: Option<HistogramBin> = None;
    for b in bins {
        let cur = match open.take() {
            Some(o) => HistogramBin { left: o.left, right: b.right, observed: o.observed + b.observed, expected: o.expected + b.expected },
            None => b,
        };
        if cur.expected * n >= MIN_EXPECTED {
            out.push(cur);
        } else {
            open = Some(cur);
        }
    }
    if let Some(rest) = open {
        match out.last_mut() {
            Some(last) => {
                last.right = rest.right;
                last.observed += rest.observed;
                last.expected += rest.expected;
            }
            None => out.push(rest),
        }
    }
    out
}

pub fn density_histogram(
    instance: &EnsembleInstance,
    samples: usize,
    bins: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<HistogramComparison> {
    if !instance.harness_eligible {
        return Err(Error::NotEligible(instance.id.clone(), "G is not compact or p is not normalizable"));
    }
    let layout = instance
        .histogram_layout()
        .ok_or_else(|| Error::NotEligible(instance.id.clone(), "no histogram layout"))?;
    let (lo, hi) = layout.range;
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| lo + k as f64 * width).collect();

    let base = RngStream::new(seed, HISTOGRAM_STREAM);
    let batches = samples.div_ceil(BATCH);
    let partial: Vec<Result<Vec<u64>>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = base.fork(b as u64);
            let mut counts = vec![0u64; bins];
            for _ in 0..BATCH.min(samples - b * BATCH) {
                let x = crate::checker::sample_regular_point(instance, &mut rng, tol)?;
                let (_, y) = instance.decompose(&x, tol)?;
                let s = (layout.statistic)(&y.coords);
                let k = (((s - lo) / width).floor().max(0.0) as usize).min(bins - 1);
                counts[k] += 1;
            }
            Ok(counts)
        })
        .collect();
    let mut observed = vec![0u64; bins];
    for part in partial {
        for (o, c) in observed.iter_mut().zip(part?) {
            *o += c;
        }
    }

    let expected = expected_probabilities(instance, &edges, tol)?;
    let raw: Vec<HistogramBin> = (0..bins)
        .map(|k| HistogramBin { left: edges[k], right: edges[k + 1], observed: observed[k], expected: expected[k] })
        .collect();
    let pooled = pool(raw, samples);
    if pooled.len() < 2 || pooled.iter().any(|b| b.expected * (samples as f64) < MIN_EXPECTED) {
        return Err(Error::InsufficientSamples(format!(
            "{samples} samples leave {} usable bins for {}",
            pooled.len(),
            instance.id
        )));
    }
    let n = samples as f64;
    let chi2: f64 = pooled
        .iter()
        .map(|b| {
            let e = b.expected * n;
            (b.observed as f64 - e).powi(2) / e
        })
        .sum();
    let dof = pooled.len() - 1;
    let threshold = dof as f64 + 4.0 * (2.0 * dof as f64).sqrt();
    Ok(HistogramComparison {
        instance_id: instance.id.clone(),
        statistic: layout.statistic_name,
        samples,
        bins: pooled,
        chi2,
        dof,
        threshold,
        pass: chi2 <= threshold,
    })
}
