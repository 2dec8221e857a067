//! Two-sided Monte Carlo for the integration formula.

use rayon::prelude::*;
use serde::Serialize;

use super::functions::TestFunction;
use crate::checker::sample_regular_point;
use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::registry::EnsembleInstance;
use crate::tol::Tolerances;
use crate::weyl::{coset_reps, weyl_act};

/// Samples per batch; batch `b` draws from `base.fork(b)`.
pub const BATCH: usize = 1000;

pub const MIN_SAMPLES: usize = 1000;

/// Stream indices of the two sides under a master seed.
const LHS_STREAM: u64 = 1;
const RHS_STREAM: u64 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct MCEstimate {
    pub f_id: TestFunction,
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: usize,
}

/// Running `(count, mean, M2)`.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0.0 {
            return b;
        }
        if b.n == 0.0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        Moments { n, mean: a.mean + d * b.n / n, m2: a.m2 + b.m2 + d * d * a.n * b.n / n }
    }
}

/// Fixed-shape pairwise reduction, so the result depends only on the batch order.
fn pairwise(mut v: Vec<Moments>) -> Moments {
    if v.is_empty() {
        return Moments::default();
    }
    while v.len() > 1 {
        v = v.chunks(2).map(|c| if c.len() == 2 { Moments::merge(c[0], c[1]) } else { c[0] }).collect();
    }
    v[0]
}

fn estimates(fs: &[TestFunction], per_batch: Vec<Vec<Moments>>) -> Vec<MCEstimate> {
    fs.iter()
        .enumerate()
        .map(|(k, &f)| {
            let m = pairwise(per_batch.iter().map(|b| b[k]).collect());
            let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
            MCEstimate { f_id: f, mean: m.mean, std_error: (var / m.n).sqrt(), samples: m.n as usize }
        })
        .collect()
}

fn require_eligible(instance: &EnsembleInstance, samples: usize) -> Result<()> {
    if !instance.harness_eligible {
        return Err(Error::NotEligible(instance.id.clone(), "G is not compact or p is not normalizable"));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!("{samples} < {MIN_SAMPLES}")));
    }
    Ok(())
}

/// Runs `draw` over `samples` points split into parallel batches.
fn batched<F>(fs: &[TestFunction], samples: usize, base: RngStream, draw: F) -> Result<Vec<MCEstimate>>
where
    F: Fn(&mut RngStream) -> Result<crate::numeric::DenseMatrix> + Sync,
{
    let batches = samples.div_ceil(BATCH);
    let per_batch: Vec<Result<Vec<Moments>>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let n = BATCH.min(samples - b * BATCH);
            let mut rng = base.fork(b as u64);
            let mut acc = vec![Moments::default(); fs.len()];
            for _ in 0..n {
                let x = draw(&mut rng)?;
                for (m, f) in acc.iter_mut().zip(fs) {
                    m.push(f.evaluate(&x));
                }
            }
            Ok(acc)
        })
        .collect();
    Ok(estimates(fs, per_batch.into_iter().collect::<Result<Vec<_>>>()?))
}

/// `∫ f p dx` by sampling `x ~ p`.
pub fn mc_lhs(
    instance: &EnsembleInstance,
    fs: &[TestFunction],
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<MCEstimate>> {
    require_eligible(instance, samples)?;
    batched(fs, samples, RngStream::new(seed, LHS_STREAM), |rng| Ok(instance.sample_ambient(rng, tol)?.value))
}

/// `(1/d) ∫_Y ∫_{G/K} f(σ_g(y)) dμ dν` with `dν/d` sampled as the canonical
/// slice point of `x ~ p` moved by a uniform Weyl representative, and `g`
/// drawn from Haar measure.
pub fn mc_rhs(
    instance: &EnsembleInstance,
    fs: &[TestFunction],
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<MCEstimate>> {
    require_eligible(instance, samples)?;
    let weyl = coset_reps(instance, tol)?;
    let group = instance.group();
    batched(fs, samples, RngStream::new(seed, RHS_STREAM), |rng| {
        let x = sample_regular_point(instance, rng, tol)?;
        let (_, y) = instance.decompose(&x, tol)?;
        let rep = &weyl.reps[rng.below(weyl.order)];
        let y = weyl_act(instance, rep, &y.coords);
        let g = group.random_element(rng);
        Ok(instance.act_unchecked(&g, &instance.embed(&y)))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrationVerdict {
    pub instance_id: String,
    pub f_id: TestFunction,
    pub lhs: MCEstimate,
    pub rhs: MCEstimate,
    pub gap: f64,
    pub combined_se: f64,
    pub multiplier: f64,
    pub pass: bool,
}

/// Compares both sides for every function in `fs`; draws are shared across functions.
pub fn verify_integration_all(
    instance: &EnsembleInstance,
    fs: &[TestFunction],
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<IntegrationVerdict>> {
    let lhs = mc_lhs(instance, fs, samples, seed, tol)?;
    let rhs = mc_rhs(instance, fs, samples, seed, tol)?;
    Ok(lhs
        .into_iter()
        .zip(rhs)
        .map(|(l, r)| {
            let gap = (l.mean - r.mean).abs();
            let combined_se = (l.std_error.powi(2) + r.std_error.powi(2)).sqrt();
            IntegrationVerdict {
                instance_id: instance.id.clone(),
                f_id: l.f_id,
                pass: gap <= tol.stat_multiplier * combined_se,
                lhs: l,
                rhs: r,
                gap,
                combined_se,
                multiplier: tol.stat_multiplier,
            }
        })
        .collect())
}

pub fn verify_integration(
    instance: &EnsembleInstance,
    f: TestFunction,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<IntegrationVerdict> {
    Ok(verify_integration_all(instance, &[f], samples, seed, tol)?.remove(0))
}
