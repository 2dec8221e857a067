//! Surrogate for `N_y = N`: elements near N but off it must move the slice
//! point off Y at first order, and random group elements that keep it on Y
//! must lie in a known coset.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::linalg::singular_values_of_columns;
use crate::numeric::{DenseMatrix, RngStream};
use crate::registry::EnsembleInstance;
use crate::tol::Tolerances;
use crate::weyl::coset_reps;

/// Default step sweep.
pub const ESCAPE_SWEEP: [f64; 3] = [1e-5, 1e-4, 1e-3];

/// Default size of the global random screen.
pub const SCREEN_DRAWS: usize = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct EscapeRecord {
    /// Fitted `log D` vs `log ε` slope, one per coset representative.
    pub slopes: Vec<f64>,
    /// Smallest `D(ε) / (ε·σ_min)` over the sweep.
    pub min_escape_ratio: f64,
    pub screen_draws: usize,
    /// Screen hits, counting the planted `w·k` elements.
    pub screen_hits: usize,
    pub unmatched_hits: usize,
    pub pass: bool,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Smallest singular value of the ambient orbit map restricted to the
/// transversal directions.
fn transversal_floor(instance: &EnsembleInstance, at: &DenseMatrix) -> f64 {
    let cols: Vec<Vec<f64>> = instance
        .transversal_basis()
        .iter()
        .map(|xi| instance.orbit_derivative(xi, at).flatten())
        .collect();
    singular_values_of_columns(&cols).last().copied().unwrap_or(0.0)
}

fn random_direction(basis: &[DenseMatrix], rng: &mut RngStream) -> DenseMatrix {
    let c: Vec<f64> = basis.iter().map(|_| rng.normal()).collect();
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    basis.iter().zip(&c).fold(DenseMatrix::zeros(basis[0].field(), basis[0].rows(), basis[0].cols()), |acc, (b, &k)| {
        acc.add(&b.scale(k / norm))
    })
}

/// Measures the escape record without judging it.
pub fn measure_slice_escape(
    instance: &EnsembleInstance,
    y: &[f64],
    sweep: &[f64],
    screen_draws: usize,
    rng: &mut RngStream,
    tol: &Tolerances,
) -> Result<EscapeRecord> {
    instance.require_regular(y, tol)?;
    let weyl = coset_reps(instance, tol)?;
    let at = instance.embed(y);
    let group = instance.group();
    let basis = instance.transversal_basis();
    let floor = transversal_floor(instance, &at);

    let mut slopes = Vec::with_capacity(weyl.order);
    let mut min_ratio = f64::INFINITY;
    let log_eps: Vec<f64> = sweep.iter().map(|e| e.ln()).collect();
    for rep in &weyl.reps {
        let xi = random_direction(&basis, rng);
        let mut log_d = Vec::with_capacity(sweep.len());
        for &eps in sweep {
            let g = rep.matrix.matmul(&group.exp(&xi.scale(eps)));
            let d = instance.dist_to_slice(&instance.act_unchecked(&g, &at));
            min_ratio = min_ratio.min(d / (eps * floor));
            log_d.push(d.ln());
        }
        slopes.push(least_squares_slope(&log_eps, &log_d));
    }

    let mut hits = 0;
    let mut unmatched = 0;
    let mut screen = |g: DenseMatrix| {
        if instance.dist_to_slice(&instance.act_unchecked(&g, &at)) < tol.screen_hit {
            hits += 1;
            let nearest = weyl
                .reps
                .iter()
                .map(|r| instance.coset_distance_unchecked(&g, &r.matrix))
                .fold(f64::INFINITY, f64::min);
            if nearest >= tol.screen_match {
                unmatched += 1;
            }
        }
    };
    for _ in 0..screen_draws {
        screen(group.random_element(rng));
    }
    // Known members of N must register as hits and match their coset.
    for rep in &weyl.reps {
        let k = instance.sample_stabilizer(rng);
        screen(rep.matrix.matmul(&k));
    }

    let slopes_ok = slopes.iter().all(|s| (tol.escape_slope_min..=tol.escape_slope_max).contains(s));
    let pass = slopes_ok && min_ratio >= tol.escape_factor && unmatched == 0 && hits >= weyl.order;
    Ok(EscapeRecord {
        slopes,
        min_escape_ratio: min_ratio,
        screen_draws,
        screen_hits: hits,
        unmatched_hits: unmatched,
        pass,
    })
}

/// [`measure_slice_escape`], failing with [`Error::EscapeDefect`] when the
/// record does not pass.
pub fn check_slice_escape(
    instance: &EnsembleInstance,
    y: &[f64],
    sweep: &[f64],
    rng: &mut RngStream,
    tol: &Tolerances,
) -> Result<EscapeRecord> {
    let rec = measure_slice_escape(instance, y, sweep, SCREEN_DRAWS, rng, tol)?;
    if rec.pass {
        Ok(rec)
    } else {
        Err(Error::EscapeDefect(format!(
            "{}: slopes {:?}, escape ratio {:.3e}, {} unmatched of {} hits",
            instance.id, rec.slopes, rec.min_escape_ratio, rec.unmatched_hits, rec.screen_hits
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::instance_lookup;

    #[test]
    fn two_by_two_symmetric_escapes_linearly() {
        let inst = instance_lookup("lin-sym-O(2)").unwrap();
        let rec = check_slice_escape(&inst, &[2.0, 1.0], &ESCAPE_SWEEP, &mut RngStream::new(1, 0), &Tolerances::default())
            .unwrap();
        for s in rec.slopes {
            assert!((s - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs: Vec<f64> = [1e-5f64, 1e-4, 1e-3].iter().map(|e| e.ln()).collect();
        let ys: Vec<f64> = [1e-5f64, 1e-4, 1e-3].iter().map(|e| (3.0 * e * e).ln()).collect();
        assert!((least_squares_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }
}
