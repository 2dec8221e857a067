//! `U(n)` acting on itself by conjugation, sliced by the diagonal torus.

use std::f64::consts::{PI, TAU};

use super::common::{permutation_reps, torus_distance};
use super::family::{Family, Frame, HistogramLayout};
use super::group::{unit, GroupKind};
use crate::error::{Error, Result};
use crate::numeric::complex::{Cplx, I};
use crate::numeric::eigen::{circular_distance, min_circular_gap};
use crate::numeric::{eig_unitary, haar_sample, CompactGroup, DenseMatrix, Field, RngStream};
use crate::tol::Tolerances;

#[derive(Debug)]
pub(crate) struct UnitaryFamily {
    n: usize,
    frame: Frame,
}

impl UnitaryFamily {
    pub fn new(n: usize) -> Self {
        Self { n, frame: Frame::LeftInvariant(GroupKind::Unitary(n).lie_basis()) }
    }
}

fn circular_gap_statistic(y: &[f64]) -> f64 {
    circular_distance(y[0], y[1])
}

/// The canonical (ascending) phase pair at circular gap `c`, starting at `t`.
fn phase_pair(c: f64, t: f64) -> Vec<f64> {
    let a = t.rem_euclid(TAU);
    let b = (t + c).rem_euclid(TAU);
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

impl Family for UnitaryFamily {
    fn group(&self) -> GroupKind {
        GroupKind::Unitary(self.n)
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn embed(&self, y: &[f64]) -> DenseMatrix {
        DenseMatrix::diag_complex(&y.iter().map(|&t| Cplx::cis(t)).collect::<Vec<_>>())
    }

    fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64> {
        x.diagonal().iter().map(|z| z.arg().rem_euclid(TAU)).collect()
    }

    fn dist_to_slice(&self, x: &DenseMatrix) -> f64 {
        x.off_diagonal_norm()
    }

    fn decompose(&self, x: &DenseMatrix, tol: &Tolerances) -> Result<(DenseMatrix, Vec<f64>)> {
        let dec = eig_unitary(x, tol).map_err(|e| match e {
            Error::DegenerateSpectrum(g) => Error::NotRegular(g),
            other => other,
        })?;
        Ok((dec.frame.to_complex(), dec.values))
    }

    fn slice_gap(&self, y: &[f64]) -> f64 {
        min_circular_gap(y)
    }

    fn is_canonical(&self, y: &[f64]) -> bool {
        y.windows(2).all(|w| w[0] < w[1]) && y.iter().all(|&t| (0.0..TAU).contains(&t))
    }

    fn coord_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(&x, &y)| circular_distance(x, y).powi(2)).sum::<f64>().sqrt()
    }

    fn slice_directions(&self) -> Vec<DenseMatrix> {
        self.stabilizer_basis()
    }

    fn stabilizer_basis(&self) -> Vec<DenseMatrix> {
        (0..self.n).map(|j| unit(Field::Complex, self.n, j, j, I)).collect()
    }

    fn density(&self, _x: &DenseMatrix, _tol: &Tolerances) -> f64 {
        1.0
    }

    fn sample(&self, rng: &mut RngStream, _tol: &Tolerances) -> Result<DenseMatrix> {
        Ok(haar_sample(CompactGroup::Unitary(self.n), rng))
    }

    fn ambient_residual(&self, x: &DenseMatrix) -> f64 {
        self.group().membership_residual(x)
    }

    fn stabilizer_distance(&self, m: &DenseMatrix) -> f64 {
        torus_distance(m)
    }

    fn sample_stabilizer(&self, rng: &mut RngStream) -> DenseMatrix {
        haar_sample(CompactGroup::Torus(self.n), rng)
    }

    fn weyl_reps(&self) -> Vec<(DenseMatrix, String)> {
        permutation_reps(self.n, Field::Complex)
    }

    fn probe_slice(&self) -> Vec<f64> {
        (0..self.n).map(|k| 0.3 + 1.7 * k as f64).collect()
    }

    fn root_product(&self, y: &[f64]) -> Option<f64> {
        let mut v = 1.0;
        for i in 0..y.len() {
            for j in i + 1..y.len() {
                v *= (Cplx::cis(y[i]) - Cplx::cis(y[j])).norm_sqr();
            }
        }
        Some(v)
    }

    fn histogram(&self) -> Option<HistogramLayout> {
        if self.n != 2 {
            return None;
        }
        Some(HistogramLayout {
            statistic_name: "circular-phase-gap",
            statistic: circular_gap_statistic,
            range: (0.0, PI),
            transverse: Some((0.0, TAU)),
            chamber_point: phase_pair,
        })
    }
}
