//! Haar-distributed draws from compact matrix groups.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::complex::{Cplx, ZERO};
use super::matrix::{DenseMatrix, Field};
use super::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactGroup {
    /// Real orthogonal `n × n` matrices.
    Orthogonal(usize),
    /// Planar rotations, as `2 × 2` real matrices.
    Rotation2,
    Unitary(usize),
    /// Diagonal unitaries.
    Torus(usize),
}

/// Draws from the invariant probability measure on `group`.
///
/// Orthogonal and unitary draws are the `Q` factor of a Gaussian matrix with
/// the triangular factor's diagonal normalized to be positive, computed here
/// by twice-iterated modified Gram–Schmidt (which produces exactly that `Q`).
pub fn haar_sample(group: CompactGroup, rng: &mut RngStream) -> DenseMatrix {
    match group {
        CompactGroup::Rotation2 => {
            let t = TAU * rng.uniform();
            let (s, c) = t.sin_cos();
            DenseMatrix::real_rows(&[&[c, -s], &[s, c]])
        }
        CompactGroup::Torus(n) => {
            let d: Vec<Cplx> = (0..n).map(|_| Cplx::cis(TAU * rng.uniform())).collect();
            DenseMatrix::diag_complex(&d)
        }
        CompactGroup::Orthogonal(n) => {
            let cols: Vec<Vec<Cplx>> =
                (0..n).map(|_| (0..n).map(|_| Cplx::real(rng.normal())).collect()).collect();
            from_columns(orthonormalize(cols), Field::Real)
        }
        CompactGroup::Unitary(n) => {
            let cols: Vec<Vec<Cplx>> = (0..n).map(|_| (0..n).map(|_| rng.complex_normal()).collect()).collect();
            from_columns(orthonormalize(cols), Field::Complex)
        }
    }
}

fn orthonormalize(mut cols: Vec<Vec<Cplx>>) -> Vec<Vec<Cplx>> {
    let n = cols.len();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj = cols[k].iter().zip(&cols[j]).fold(ZERO, |acc, (q, v)| acc + q.conj() * *v);
                let (done, rest) = cols.split_at_mut(j);
                for (v, q) in rest[0].iter_mut().zip(&done[k]) {
                    *v -= proj * *q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v = v.scale(1.0 / norm);
        }
    }
    cols
}

fn from_columns(cols: Vec<Vec<Cplx>>, field: Field) -> DenseMatrix {
    let n = cols.len();
    let mut m = DenseMatrix::zeros(field, n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m.set(i, j, z);
        }
    }
    m
}
