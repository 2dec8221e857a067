//! Self-adjoint (cyclic Jacobi) and unitary (self-adjoint pencil)
//! eigendecompositions for small dense matrices.

use std::f64::consts::TAU;

use serde::Serialize;

use super::complex::{Cplx, ZERO};
use super::matrix::DenseMatrix;
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// Real eigenvalues, sorted descending.
    SelfAdjoint,
    /// Eigenphases in `[0, 2π)`, sorted ascending.
    Unitary,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenDecomposition {
    pub kind: SpectrumKind,
    pub values: Vec<f64>,
    /// Columns are the eigenvectors.
    pub frame: DenseMatrix,
    /// `‖A − F·diag·Fᴴ‖_F`.
    pub residual: f64,
}

impl EigenDecomposition {
    /// Smallest separation between eigenvalues; circular for eigenphases.
    pub fn min_gap(&self) -> f64 {
        match self.kind {
            SpectrumKind::SelfAdjoint => min_linear_gap(&self.values),
            SpectrumKind::Unitary => min_circular_gap(&self.values),
        }
    }

    /// Rejects spectra with a tie below `gap`.
    pub fn require_distinct(&self, gap: f64) -> Result<()> {
        let g = self.min_gap();
        if g <= gap {
            Err(Error::DegenerateSpectrum(g))
        } else {
            Ok(())
        }
    }

    pub fn diagonal(&self) -> DenseMatrix {
        match self.kind {
            SpectrumKind::SelfAdjoint => DenseMatrix::diag_real(&self.values),
            SpectrumKind::Unitary => {
                DenseMatrix::diag_complex(&self.values.iter().map(|&t| Cplx::cis(t)).collect::<Vec<_>>())
            }
        }
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.frame.matmul(&self.diagonal()).matmul(&self.frame.adjoint())
    }
}

pub fn min_linear_gap(values: &[f64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            g = g.min((values[i] - values[j]).abs());
        }
    }
    g
}

/// Minimal distance between angles measured around the circle.
pub fn min_circular_gap(phases: &[f64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..phases.len() {
        for j in i + 1..phases.len() {
            g = g.min(circular_distance(phases[i], phases[j]));
        }
    }
    g
}

pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Multiplies each column by a unit scalar so that its largest-magnitude
/// entry is real and positive; near-ties go to the lowest row index.
pub fn canonicalize_columns(frame: &mut DenseMatrix) {
    let (n, m) = (frame.rows(), frame.cols());
    for j in 0..m {
        let col = frame.column(j);
        let max = col.iter().map(|z| z.abs()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let pivot = col.iter().position(|z| z.abs() >= max * (1.0 - 1e-9)).expect("max exists");
        let phase = col[pivot].scale(1.0 / col[pivot].abs()).conj();
        for (i, z) in col.iter().enumerate().take(n) {
            let mut w = *z * phase;
            if i == pivot {
                w = Cplx::real(w.abs());
            }
            frame.set(i, j, w);
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a real-symmetric or complex-Hermitian matrix.
///
/// Eigenvalues come back descending. Repeated eigenvalues are allowed here;
/// callers that need a regular spectrum use [`EigenDecomposition::require_distinct`].
pub fn eig_self_adjoint(a: &DenseMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    let norm = a.frobenius();
    let asym = a.hermitian_residual();
    if asym > tol.structural * norm.max(1.0) {
        return Err(Error::NotSelfAdjoint(asym));
    }

    let src = a.entries();
    let mut w = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = (src[i * n + j] + src[j * n + i].conj()).scale(0.5);
        }
    }
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Cplx::real(1.0);
    }

    let target = 1e-14 * norm;
    let mut converged = false;
    for _sweep in 0..tol.sweep_cap {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| w[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut w, &mut v, n, p, q, 1e-18 * norm);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(tol.sweep_cap));
    }

    let raw: Vec<f64> = (0..n).map(|i| w[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();

    let mut frame = DenseMatrix::from_complex(n, n, &v).expect("square").permute_columns(&order);
    canonicalize_columns(&mut frame);
    if a.is_real() {
        frame = frame.to_real_if(0.0);
    }

    let mut dec = EigenDecomposition { kind: SpectrumKind::SelfAdjoint, values, frame, residual: 0.0 };
    dec.residual = a.sub(&dec.reconstruct()).frobenius();
    if dec.residual > tol.eig_residual * norm {
        return Err(Error::Reconstruction(dec.residual));
    }
    Ok(dec)
}

fn jacobi_rotate(w: &mut [Cplx], v: &mut [Cplx], n: usize, p: usize, q: usize, negligible: f64) {
    let apq = w[p * n + q];
    let r = apq.abs();
    if r <= negligible {
        w[p * n + q] = ZERO;
        w[q * n + p] = ZERO;
        return;
    }
    let e = apq.scale(1.0 / r);
    let theta = (w[q * n + q].re - w[p * n + p].re) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let eb = e.conj();

    // A ← A·G, V ← V·G with G = diag(1, ē)·[[c, s], [−s, c]] on the (p, q) plane.
    for k in 0..n {
        let akp = w[k * n + p];
        let akq = w[k * n + q];
        w[k * n + p] = akp.scale(c) - (eb * akq).scale(s);
        w[k * n + q] = akp.scale(s) + (eb * akq).scale(c);
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp.scale(c) - (eb * vkq).scale(s);
        v[k * n + q] = vkp.scale(s) + (eb * vkq).scale(c);
    }
    // A ← Gᴴ·A
    for k in 0..n {
        let apk = w[p * n + k];
        let aqk = w[q * n + k];
        w[p * n + k] = apk.scale(c) - (e * aqk).scale(s);
        w[q * n + k] = apk.scale(s) + (e * aqk).scale(c);
    }
    w[p * n + q] = ZERO;
    w[q * n + p] = ZERO;
    w[p * n + p].im = 0.0;
    w[q * n + q].im = 0.0;
}

const PENCIL_SEED: u64 = 0x9e11_c0de_5eed_0001;

/// Eigendecomposition of a unitary matrix with eigenphases ascending in `[0, 2π)`.
///
/// Diagonalizes `αH + (1−α)S` with `H = (U+Uᴴ)/2`, `S = (U−Uᴴ)/2i`; both are
/// Hermitian and commute with `U`, so a generic `α` yields a common eigenbasis.
/// `α` comes from a fixed stream, so identical inputs give identical outputs.
pub fn eig_unitary(u: &DenseMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !u.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", u.rows(), u.cols())));
    }
    let n = u.rows();
    let res = u.unitarity_residual();
    if res > tol.structural {
        return Err(Error::NotUnitary(res));
    }
    let ua = u.adjoint();
    let h = u.add(&ua).scale(0.5);
    let s = u.sub(&ua).scale_complex(Cplx::new(0.0, -0.5));

    let mut alphas = RngStream::new(PENCIL_SEED, 0);
    for _attempt in 0..tol.pencil_retries.max(1) {
        let alpha = 0.2 + 0.6 * alphas.uniform();
        let pencil = h.scale(alpha).add(&s.scale(1.0 - alpha));
        let base = eig_self_adjoint(&pencil, tol)?;
        let d = base.frame.adjoint().matmul(u).matmul(&base.frame);
        if d.off_diagonal_norm() > tol.unitary_residual {
            continue;
        }
        let phases: Vec<f64> = d
            .diagonal()
            .iter()
            .map(|z| {
                let t = z.arg().rem_euclid(TAU);
                if t >= TAU {
                    0.0
                } else {
                    t
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| phases[i].partial_cmp(&phases[j]).expect("finite phases"));
        let mut frame = base.frame.to_complex().permute_columns(&order);
        canonicalize_columns(&mut frame);
        let mut dec = EigenDecomposition {
            kind: SpectrumKind::Unitary,
            values: order.iter().map(|&i| phases[i]).collect(),
            frame,
            residual: 0.0,
        };
        dec.residual = u.sub(&dec.reconstruct()).frobenius();
        if dec.residual >= tol.unitary_residual {
            continue;
        }
        dec.require_distinct(tol.degeneracy)?;
        return Ok(dec);
    }
    Err(Error::NoConvergence(tol.pencil_retries))
}
