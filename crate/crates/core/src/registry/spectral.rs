//! Self-adjoint matrices under orthogonal or unitary conjugation, and the
//! positive-definite cone under orthogonal congruence.

use std::f64::consts::FRAC_1_SQRT_2;

use super::common::{permutation_reps, self_adjoint_basis, torus_distance};
use super::family::{Family, Frame, HistogramLayout};
use super::group::{unit, GroupKind};
use crate::error::{Error, Result};
use crate::numeric::complex::{Cplx, I, ONE};
use crate::numeric::eigen::min_linear_gap;
use crate::numeric::{eig_self_adjoint, haar_sample, spd_chart, ChartDirection, CompactGroup, DenseMatrix, Field, RngStream};
use crate::tol::Tolerances;

#[derive(Debug)]
pub(crate) struct SpectralFamily {
    n: usize,
    complex: bool,
    positive: bool,
    frame: Frame,
}

impl SpectralFamily {
    /// Real symmetric matrices under `O(n)`.
    pub fn symmetric(n: usize) -> Self {
        Self { n, complex: false, positive: false, frame: Frame::Flat(self_adjoint_basis(n, false)) }
    }

    /// Positive-definite matrices under `O(n)`, with the exp-pushforward of the Gaussian.
    pub fn positive_definite(n: usize) -> Self {
        Self { n, complex: false, positive: true, frame: Frame::Flat(self_adjoint_basis(n, false)) }
    }

    /// Hermitian matrices under `U(n)`.
    pub fn hermitian(n: usize) -> Self {
        Self { n, complex: true, positive: false, frame: Frame::Flat(self_adjoint_basis(n, true)) }
    }

    fn field(&self) -> Field {
        if self.complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    /// Gaussian draw with density `exp(−tr x²/2)`.
    fn gaussian(&self, rng: &mut RngStream) -> DenseMatrix {
        let n = self.n;
        let mut x = DenseMatrix::zeros(self.field(), n, n);
        for i in 0..n {
            x.set(i, i, Cplx::real(rng.normal()));
            for j in i + 1..n {
                let z = if self.complex {
                    rng.complex_normal()
                } else {
                    Cplx::real(rng.normal() * FRAC_1_SQRT_2)
                };
                x.set(i, j, z);
                x.set(j, i, z.conj());
            }
        }
        x
    }
}

fn gaussian_weight(values: &[f64]) -> f64 {
    (-0.5 * values.iter().map(|v| v * v).sum::<f64>()).exp()
}

/// `(e^a − e^b)/(a − b)`, continuous across `a = b`.
fn exp_divided_difference(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() < 1e-300 {
        b.exp()
    } else {
        b.exp() * d.exp_m1() / d
    }
}

impl Family for SpectralFamily {
    fn group(&self) -> GroupKind {
        if self.complex {
            GroupKind::Unitary(self.n)
        } else {
            GroupKind::Orthogonal(self.n)
        }
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn embed(&self, y: &[f64]) -> DenseMatrix {
        let d = DenseMatrix::diag_real(y);
        if self.complex {
            d.to_complex()
        } else {
            d
        }
    }

    fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64> {
        x.diagonal().iter().map(|z| z.re).collect()
    }

    fn dist_to_slice(&self, x: &DenseMatrix) -> f64 {
        x.off_diagonal_norm()
    }

    fn decompose(&self, x: &DenseMatrix, tol: &Tolerances) -> Result<(DenseMatrix, Vec<f64>)> {
        let dec = eig_self_adjoint(x, tol)?;
        if self.positive {
            let smallest = dec.values.last().copied().unwrap_or(0.0);
            if smallest <= 0.0 {
                return Err(Error::NotPositiveDefinite(smallest));
            }
        }
        let g = if self.complex { dec.frame.to_complex() } else { dec.frame };
        Ok((g, dec.values))
    }

    fn slice_gap(&self, y: &[f64]) -> f64 {
        if self.positive && y.iter().any(|&v| v <= 0.0) {
            return 0.0;
        }
        min_linear_gap(y)
    }

    fn is_canonical(&self, y: &[f64]) -> bool {
        y.windows(2).all(|w| w[0] > w[1]) && (!self.positive || y.iter().all(|&v| v > 0.0))
    }

    fn slice_directions(&self) -> Vec<DenseMatrix> {
        (0..self.n).map(|j| unit(self.field(), self.n, j, j, ONE)).collect()
    }

    fn stabilizer_basis(&self) -> Vec<DenseMatrix> {
        if self.complex {
            (0..self.n).map(|j| unit(Field::Complex, self.n, j, j, I)).collect()
        } else {
            Vec::new()
        }
    }

    fn density(&self, x: &DenseMatrix, tol: &Tolerances) -> f64 {
        if !self.positive {
            // tr x² = ‖x‖²_F for self-adjoint x.
            let f = x.frobenius();
            return (-0.5 * f * f).exp();
        }
        let Ok(dec) = eig_self_adjoint(x, tol) else {
            return 0.0;
        };
        if dec.values.iter().any(|&v| v <= 0.0) {
            return 0.0;
        }
        let mu: Vec<f64> = dec.values.iter().map(|v| v.ln()).collect();
        // Jacobian of exp on symmetric matrices, read off in the eigenbasis.
        let mut jac: f64 = mu.iter().map(|m| m.exp()).product();
        for i in 0..mu.len() {
            for j in i + 1..mu.len() {
                jac *= exp_divided_difference(mu[i], mu[j]);
            }
        }
        gaussian_weight(&mu) / jac
    }

    fn sample(&self, rng: &mut RngStream, tol: &Tolerances) -> Result<DenseMatrix> {
        let g = self.gaussian(rng);
        if self.positive {
            spd_chart(&g, ChartDirection::Exp, tol)
        } else {
            Ok(g)
        }
    }

    fn ambient_residual(&self, x: &DenseMatrix) -> f64 {
        if x.rows() != self.n || x.cols() != self.n {
            return f64::INFINITY;
        }
        let mut r = x.hermitian_residual();
        if !self.complex {
            r += x.entries().iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        }
        if self.positive {
            match eig_self_adjoint(&x.add(&x.adjoint()).scale(0.5), &Tolerances::default()) {
                Ok(dec) if dec.values.iter().all(|&v| v > 0.0) => {}
                _ => return f64::INFINITY,
            }
        }
        r
    }

    fn stabilizer_distance(&self, m: &DenseMatrix) -> f64 {
        torus_distance(m)
    }

    fn sample_stabilizer(&self, rng: &mut RngStream) -> DenseMatrix {
        if self.complex {
            haar_sample(CompactGroup::Torus(self.n), rng)
        } else {
            let signs: Vec<f64> = (0..self.n).map(|_| if rng.below(2) == 0 { 1.0 } else { -1.0 }).collect();
            DenseMatrix::diag_real(&signs)
        }
    }

    fn weyl_reps(&self) -> Vec<(DenseMatrix, String)> {
        permutation_reps(self.n, self.field())
    }

    fn probe_slice(&self) -> Vec<f64> {
        (0..self.n).map(|k| (self.n - k) as f64 + 0.25 * k as f64).collect()
    }

    fn root_product(&self, y: &[f64]) -> Option<f64> {
        let beta = if self.complex { 2 } else { 1 };
        let mut v = 1.0;
        for i in 0..y.len() {
            for j in i + 1..y.len() {
                v *= (y[i] - y[j]).abs().powi(beta);
            }
        }
        Some(v)
    }

    fn histogram(&self) -> Option<HistogramLayout> {
        if self.n != 2 || self.positive {
            return None;
        }
        Some(HistogramLayout {
            statistic_name: "gap",
            statistic: |y| y[0] - y[1],
            range: (0.0, 12.0),
            transverse: Some((-12.0, 12.0)),
            chamber_point: |s, t| vec![(t + s) / 2.0, (t - s) / 2.0],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_definite_density_is_the_pushforward() {
        // At x = exp(diag(a, b)) the density is the Gaussian at (a, b) over the exp Jacobian.
        let fam = SpectralFamily::positive_definite(2);
        let tol = Tolerances::default();
        let (a, b) = (0.7_f64, -0.4_f64);
        let x = DenseMatrix::diag_real(&[a.exp(), b.exp()]);
        let jac = a.exp() * b.exp() * (a.exp() - b.exp()) / (a - b);
        let expected = (-(a * a + b * b) / 2.0).exp() / jac;
        assert!((fam.density(&x, &tol) - expected).abs() < 1e-14);
    }

    #[test]
    fn divided_difference_limit() {
        assert!((exp_divided_difference(0.3, 0.3) - 0.3_f64.exp()).abs() < 1e-15);
        assert!((exp_divided_difference(1.0, 0.0) - (1f64.exp() - 1.0)).abs() < 1e-15);
    }
}
