//! `GL(2,ℝ)` acting on its regular elements and on `𝔤𝔩(2,ℝ)` by conjugation.
//! The regular set splits by the sign of the characteristic discriminant into
//! a split branch (real distinct eigenvalues) and a rotation branch.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::common::{det2, eigvec2};
use super::family::{Family, Frame};
use super::group::{gl2r_basis, rotation_generator, GroupKind};
use crate::error::{Error, Result};
use crate::numeric::complex::Cplx;
use crate::numeric::{DenseMatrix, Field, RngStream};
use crate::tol::Tolerances;

const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Regular diagonal slice.
    Split,
    /// Slice `{a·I + b·J : b ≠ 0}`.
    Rotation,
}

#[derive(Debug)]
pub(crate) struct RealRankOne {
    algebra: bool,
    branch: Branch,
    frame: Frame,
}

/// `tr² − 4·det`.
pub fn discriminant(x: &DenseMatrix) -> f64 {
    let t = x.re(0, 0) + x.re(1, 1);
    let d = x.re(0, 0) * x.re(1, 1) - x.re(0, 1) * x.re(1, 0);
    t * t - 4.0 * d
}

impl RealRankOne {
    pub fn new(algebra: bool, branch: Branch) -> Self {
        let frame = if algebra { Frame::Flat(gl2r_basis()) } else { Frame::LeftInvariant(gl2r_basis()) };
        Self { algebra, branch, frame }
    }

    fn real_gaussian(rng: &mut RngStream) -> DenseMatrix {
        DenseMatrix::from_real(2, 2, (0..4).map(|_| rng.normal()).collect()).expect("2x2")
    }
}

impl Family for RealRankOne {
    fn group(&self) -> GroupKind {
        GroupKind::Gl2r
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn embed(&self, y: &[f64]) -> DenseMatrix {
        match self.branch {
            Branch::Split => DenseMatrix::diag_real(y),
            Branch::Rotation => DenseMatrix::real_rows(&[&[y[0], -y[1]], &[y[1], y[0]]]),
        }
    }

    fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64> {
        match self.branch {
            Branch::Split => vec![x.re(0, 0), x.re(1, 1)],
            Branch::Rotation => vec![(x.re(0, 0) + x.re(1, 1)) / 2.0, (x.re(1, 0) - x.re(0, 1)) / 2.0],
        }
    }

    fn dist_to_slice(&self, x: &DenseMatrix) -> f64 {
        match self.branch {
            Branch::Split => x.off_diagonal_norm(),
            Branch::Rotation => x.sub(&self.embed(&self.slice_coords(x))).frobenius(),
        }
    }

    fn decompose(&self, x: &DenseMatrix, _tol: &Tolerances) -> Result<(DenseMatrix, Vec<f64>)> {
        let disc = discriminant(x);
        let t = x.re(0, 0) + x.re(1, 1);
        match self.branch {
            Branch::Split => {
                if disc <= 0.0 {
                    return Err(Error::NotRegular(0.0));
                }
                let r = disc.sqrt();
                let (l1, l2) = ((t + r) / 2.0, (t - r) / 2.0);
                let v1 = eigvec2(x, Cplx::real(l1));
                let v2 = eigvec2(x, Cplx::real(l2));
                let g = DenseMatrix::real_rows(&[&[v1[0].re, v2[0].re], &[v1[1].re, v2[1].re]]);
                Ok((g, vec![l1, l2]))
            }
            Branch::Rotation => {
                if disc >= 0.0 {
                    return Err(Error::NotRegular(0.0));
                }
                let (a, b) = (t / 2.0, (-disc).sqrt() / 2.0);
                // x·u = (a + ib)·u and J·(1, −i) = i·(1, −i) give g = [Re u, −Im u].
                let u = eigvec2(x, Cplx::new(a, b));
                let g = DenseMatrix::real_rows(&[&[u[0].re, -u[0].im], &[u[1].re, -u[1].im]]);
                Ok((g, vec![a, b]))
            }
        }
    }

    fn slice_gap(&self, y: &[f64]) -> f64 {
        let gap = match self.branch {
            Branch::Split => (y[0] - y[1]).powi(2),
            Branch::Rotation => 4.0 * y[1] * y[1],
        };
        let singular = match self.branch {
            Branch::Split => y[0] * y[1] == 0.0,
            Branch::Rotation => false,
        };
        if !self.algebra && singular {
            0.0
        } else {
            gap
        }
    }

    fn is_canonical(&self, y: &[f64]) -> bool {
        match self.branch {
            Branch::Split => y[0] > y[1],
            Branch::Rotation => y[1] > 0.0,
        }
    }

    fn slice_directions(&self) -> Vec<DenseMatrix> {
        self.stabilizer_basis()
    }

    fn stabilizer_basis(&self) -> Vec<DenseMatrix> {
        match self.branch {
            Branch::Split => vec![DenseMatrix::diag_real(&[1.0, 0.0]), DenseMatrix::diag_real(&[0.0, 1.0])],
            Branch::Rotation => vec![
                DenseMatrix::identity(Field::Real, 2).scale(FRAC_1_SQRT_2),
                rotation_generator().scale(FRAC_1_SQRT_2),
            ],
        }
    }

    fn density(&self, x: &DenseMatrix, _tol: &Tolerances) -> f64 {
        let t = x.re(0, 0) + x.re(1, 1);
        let d = det2(x).re;
        let second = if self.algebra { d } else { d.abs().ln() };
        (-0.5 * (t * t + second * second)).exp()
    }

    fn sample(&self, rng: &mut RngStream, tol: &Tolerances) -> Result<DenseMatrix> {
        for _ in 0..MAX_REJECTIONS {
            let x = Self::real_gaussian(rng);
            if let Ok((_, y)) = self.decompose(&x, tol) {
                if self.slice_gap(&y) > tol.degeneracy {
                    return Ok(x);
                }
            }
        }
        Err(Error::RejectionOverflow(MAX_REJECTIONS))
    }

    fn ambient_residual(&self, x: &DenseMatrix) -> f64 {
        if self.algebra {
            if x.rows() != 2 || x.cols() != 2 {
                return f64::INFINITY;
            }
            x.entries().iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
        } else {
            GroupKind::Gl2r.membership_residual(x)
        }
    }

    fn stabilizer_distance(&self, m: &DenseMatrix) -> f64 {
        match self.branch {
            Branch::Split => m.off_diagonal_norm(),
            Branch::Rotation => m.sub(&self.embed(&self.slice_coords(m))).frobenius(),
        }
    }

    fn sample_stabilizer(&self, rng: &mut RngStream) -> DenseMatrix {
        let sign = |r: &mut RngStream| if r.below(2) == 0 { 1.0 } else { -1.0 };
        match self.branch {
            Branch::Split => {
                let a = sign(rng) * rng.normal().exp();
                let b = sign(rng) * rng.normal().exp();
                DenseMatrix::diag_real(&[a, b])
            }
            Branch::Rotation => {
                let r = rng.normal().exp();
                let phi = std::f64::consts::TAU * rng.uniform();
                self.embed(&[r * phi.cos(), r * phi.sin()])
            }
        }
    }

    fn weyl_reps(&self) -> Vec<(DenseMatrix, String)> {
        let id = DenseMatrix::identity(Field::Real, 2);
        match self.branch {
            Branch::Split => vec![
                (id, "identity".into()),
                (rotation_generator(), "(l1, l2) -> (l2, l1)".into()),
            ],
            Branch::Rotation => vec![
                (id, "identity".into()),
                (DenseMatrix::diag_real(&[1.0, -1.0]), "(a, b) -> (a, -b)".into()),
            ],
        }
    }

    fn probe_slice(&self) -> Vec<f64> {
        match self.branch {
            Branch::Split => vec![2.0, -0.5],
            Branch::Rotation => vec![0.3, 1.2],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_branch_of_j_is_trivial() {
        let fam = RealRankOne::new(false, Branch::Rotation);
        let tol = Tolerances::default();
        let (g, y) = fam.decompose(&rotation_generator(), &tol).unwrap();
        assert_eq!(y, vec![0.0, 1.0]);
        assert!(fam.act(&g, &fam.embed(&y)).max_abs_diff(&rotation_generator()) < 1e-15);
    }

    #[test]
    fn both_branches_reconstruct_random_draws() {
        let tol = Tolerances::default();
        let mut rng = RngStream::new(8, 0);
        for branch in [Branch::Split, Branch::Rotation] {
            for algebra in [false, true] {
                let fam = RealRankOne::new(algebra, branch);
                for _ in 0..50 {
                    let x = fam.sample(&mut rng, &tol).unwrap();
                    let (g, y) = fam.decompose(&x, &tol).unwrap();
                    assert!(fam.is_canonical(&y));
                    let back = fam.act(&g, &fam.embed(&y));
                    assert!(back.max_abs_diff(&x) < 1e-9, "{branch:?}");
                }
            }
        }
    }
}
