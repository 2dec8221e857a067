//! `SL(2,ℂ)` acting on itself and on `𝔰𝔩(2,ℂ)` by conjugation, sliced by the
//! diagonal torus and the diagonal Cartan subalgebra.

use super::common::{det2, eigvec2};
use super::family::{Family, Frame};
use super::group::{sl2c_basis, GroupKind};
use crate::error::{Error, Result};
use crate::numeric::complex::{Cplx, ONE, ZERO};
use crate::numeric::{DenseMatrix, Field, RngStream};
use crate::tol::Tolerances;

const MAX_REJECTIONS: usize = 1000;

/// Relative width of the `|z| = 1` (group) or `Re w = 0` (algebra) tie band.
const TIE: f64 = 1e-12;

#[derive(Debug)]
pub(crate) struct ComplexRankOne {
    algebra: bool,
    frame: Frame,
}

impl ComplexRankOne {
    pub fn group() -> Self {
        Self { algebra: false, frame: Frame::LeftInvariant(sl2c_basis()) }
    }

    pub fn algebra() -> Self {
        Self { algebra: true, frame: Frame::Flat(sl2c_basis()) }
    }

    fn eigenvalue(&self, y: &[f64]) -> Cplx {
        Cplx::new(y[0], y[1])
    }

    /// The diagonal entry paired with `z` in the slice.
    fn partner(&self, z: Cplx) -> Cplx {
        if self.algebra {
            -z
        } else {
            z.recip()
        }
    }

    /// Canonical representative of `{z, partner(z)}`.
    fn canonical(&self, z: Cplx) -> Cplx {
        if self.is_canonical(&[z.re, z.im]) {
            z
        } else {
            self.partner(z)
        }
    }
}

impl Family for ComplexRankOne {
    fn group(&self) -> GroupKind {
        GroupKind::Sl2c
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn embed(&self, y: &[f64]) -> DenseMatrix {
        let z = self.eigenvalue(y);
        DenseMatrix::diag_complex(&[z, self.partner(z)])
    }

    fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64> {
        let z = x.at(0, 0);
        vec![z.re, z.im]
    }

    fn dist_to_slice(&self, x: &DenseMatrix) -> f64 {
        x.off_diagonal_norm()
    }

    fn decompose(&self, x: &DenseMatrix, _tol: &Tolerances) -> Result<(DenseMatrix, Vec<f64>)> {
        let z = if self.algebra {
            (-det2(x)).sqrt()
        } else {
            let t = x.trace();
            (t + (t * t - Cplx::real(4.0)).sqrt()).scale(0.5)
        };
        if z.abs() == 0.0 {
            return Err(Error::NotRegular(0.0));
        }
        let z = self.canonical(z);
        let (v1, v2) = (eigvec2(x, z), eigvec2(x, self.partner(z)));
        let g = DenseMatrix::complex_rows(&[&[v1[0], v2[0]], &[v1[1], v2[1]]]);
        let d = det2(&g);
        if d.abs() == 0.0 {
            return Err(Error::NotRegular(0.0));
        }
        Ok((g.scale_complex(d.sqrt().recip()), vec![z.re, z.im]))
    }

    fn slice_gap(&self, y: &[f64]) -> f64 {
        let z = self.eigenvalue(y);
        if z.abs() == 0.0 {
            return 0.0;
        }
        (z - self.partner(z)).abs()
    }

    fn is_canonical(&self, y: &[f64]) -> bool {
        let z = self.eigenvalue(y);
        if self.algebra {
            let band = TIE * z.abs();
            z.re > band || (z.re.abs() <= band && z.im > 0.0)
        } else {
            let m = z.abs();
            m > 1.0 + TIE || ((m - 1.0).abs() <= TIE && z.im > 0.0)
        }
    }

    fn slice_directions(&self) -> Vec<DenseMatrix> {
        self.stabilizer_basis()
    }

    fn stabilizer_basis(&self) -> Vec<DenseMatrix> {
        sl2c_basis()[..2].to_vec()
    }

    fn density(&self, x: &DenseMatrix, _tol: &Tolerances) -> f64 {
        if self.algebra {
            (-0.5 * x.matmul(x).trace().abs()).exp()
        } else {
            (-0.5 * x.trace().norm_sqr()).exp()
        }
    }

    fn sample(&self, rng: &mut RngStream, tol: &Tolerances) -> Result<DenseMatrix> {
        for _ in 0..MAX_REJECTIONS {
            let x = if self.algebra {
                let a = rng.complex_normal();
                let (b, c) = (rng.complex_normal(), rng.complex_normal());
                DenseMatrix::complex_rows(&[&[a, b], &[c, -a]])
            } else {
                GroupKind::Sl2c.random_element(rng)
            };
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
            x.trace().abs()
        } else {
            GroupKind::Sl2c.membership_residual(x)
        }
    }

    fn stabilizer_distance(&self, m: &DenseMatrix) -> f64 {
        m.off_diagonal_norm()
    }

    fn sample_stabilizer(&self, rng: &mut RngStream) -> DenseMatrix {
        let a = rng.complex_normal().scale(0.5).exp();
        DenseMatrix::diag_complex(&[a, a.recip()])
    }

    fn weyl_reps(&self) -> Vec<(DenseMatrix, String)> {
        let w = DenseMatrix::complex_rows(&[&[ZERO, -ONE], &[ONE, ZERO]]);
        let action = if self.algebra { "w -> -w" } else { "z -> 1/z" };
        vec![(DenseMatrix::identity(Field::Complex, 2), "identity".into()), (w, action.into())]
    }

    fn probe_slice(&self) -> Vec<f64> {
        let z = Cplx::cis(0.4).scale(1.5);
        vec![z.re, z.im]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_decomposition_reconstructs() {
        let fam = ComplexRankOne::group();
        let tol = Tolerances::default();
        let mut rng = RngStream::new(5, 1);
        for _ in 0..50 {
            let x = fam.sample(&mut rng, &tol).unwrap();
            let (g, y) = fam.decompose(&x, &tol).unwrap();
            assert!(fam.is_canonical(&y));
            assert!((det2(&g) - ONE).abs() < 1e-12);
            assert!(fam.act(&g, &fam.embed(&y)).max_abs_diff(&x) < 1e-9);
        }
    }

    #[test]
    fn unit_circle_ties_break_on_imaginary_part() {
        let fam = ComplexRankOne::group();
        let z = Cplx::cis(2.0);
        assert!(fam.is_canonical(&[z.re, z.im]));
        let w = z.recip();
        assert!(!fam.is_canonical(&[w.re, w.im]));
    }
}
