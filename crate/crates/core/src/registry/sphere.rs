//! The unit sphere in ℝ³ under rotations about the z-axis, sliced by the
//! great circle through the poles in the xz-plane.

use std::f64::consts::PI;

use super::family::{Family, Frame, HistogramLayout};
use super::group::{rotation_generator, GroupKind};
use crate::error::Result;
use crate::numeric::eigen::circular_distance;
use crate::numeric::{DenseMatrix, Field, RngStream};
use crate::tol::Tolerances;

#[derive(Debug)]
pub(crate) struct SphereFamily {
    frame: Frame,
}

impl SphereFamily {
    pub fn new() -> Self {
        Self { frame: Frame::Sphere }
    }
}

fn rotation(angle: f64) -> DenseMatrix {
    let (s, c) = angle.sin_cos();
    DenseMatrix::real_rows(&[&[c, -s], &[s, c]])
}

/// Applies a 2×2 block to the first two coordinates of a 3-vector.
fn apply_block(m: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
    let (a, b) = (x.re(0, 0), x.re(1, 0));
    DenseMatrix::column_vector(&[
        m.re(0, 0) * a + m.re(0, 1) * b,
        m.re(1, 0) * a + m.re(1, 1) * b,
        x.re(2, 0),
    ])
}

impl Family for SphereFamily {
    fn group(&self) -> GroupKind {
        GroupKind::PlaneRotation
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn act(&self, g: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        apply_block(g, x)
    }

    fn orbit_derivative(&self, xi: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        let v = apply_block(xi, x);
        DenseMatrix::column_vector(&[v.re(0, 0), v.re(1, 0), 0.0])
    }

    fn embed(&self, y: &[f64]) -> DenseMatrix {
        let (s, c) = y[0].sin_cos();
        DenseMatrix::column_vector(&[s, 0.0, c])
    }

    /// Signed meridian angle in `(−π, π]`; negative on the `x < 0` half.
    fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64> {
        vec![x.re(0, 0).atan2(x.re(2, 0))]
    }

    fn dist_to_slice(&self, x: &DenseMatrix) -> f64 {
        x.re(1, 0).abs()
    }

    fn decompose(&self, x: &DenseMatrix, _tol: &Tolerances) -> Result<(DenseMatrix, Vec<f64>)> {
        let (x1, x2, x3) = (x.re(0, 0), x.re(1, 0), x.re(2, 0));
        let theta = x1.hypot(x2).atan2(x3);
        Ok((rotation(x2.atan2(x1)), vec![theta]))
    }

    fn slice_gap(&self, y: &[f64]) -> f64 {
        y[0].sin().abs()
    }

    fn is_canonical(&self, y: &[f64]) -> bool {
        y[0] > 0.0 && y[0] < PI
    }

    fn coord_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        circular_distance(a[0], b[0])
    }

    fn slice_directions(&self) -> Vec<DenseMatrix> {
        Vec::new()
    }

    /// `(cos θ, 0, −sin θ)`, the meridian's unit tangent.
    fn slice_tangents(&self, y: &[f64]) -> Vec<DenseMatrix> {
        let (s, c) = y[0].sin_cos();
        vec![DenseMatrix::column_vector(&[c, 0.0, -s])]
    }

    fn stabilizer_basis(&self) -> Vec<DenseMatrix> {
        Vec::new()
    }

    fn transversal_basis(&self) -> Vec<DenseMatrix> {
        vec![rotation_generator()]
    }

    fn density(&self, _x: &DenseMatrix, _tol: &Tolerances) -> f64 {
        1.0
    }

    fn sample(&self, rng: &mut RngStream, _tol: &Tolerances) -> Result<DenseMatrix> {
        loop {
            let v = [rng.normal(), rng.normal(), rng.normal()];
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if r > 1e-12 {
                return Ok(DenseMatrix::column_vector(&[v[0] / r, v[1] / r, v[2] / r]));
            }
        }
    }

    fn ambient_residual(&self, x: &DenseMatrix) -> f64 {
        if x.rows() != 3 || x.cols() != 1 || x.field() != Field::Real {
            return f64::INFINITY;
        }
        (x.frobenius() - 1.0).abs()
    }

    fn stabilizer_distance(&self, m: &DenseMatrix) -> f64 {
        m.sub(&DenseMatrix::identity(Field::Real, 2)).frobenius()
    }

    fn sample_stabilizer(&self, _rng: &mut RngStream) -> DenseMatrix {
        DenseMatrix::identity(Field::Real, 2)
    }

    fn weyl_reps(&self) -> Vec<(DenseMatrix, String)> {
        vec![
            (DenseMatrix::identity(Field::Real, 2), "theta -> theta".into()),
            (DenseMatrix::diag_real(&[-1.0, -1.0]), "theta -> -theta".into()),
        ]
    }

    fn probe_slice(&self) -> Vec<f64> {
        vec![PI / 3.0]
    }

    fn root_product(&self, y: &[f64]) -> Option<f64> {
        Some(y[0].sin().abs())
    }

    fn histogram(&self) -> Option<HistogramLayout> {
        Some(HistogramLayout {
            statistic_name: "theta",
            statistic: |y| y[0],
            range: (0.0, PI),
            transverse: None,
            chamber_point: |s, _| vec![s],
        })
    }
}
