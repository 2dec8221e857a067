//! The acting groups: membership, inverses, Lie algebra bases, random elements.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::numeric::complex::{Cplx, I, ONE};
use crate::numeric::linalg::{det, expm, inverse};
use crate::numeric::{haar_sample, CompactGroup, DenseMatrix, Field, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Orthogonal(usize),
    /// Rotations of the plane, acting on the first two coordinates of ℝ³.
    PlaneRotation,
    Unitary(usize),
    Sl2c,
    Gl2r,
}

pub(crate) fn unit(field: Field, n: usize, i: usize, j: usize, z: Cplx) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, n, n);
    m.set(i, j, z);
    m
}

/// `J`, the generator of planar rotations.
pub(crate) fn rotation_generator() -> DenseMatrix {
    DenseMatrix::real_rows(&[&[0.0, -1.0], &[1.0, 0.0]])
}

/// `diag(1, −1)`.
pub(crate) fn cartan_h() -> DenseMatrix {
    DenseMatrix::diag_real(&[1.0, -1.0])
}

/// Orthonormal basis of 𝔰𝔩(2,ℂ) as a real vector space: the diagonal
/// directions first, then the root vectors.
pub(crate) fn sl2c_basis() -> Vec<DenseMatrix> {
    let h = cartan_h().to_complex().scale(FRAC_1_SQRT_2);
    vec![
        h.clone(),
        h.scale_complex(I),
        unit(Field::Complex, 2, 0, 1, ONE),
        unit(Field::Complex, 2, 0, 1, I),
        unit(Field::Complex, 2, 1, 0, ONE),
        unit(Field::Complex, 2, 1, 0, I),
    ]
}

/// `E11, E12, E21, E22`.
pub(crate) fn gl2r_basis() -> Vec<DenseMatrix> {
    (0..2).flat_map(|i| (0..2).map(move |j| unit(Field::Real, 2, i, j, ONE))).collect()
}

impl GroupKind {
    pub fn dim(&self) -> usize {
        match *self {
            GroupKind::Orthogonal(n) => n * (n - 1) / 2,
            GroupKind::PlaneRotation => 1,
            GroupKind::Unitary(n) => n * n,
            GroupKind::Sl2c => 6,
            GroupKind::Gl2r => 4,
        }
    }

    pub fn matrix_size(&self) -> usize {
        match *self {
            GroupKind::Orthogonal(n) | GroupKind::Unitary(n) => n,
            GroupKind::PlaneRotation | GroupKind::Sl2c | GroupKind::Gl2r => 2,
        }
    }

    pub fn compact(&self) -> Option<CompactGroup> {
        match *self {
            GroupKind::Orthogonal(n) => Some(CompactGroup::Orthogonal(n)),
            GroupKind::PlaneRotation => Some(CompactGroup::Rotation2),
            GroupKind::Unitary(n) => Some(CompactGroup::Unitary(n)),
            GroupKind::Sl2c | GroupKind::Gl2r => None,
        }
    }

    /// Orthonormal basis of the Lie algebra under `Re tr(ξᴴη)`; the planar
    /// rotation generator is normalized to unit angular speed instead.
    pub fn lie_basis(&self) -> Vec<DenseMatrix> {
        match *self {
            GroupKind::Orthogonal(n) => {
                let mut out = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let mut m = DenseMatrix::zeros(Field::Real, n, n);
                        m.set(i, j, Cplx::real(FRAC_1_SQRT_2));
                        m.set(j, i, Cplx::real(-FRAC_1_SQRT_2));
                        out.push(m);
                    }
                }
                out
            }
            GroupKind::PlaneRotation => vec![rotation_generator()],
            GroupKind::Unitary(n) => {
                let mut out: Vec<DenseMatrix> = (0..n).map(|j| unit(Field::Complex, n, j, j, I)).collect();
                for j in 0..n {
                    for k in j + 1..n {
                        let mut a = DenseMatrix::zeros(Field::Complex, n, n);
                        a.set(j, k, Cplx::real(FRAC_1_SQRT_2));
                        a.set(k, j, Cplx::real(-FRAC_1_SQRT_2));
                        let mut b = DenseMatrix::zeros(Field::Complex, n, n);
                        b.set(j, k, Cplx::new(0.0, FRAC_1_SQRT_2));
                        b.set(k, j, Cplx::new(0.0, FRAC_1_SQRT_2));
                        out.push(a);
                        out.push(b);
                    }
                }
                out
            }
            GroupKind::Sl2c => sl2c_basis(),
            GroupKind::Gl2r => gl2r_basis(),
        }
    }

    /// Distance from satisfying the group's defining equations; `∞` on a shape mismatch.
    pub fn membership_residual(&self, g: &DenseMatrix) -> f64 {
        let n = self.matrix_size();
        if g.rows() != n || g.cols() != n {
            return f64::INFINITY;
        }
        let imag = || g.entries().iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        match *self {
            GroupKind::Orthogonal(_) => imag() + g.unitarity_residual(),
            GroupKind::PlaneRotation => imag() + g.unitarity_residual() + (det(g).re - 1.0).abs(),
            GroupKind::Unitary(_) => g.unitarity_residual(),
            GroupKind::Sl2c => (det(g) - ONE).abs(),
            GroupKind::Gl2r => {
                let d = det(g).abs();
                if d == 0.0 || !d.is_finite() {
                    f64::INFINITY
                } else {
                    imag()
                }
            }
        }
    }

    pub fn inverse(&self, g: &DenseMatrix) -> DenseMatrix {
        match *self {
            GroupKind::Orthogonal(_) | GroupKind::PlaneRotation | GroupKind::Unitary(_) => g.adjoint(),
            GroupKind::Sl2c | GroupKind::Gl2r => inverse(g).expect("group elements are invertible"),
        }
    }

    pub fn exp(&self, xi: &DenseMatrix) -> DenseMatrix {
        expm(xi)
    }

    /// Haar draw for compact groups; for the noncompact ones a Gaussian matrix
    /// (normalized to unit determinant for SL(2,ℂ)).
    pub fn random_element(&self, rng: &mut RngStream) -> DenseMatrix {
        if let Some(c) = self.compact() {
            return haar_sample(c, rng);
        }
        match *self {
            GroupKind::Sl2c => loop {
                let e: Vec<Cplx> = (0..4).map(|_| rng.complex_normal()).collect();
                let m = DenseMatrix::from_complex(2, 2, &e).expect("2x2");
                let d = det(&m);
                if d.abs() > 1e-3 {
                    return m.scale_complex(d.sqrt().recip());
                }
            },
            GroupKind::Gl2r => loop {
                let m = DenseMatrix::from_real(2, 2, (0..4).map(|_| rng.normal()).collect()).expect("2x2");
                if det(&m).abs() > 1e-3 {
                    return m;
                }
            },
            _ => unreachable!("compact groups handled above"),
        }
    }

    pub fn identity(&self) -> DenseMatrix {
        let field = match self {
            GroupKind::Unitary(_) | GroupKind::Sl2c => Field::Complex,
            _ => Field::Real,
        };
        DenseMatrix::identity(field, self.matrix_size())
    }
}

/// Projects `v` onto the orthonormal `basis` under `Re tr(·ᴴ·)`.
pub(crate) fn coords_in(basis: &[DenseMatrix], v: &DenseMatrix) -> Vec<f64> {
    basis.iter().map(|b| b.inner(v)).collect()
}

/// Gram–Schmidt: an orthonormal basis of the orthogonal complement of
/// span(`sub`) inside span(`full`).
pub(crate) fn complement(full: &[DenseMatrix], sub: &[DenseMatrix]) -> Vec<DenseMatrix> {
    let mut out: Vec<DenseMatrix> = Vec::new();
    for v in full {
        let mut w = v.clone();
        for _pass in 0..2 {
            for b in sub.iter().chain(out.iter()) {
                let c = b.inner(&w);
                w = w.sub(&b.scale(c));
            }
        }
        let norm = w.frobenius();
        if norm > 1e-8 {
            out.push(w.scale(1.0 / norm));
        }
    }
    out
}
