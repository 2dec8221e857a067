//! The per-family geometry behind each registered instance.

use std::fmt::Debug;

use super::group::{complement, coords_in, GroupKind};
use crate::error::Result;
use crate::numeric::{DenseMatrix, RngStream};
use crate::tol::Tolerances;

/// Orthonormal coordinates on the tangent spaces of X.
#[derive(Debug, Clone)]
pub(crate) enum Frame {
    /// X is an open subset of a vector space with this orthonormal basis.
    Flat(Vec<DenseMatrix>),
    /// X is the group itself; `v ∈ T_xX` is read through `x⁻¹v` in this Lie algebra basis.
    LeftInvariant(Vec<DenseMatrix>),
    /// The unit sphere in ℝ³ with frame (∂θ, ∂φ/sin θ).
    Sphere,
}

impl Frame {
    pub fn dim(&self) -> usize {
        match self {
            Frame::Flat(b) | Frame::LeftInvariant(b) => b.len(),
            Frame::Sphere => 2,
        }
    }
}

/// One-dimensional marginal of the canonical slice point, with a
/// parametrization of the canonical chamber used to integrate the expected
/// density `V(y)·w(y)` by quadrature.
#[derive(Debug, Clone, Copy)]
pub struct HistogramLayout {
    pub statistic_name: &'static str,
    pub statistic: fn(&[f64]) -> f64,
    /// Range of the statistic.
    pub range: (f64, f64),
    /// Range of the transverse chamber coordinate, if the slice is two-dimensional.
    pub transverse: Option<(f64, f64)>,
    /// `(statistic, transverse) ↦ slice coordinates`, with unit Jacobian.
    pub chamber_point: fn(f64, f64) -> Vec<f64>,
}

pub(crate) trait Family: Debug + Send + Sync {
    fn group(&self) -> GroupKind;

    fn frame(&self) -> &Frame;

    /// σ_g(x).
    fn act(&self, g: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        g.matmul(x).matmul(&self.group().inverse(g))
    }

    /// d/dt|₀ σ_{exp(tξ)}(x).
    fn orbit_derivative(&self, xi: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
        xi.commutator(x)
    }

    fn embed(&self, y: &[f64]) -> DenseMatrix;

    /// Slice coordinates of a point lying on Y.
    fn slice_coords(&self, x: &DenseMatrix) -> Vec<f64>;

    fn dist_to_slice(&self, x: &DenseMatrix) -> f64;

    /// One preimage `(g, y)` with `y` canonical. Callers have checked regularity.
    fn decompose(&self, x: &DenseMatrix, tol: &Tolerances) -> Result<(DenseMatrix, Vec<f64>)>;

    fn slice_gap(&self, y: &[f64]) -> f64;

    fn is_canonical(&self, y: &[f64]) -> bool;

    fn coord_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    fn tangent_coords(&self, at: &DenseMatrix, v: &DenseMatrix) -> Vec<f64> {
        match self.frame() {
            Frame::Flat(b) => coords_in(b, v),
            Frame::LeftInvariant(b) => coords_in(b, &self.group().inverse(at).matmul(v)),
            Frame::Sphere => sphere_coords(at, v),
        }
    }

    /// Directions spanning T_yY before translation to `y` (see [`Family::slice_tangents`]).
    fn slice_directions(&self) -> Vec<DenseMatrix>;

    /// Orthonormal basis of T_yY.
    fn slice_tangents(&self, y: &[f64]) -> Vec<DenseMatrix> {
        let dirs = self.slice_directions();
        match self.frame() {
            Frame::LeftInvariant(_) => {
                let at = self.embed(y);
                dirs.iter().map(|d| at.matmul(d)).collect()
            }
            _ => dirs,
        }
    }

    /// Orthonormal basis of Lie(K).
    fn stabilizer_basis(&self) -> Vec<DenseMatrix>;

    /// Orthonormal basis of the complement of Lie(K) in Lie(G).
    fn transversal_basis(&self) -> Vec<DenseMatrix> {
        complement(&self.group().lie_basis(), &self.stabilizer_basis())
    }

    /// Unnormalized G-invariant density.
    fn density(&self, x: &DenseMatrix, tol: &Tolerances) -> f64;

    fn sample(&self, rng: &mut RngStream, tol: &Tolerances) -> Result<DenseMatrix>;

    /// Distance from the manifold X (not from its regular part).
    fn ambient_residual(&self, x: &DenseMatrix) -> f64;

    /// Distance of a group element from K.
    fn stabilizer_distance(&self, m: &DenseMatrix) -> f64;

    fn sample_stabilizer(&self, rng: &mut RngStream) -> DenseMatrix;

    /// Compiled N/K representatives with a description of their slice action; identity first.
    fn weyl_reps(&self) -> Vec<(DenseMatrix, String)>;

    /// A fixed regular slice point used to validate the compiled representatives.
    fn probe_slice(&self) -> Vec<f64>;

    /// Declared root product V(y), when one exists.
    fn root_product(&self, _y: &[f64]) -> Option<f64> {
        None
    }

    fn histogram(&self) -> Option<HistogramLayout> {
        None
    }
}

fn sphere_coords(at: &DenseMatrix, v: &DenseMatrix) -> Vec<f64> {
    let (x1, x2, x3) = (at.re(0, 0), at.re(1, 0), at.re(2, 0));
    let rho = x1.hypot(x2);
    let (v1, v2, v3) = (v.re(0, 0), v.re(1, 0), v.re(2, 0));
    // e_θ = (x1·x3, x2·x3, −ρ²)/ρ, e_φ = (−x2, x1, 0)/ρ
    let e_theta = (x1 * x3 * v1 + x2 * x3 * v2 - rho * rho * v3) / rho;
    let e_phi = (-x2 * v1 + x1 * v2) / rho;
    vec![e_theta, e_phi]
}
