//! Pointwise checks of the transversality, dimension and orthogonality
//! conditions, and of the regularity of φ.

use crate::error::Result;
use crate::numeric::linalg::{det_of_columns, numerical_rank, singular_values_of_columns};
use crate::numeric::RngStream;
use crate::registry::EnsembleInstance;
use crate::tol::Tolerances;

/// Frame coordinates of `[orbit basis | slice basis]` at `y`.
pub fn phi_columns(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    let mut cols: Vec<Vec<f64>> = instance.orbit_tangent_basis(y, tol)?.into_iter().map(|v| v.coords).collect();
    cols.extend(instance.slice_tangent_basis(y, tol)?.into_iter().map(|v| v.coords));
    Ok(cols)
}

/// Same as [`phi_columns`], with orbit columns replaced by central differences
/// of `h ↦ σ_{exp(hξ)}(y)`.
pub fn phi_columns_fd(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    instance.require_regular(y, tol)?;
    let at = instance.embed(y);
    let h = tol.fd_step;
    let group = instance.group();
    let mut cols: Vec<Vec<f64>> = instance
        .transversal_basis()
        .iter()
        .map(|xi| {
            let plus = instance.act_unchecked(&group.exp(&xi.scale(h)), &at);
            let minus = instance.act_unchecked(&group.exp(&xi.scale(-h)), &at);
            instance.tangent_coords(&at, &plus.sub(&minus).scale(0.5 / h))
        })
        .collect();
    cols.extend(instance.slice_tangent_basis(y, tol)?.into_iter().map(|v| v.coords));
    Ok(cols)
}

/// `ambient_dim` minus the numerical rank of `[orbit | slice]`.
pub fn check_transversality(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<usize> {
    let cols = phi_columns(instance, y, tol)?;
    let rank = numerical_rank(&singular_values_of_columns(&cols), tol.rank);
    Ok(instance.ambient_dim.saturating_sub(rank))
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Largest `|⟨v, w⟩|` over unit orbit directions `v` and slice directions `w`.
pub fn check_orthogonality(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<f64> {
    let orbit = instance.orbit_tangent_basis(y, tol)?;
    let slice = instance.slice_tangent_basis(y, tol)?;
    let mut worst: f64 = 0.0;
    for v in &orbit {
        let v = unit(&v.coords);
        for w in &slice {
            let w = unit(&w.coords);
            worst = worst.max(v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>().abs());
        }
    }
    Ok(worst)
}

/// Kernel dimension of `ξ ↦ d/dt σ_{exp(tξ)}(y)` over all of Lie(G).
pub fn check_isotropy_dim(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<usize> {
    instance.require_regular(y, tol)?;
    let at = instance.embed(y);
    let cols: Vec<Vec<f64>> = instance
        .group()
        .lie_basis()
        .iter()
        .map(|xi| instance.tangent_coords(&at, &instance.orbit_derivative(xi, &at)))
        .collect();
    let sv = singular_values_of_columns(&cols);
    Ok(cols.len() - numerical_rank(&sv, tol.rank))
}

/// `|det dφ|` at `([e], y)`.
pub fn check_phi_regular(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<f64> {
    Ok(det_of_columns(&phi_columns(instance, y, tol)?).abs())
}

/// Finite-difference recomputation of [`check_phi_regular`].
pub fn phi_det_fd(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<f64> {
    Ok(det_of_columns(&phi_columns_fd(instance, y, tol)?).abs())
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct InvarianceRecord {
    pub samples: usize,
    pub successes: usize,
    pub fraction: f64,
}

/// Fraction of draws from p that decompose.
pub fn check_invariance(
    instance: &EnsembleInstance,
    samples: usize,
    rng: &mut RngStream,
    tol: &Tolerances,
) -> Result<InvarianceRecord> {
    let mut successes = 0;
    for _ in 0..samples {
        let x = instance.sample_ambient(rng, tol)?;
        if instance.decompose(&x.value, tol).is_ok() {
            successes += 1;
        }
    }
    Ok(InvarianceRecord { samples, successes, fraction: successes as f64 / samples.max(1) as f64 })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BranchRecord {
    pub samples: usize,
    /// Draws whose discriminant clears the gap.
    pub regular: usize,
    /// Regular draws claimed by exactly one branch.
    pub claimed_once: usize,
    pub pass: bool,
}

/// Every Gaussian 2×2 real draw with `|discriminant| > gap` must decompose in
/// exactly one of the two branch instances.
pub fn check_branch_exhaustiveness(
    split: &EnsembleInstance,
    rotation: &EnsembleInstance,
    samples: usize,
    rng: &mut RngStream,
    tol: &Tolerances,
) -> BranchRecord {
    let mut regular = 0;
    let mut claimed_once = 0;
    for _ in 0..samples {
        let x = crate::numeric::DenseMatrix::from_real(2, 2, (0..4).map(|_| rng.normal()).collect())
            .expect("2x2");
        if crate::registry::discriminant(&x).abs() <= tol.degeneracy {
            continue;
        }
        regular += 1;
        let claims = [split, rotation].iter().filter(|i| i.decompose(&x, tol).is_ok()).count();
        if claims == 1 {
            claimed_once += 1;
        }
    }
    BranchRecord { samples, regular, claimed_once, pass: regular == claimed_once }
}
