//! The finite quotient N/K of each instance and its action on the slice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::DenseMatrix;
use crate::registry::EnsembleInstance;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct CosetRep {
    pub index: usize,
    pub matrix: DenseMatrix,
    /// How `y ↦ σ_{w⁻¹}(y)` acts on slice coordinates.
    pub slice_action: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylData {
    pub instance_id: String,
    pub reps: Vec<CosetRep>,
    pub order: usize,
}

/// The compiled coset representatives, each checked to map the instance's
/// probe point back into Y.
pub fn coset_reps(instance: &EnsembleInstance, tol: &Tolerances) -> Result<WeylData> {
    let family = instance.family();
    let probe = family.probe_slice();
    let y = instance.embed(&probe);
    let mut reps = Vec::new();
    for (index, (matrix, slice_action)) in family.weyl_reps().into_iter().enumerate() {
        let membership = instance.group().membership_residual(&matrix);
        if membership > tol.structural {
            return Err(Error::CatalogCorrupt(format!(
                "{}: rep {index} is not a group element ({membership:.3e})",
                instance.id
            )));
        }
        let off = instance.dist_to_slice(&instance.act_unchecked(&matrix, &y));
        if off > tol.weyl_slice {
            return Err(Error::CatalogCorrupt(format!(
                "{}: rep {index} moves the probe point off the slice ({off:.3e})",
                instance.id
            )));
        }
        reps.push(CosetRep { index, matrix, slice_action });
    }
    let order = reps.len();
    Ok(WeylData { instance_id: instance.id.clone(), reps, order })
}

/// Slice coordinates of `σ_{w⁻¹}(y)`.
pub fn weyl_act(instance: &EnsembleInstance, rep: &CosetRep, y: &[f64]) -> Vec<f64> {
    let inv = instance.group().inverse(&rep.matrix);
    instance.slice_coords(&instance.act_unchecked(&inv, &instance.embed(y)))
}

/// The Weyl images of a regular `y`, deduplicated.
pub fn weyl_orbit(instance: &EnsembleInstance, weyl: &WeylData, y: &[f64], tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    instance.require_regular(y, tol)?;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for rep in &weyl.reps {
        let image = weyl_act(instance, rep, y);
        if !out.iter().any(|p| instance.coord_distance(p, &image) <= tol.dedup) {
            out.push(image);
        }
    }
    Ok(out)
}
