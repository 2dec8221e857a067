use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::DenseMatrix;
use crate::registry::{EnsembleInstance, SlicePoint};
use crate::tol::Tolerances;
use crate::weyl::{coset_reps, weyl_act};

#[derive(Debug, Clone, Serialize)]
pub struct FiberEntry {
    pub coset_index: usize,
    pub slice_point: SlicePoint,
    pub group_element: DenseMatrix,
    /// `‖σ_{g_i'}(y_i) − x‖_F`.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberReport {
    pub instance_id: String,
    pub point: DenseMatrix,
    pub entries: Vec<FiberEntry>,
    pub count: usize,
    pub expected: usize,
    pub max_residual: f64,
    /// Smallest pairwise coset distance between entries (∞ for a single entry).
    pub min_coset_separation: f64,
    pub pass: bool,
}

impl FiberReport {
    pub fn summary(&self) -> String {
        format!(
            "{}: {} preimages (expected {}), max residual {:.3e}, min coset separation {:.3e}",
            self.instance_id, self.count, self.expected, self.max_residual, self.min_coset_separation
        )
    }
}

/// Enumerates `φ⁻¹(x)` as `{(g·w_i, σ_{w_i⁻¹}(y))}` from one decomposition
/// `x = σ_g(y)` and the coset representatives `w_i`.
///
/// A report that fails its own criteria comes back as [`Error::FiberDefect`].
pub fn fiber(instance: &EnsembleInstance, x: &DenseMatrix, tol: &Tolerances) -> Result<FiberReport> {
    let (g, y) = instance.decompose(x, tol)?;
    let weyl = coset_reps(instance, tol)?;
    let entries: Vec<FiberEntry> = weyl
        .reps
        .iter()
        .map(|rep| {
            let coords = weyl_act(instance, rep, &y.coords);
            let element = g.matmul(&rep.matrix);
            let residual = instance.act_unchecked(&element, &instance.embed(&coords)).sub(x).frobenius();
            FiberEntry { coset_index: rep.index, slice_point: instance.slice_point(coords), group_element: element, residual }
        })
        .collect();
    let mut separation = f64::INFINITY;
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            separation = separation.min(instance.coset_distance_unchecked(&a.group_element, &b.group_element));
        }
    }
    let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
    let count = entries.len();
    let pass = count == instance.expected_degree
        && max_residual < tol.fiber_residual
        && separation > tol.coset_separation;
    let report = FiberReport {
        instance_id: instance.id.clone(),
        point: x.clone(),
        entries,
        count,
        expected: instance.expected_degree,
        max_residual,
        min_coset_separation: separation,
        pass,
    };
    if pass {
        Ok(report)
    } else {
        Err(Error::FiberDefect(Box::new(report)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::instance_lookup;

    #[test]
    fn diagonal_input_has_two_exact_preimages() {
        let inst = instance_lookup("lin-sym-O(2)").unwrap();
        let r = fiber(&inst, &DenseMatrix::diag_real(&[1.0, 2.0]), &Tolerances::default()).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.entries[0].slice_point.coords, vec![2.0, 1.0]);
        assert_eq!(r.entries[1].slice_point.coords, vec![1.0, 2.0]);
        assert!(r.max_residual < 1e-15);
    }

    #[test]
    fn sphere_equator_point() {
        let inst = instance_lookup("cpt-sphere").unwrap();
        let r = fiber(&inst, &DenseMatrix::column_vector(&[1.0, 0.0, 0.0]), &Tolerances::default()).unwrap();
        assert_eq!(r.count, 2);
        let theta: Vec<f64> = r.entries.iter().map(|e| e.slice_point.coords[0]).collect();
        assert!((theta[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((theta[1] + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn wrong_degree_is_a_defect() {
        let inst = instance_lookup("lin-sym-O(2)").unwrap().with_expected_degree("broken", 3);
        match fiber(&inst, &DenseMatrix::diag_real(&[1.0, 2.0]), &Tolerances::default()) {
            Err(Error::FiberDefect(r)) => assert_eq!((r.count, r.expected), (2, 3)),
            other => panic!("expected a defect, got {other:?}"),
        }
    }
}
