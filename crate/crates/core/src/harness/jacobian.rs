use serde::Serialize;

use crate::checker::{check_phi_regular, phi_det_fd};
use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::registry::{EnsembleInstance, SlicePoint};
use crate::tol::Tolerances;

/// `|det dφ|` at `([e], y)`; the same kernel as [`check_phi_regular`].
pub fn radial_jacobian(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<f64> {
    check_phi_regular(instance, y, tol)
}

/// [`radial_jacobian`] with orbit columns from central differences.
pub fn radial_jacobian_fd(instance: &EnsembleInstance, y: &[f64], tol: &Tolerances) -> Result<f64> {
    phi_det_fd(instance, y, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobianSample {
    pub y: SlicePoint,
    pub jacobian: f64,
    pub root_product: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootScan {
    pub instance_id: String,
    pub samples: Vec<JacobianSample>,
    /// `max |ratio_i / ratio_1 − 1|`.
    pub max_deviation: f64,
}

/// Checks that `J(y)/V(y)` is constant over random regular slice points.
pub fn jacobian_root_scan(
    instance: &EnsembleInstance,
    probes: usize,
    rng: &mut RngStream,
    tol: &Tolerances,
) -> Result<RootScan> {
    let mut samples = Vec::with_capacity(probes);
    while samples.len() < probes {
        let y = instance.sample_regular_slice(rng, tol)?;
        let root_product = instance
            .root_product(&y)
            .ok_or_else(|| Error::NotEligible(instance.id.clone(), "no declared root product"))?;
        let jacobian = match radial_jacobian(instance, &y, tol) {
            Ok(j) => j,
            Err(Error::NotRegular(_)) => continue,
            Err(e) => return Err(e),
        };
        samples.push(JacobianSample { y: instance.slice_point(y), jacobian, root_product, ratio: jacobian / root_product });
    }
    let first = samples.first().map(|s| s.ratio).unwrap_or(1.0);
    let max_deviation = samples.iter().map(|s| (s.ratio / first - 1.0).abs()).fold(0.0, f64::max);
    Ok(RootScan { instance_id: instance.id.clone(), samples, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::instance_lookup;

    #[test]
    fn sphere_jacobian_is_sin_theta() {
        let inst = instance_lookup("cpt-sphere").unwrap();
        let t = std::f64::consts::FRAC_PI_4;
        let j = radial_jacobian(&inst, &[t], &Tolerances::default()).unwrap();
        assert!((j - t.sin()).abs() < 1e-9);
    }

    #[test]
    fn jacobian_ratios_follow_the_root_exponent() {
        let tol = Tolerances::default();
        let u = instance_lookup("alg-u(2)").unwrap();
        let r = radial_jacobian(&u, &[2.0, 0.0], &tol).unwrap() / radial_jacobian(&u, &[1.0, 0.0], &tol).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
        let o = instance_lookup("lin-sym-O(2)").unwrap();
        let r = radial_jacobian(&o, &[3.0, 1.0], &tol).unwrap() / radial_jacobian(&o, &[2.0, 1.0], &tol).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }
}
