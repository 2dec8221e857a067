//! Numerical thresholds shared by every check. All of them are overridable
//! and every report embeds the resolved set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Membership residuals (self-adjointness, unitarity, group membership).
    pub structural: f64,
    /// Root values at or below this are treated as zero (spectral ties, poles).
    pub degeneracy: f64,
    /// Self-adjoint reconstruction residual, relative to `‖A‖_F`.
    pub eig_residual: f64,
    /// Unitary reconstruction residual.
    pub unitary_residual: f64,
    /// SPD log/exp round trip, relative Frobenius.
    pub roundtrip: f64,
    pub sweep_cap: usize,
    pub pencil_retries: usize,
    /// Relative singular-value cutoff for numerical rank and kernels.
    pub rank: f64,
    pub fiber_residual: f64,
    /// Minimal coset distance separating distinct fiber entries.
    pub coset_separation: f64,
    pub dedup: f64,
    /// Slice-preservation residual for Weyl representatives.
    pub weyl_slice: f64,
    pub det_floor: f64,
    pub fd_step: f64,
    pub fd_relative: f64,
    /// Allowed failure fraction of the invariance check.
    pub invariance_failure: f64,
    pub escape_slope_min: f64,
    pub escape_slope_max: f64,
    pub escape_factor: f64,
    pub screen_hit: f64,
    pub screen_match: f64,
    pub orthogonality: f64,
    pub root_scan: f64,
    /// Standard-error multiplier for the two-sided integration check.
    pub stat_multiplier: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-8,
            degeneracy: 1e-10,
            eig_residual: 1e-10,
            unitary_residual: 1e-9,
            roundtrip: 1e-9,
            sweep_cap: 100,
            pencil_retries: 5,
            rank: 1e-8,
            fiber_residual: 1e-8,
            coset_separation: 1e-4,
            dedup: 1e-9,
            weyl_slice: 1e-10,
            det_floor: 1e-10,
            fd_step: 1e-5,
            fd_relative: 1e-6,
            invariance_failure: 1e-3,
            escape_slope_min: 0.9,
            escape_slope_max: 1.1,
            escape_factor: 0.1,
            screen_hit: 1e-6,
            screen_match: 1e-4,
            orthogonality: 1e-8,
            root_scan: 1e-6,
            stat_multiplier: 4.0,
        }
    }
}

impl Tolerances {
    /// Overrides one field by name, e.g. `("structural", "1e-9")`.
    /// The aliases `degeneracy-gap` and `stat` are accepted.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = match key {
            "degeneracy-gap" | "degeneracy_gap" => "degeneracy",
            "stat" => "stat_multiplier",
            k => k,
        };
        let number: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("tolerance `{key}` needs a number, got `{value}`")))?;
        let mut map = match serde_json::to_value(&*self).expect("tolerances serialize") {
            serde_json::Value::Object(m) => m,
            _ => unreachable!(),
        };
        let slot = map
            .get_mut(key)
            .ok_or_else(|| Error::Parse(format!("unknown tolerance `{key}`")))?;
        *slot = if slot.is_u64() {
            if number < 0.0 || number.fract() != 0.0 {
                return Err(Error::Parse(format!("tolerance `{key}` must be a nonnegative integer")));
            }
            serde_json::json!(number as u64)
        } else {
            serde_json::json!(number)
        };
        *self = serde_json::from_value(serde_json::Value::Object(map))
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}
