use serde::{Deserialize, Serialize};

use super::eigen::eig_self_adjoint;
use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartDirection {
    Log,
    Exp,
}

/// Matrix logarithm of an SPD matrix, or exponential of a symmetric one,
/// by functional calculus on the spectrum.
pub fn spd_chart(a: &DenseMatrix, direction: ChartDirection, tol: &Tolerances) -> Result<DenseMatrix> {
    let dec = eig_self_adjoint(a, tol)?;
    let mapped: Vec<f64> = match direction {
        ChartDirection::Log => {
            let smallest = dec.values.last().copied().unwrap_or(0.0);
            if smallest <= tol.degeneracy {
                return Err(Error::NotPositiveDefinite(smallest));
            }
            dec.values.iter().map(|v| v.ln()).collect()
        }
        ChartDirection::Exp => dec.values.iter().map(|v| v.exp()).collect(),
    };
    let f = &dec.frame;
    let out = f.matmul(&DenseMatrix::diag_real(&mapped)).matmul(&f.adjoint());
    // Symmetrize away rounding so the result stays exactly self-adjoint.
    Ok(out.add(&out.adjoint()).scale(0.5))
}
