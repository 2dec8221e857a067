//! Jacobians, Monte Carlo estimates and density histograms for the
//! integration formula on compact instances.

mod functions;
mod histogram;
mod jacobian;
mod montecarlo;

pub use functions::TestFunction;
pub use histogram::{density_histogram, expected_probabilities, HistogramBin, HistogramComparison, QUADRATURE_NODES};
pub use jacobian::{jacobian_root_scan, radial_jacobian, radial_jacobian_fd, JacobianSample, RootScan};
pub use montecarlo::{mc_lhs, mc_rhs, verify_integration, verify_integration_all, IntegrationVerdict, MCEstimate, BATCH, MIN_SAMPLES};
