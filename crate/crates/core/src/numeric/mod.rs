//! Field-generic dense kernels used by every other module.

pub mod complex;
pub mod eigen;
pub mod haar;
pub mod linalg;
pub mod matrix;
pub mod rng;
pub mod spd;

pub use complex::Cplx;
pub use eigen::{eig_self_adjoint, eig_unitary, EigenDecomposition, SpectrumKind};
pub use haar::{haar_sample, CompactGroup};
pub use matrix::{DenseMatrix, Field};
pub use rng::RngStream;
pub use spd::{spd_chart, ChartDirection};
