//! Checks that the map `(gK, y) ↦ σ_g(y)` from `G/K × Y` onto the regular
//! part of a matrix ensemble is a finite covering, and compares both sides of
//! the resulting integration formula by Monte Carlo.

pub mod checker;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod registry;
pub mod tol;
pub mod weyl;

pub use error::{Error, Result};
pub use tol::Tolerances;
