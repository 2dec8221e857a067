use thiserror::Error;

use crate::checker::FiberReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not self-adjoint (asymmetry {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("degenerate spectrum (minimal gap {0:.3e})")]
    DegenerateSpectrum(f64),
    #[error("matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("{0} consecutive draws failed the membership/regularity predicate")]
    RejectionOverflow(usize),
    #[error("not a group element (residual {0:.3e})")]
    NotGroupElement(f64),
    #[error("point is not regular (gap {0:.3e})")]
    NotRegular(f64),
    #[error("catalog corrupt: {0}")]
    CatalogCorrupt(String),
    #[error("fiber defect: {}", .0.summary())]
    FiberDefect(Box<FiberReport>),
    #[error("slice escape defect: {0}")]
    EscapeDefect(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("reconstruction residual {0:.3e} exceeds tolerance")]
    Reconstruction(f64),
    #[error("instance `{0}` is not eligible: {1}")]
    NotEligible(String, &'static str),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSelfAdjoint(_) => "NotSelfAdjoint",
            Error::NotUnitary(_) => "NotUnitary",
            Error::NoConvergence(_) => "NoConvergence",
            Error::DegenerateSpectrum(_) => "DegenerateSpectrum",
            Error::NotPositiveDefinite(_) => "NotPositiveDefinite",
            Error::UnknownInstance(_) => "UnknownInstance",
            Error::RejectionOverflow(_) => "RejectionOverflow",
            Error::NotGroupElement(_) => "NotGroupElement",
            Error::NotRegular(_) => "NotRegular",
            Error::CatalogCorrupt(_) => "CatalogCorrupt",
            Error::FiberDefect(_) => "FiberDefect",
            Error::EscapeDefect(_) => "EscapeDefect",
            Error::InsufficientSamples(_) => "InsufficientSamples",
            Error::Reconstruction(_) => "Reconstruction",
            Error::NotEligible(..) => "NotEligible",
            Error::Shape(_) => "Shape",
            Error::Parse(_) => "Parse",
        }
    }

    /// Failures of the numerical machinery itself rather than of a checked property.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence(_) | Error::RejectionOverflow(_))
    }
}
