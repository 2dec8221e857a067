//! Test functions for the two-sided integration check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::DenseMatrix;
use crate::registry::{EnsembleClass, EnsembleInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestFunction {
    #[serde(rename = "one")]
    One,
    /// `Re tr x`.
    #[serde(rename = "tr")]
    Trace,
    /// `Re tr x²`.
    #[serde(rename = "tr2")]
    TraceSquare,
    /// `Re x₁₁`, which is not invariant.
    #[serde(rename = "re-x11")]
    ReX11,
    /// Third coordinate of a sphere point.
    #[serde(rename = "x3")]
    X3,
    /// Square of the first coordinate of a sphere point.
    #[serde(rename = "x1sq")]
    X1Squared,
}

impl TestFunction {
    pub const ALL: [TestFunction; 6] = [
        TestFunction::One,
        TestFunction::Trace,
        TestFunction::TraceSquare,
        TestFunction::ReX11,
        TestFunction::X3,
        TestFunction::X1Squared,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::Trace => "tr",
            TestFunction::TraceSquare => "tr2",
            TestFunction::ReX11 => "re-x11",
            TestFunction::X3 => "x3",
            TestFunction::X1Squared => "x1sq",
        }
    }

    pub fn evaluate(&self, x: &DenseMatrix) -> f64 {
        match self {
            TestFunction::One => 1.0,
            TestFunction::Trace => x.trace().re,
            TestFunction::TraceSquare => x.matmul(x).trace().re,
            TestFunction::ReX11 => x.re(0, 0),
            TestFunction::X3 => x.re(2, 0),
            TestFunction::X1Squared => x.re(0, 0).powi(2),
        }
    }

    /// The functions registered for an instance.
    pub fn registry_for(instance: &EnsembleInstance) -> Vec<TestFunction> {
        if instance.ensemble_class == EnsembleClass::Compact {
            vec![TestFunction::One, TestFunction::X3, TestFunction::X1Squared]
        } else {
            vec![TestFunction::One, TestFunction::Trace, TestFunction::TraceSquare, TestFunction::ReX11]
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TestFunction::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown test function `{s}`")))
    }
}
