use std::fmt;

use thiserror::Error;

/// Local basis a reduced state is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartId {
    /// `(δ, β, θ)` chart; singular where `T = ±j`.
    Theta,
    /// `(γ, α, φ)` chart; singular where `T = ±i`.
    Phi,
}

impl ChartId {
    pub fn as_str(self) -> &'static str {
        match self {
            ChartId::Theta => "theta",
            ChartId::Phi => "phi",
        }
    }

    pub fn other(self) -> Self {
        match self {
            ChartId::Theta => ChartId::Phi,
            ChartId::Phi => ChartId::Theta,
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ChartId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(ChartId::Theta),
            "phi" => Ok(ChartId::Phi),
            other => Err(Error::Parse(format!("unknown chart id `{other}`"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arc length {s} outside profile domain [{lo}, {hi}]")]
    Domain { s: f64, lo: f64, hi: f64 },

    #[error("curvature profile evaluates to {value} < 0 at s = {s}")]
    NegativeCurvature { s: f64, value: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("vector norm {norm} is not 1")]
    NotUnit { norm: f64 },

    #[error("initial frame is not orthonormal (defect {defect})")]
    NotOrthonormal { defect: f64 },

    #[error("{chart} chart singular at s = {s} (|component| = {component})")]
    ChartSingular { chart: ChartId, s: f64, component: f64 },

    #[error("both charts singular at s = {s}")]
    BothChartsSingular { s: f64 },

    #[error("closed form outside its validity window at s = {s}: {reason}")]
    OutOfValidity { s: f64, reason: String },

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("trace has {len} samples; at least 3 are required")]
    TooShort { len: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value produced at s = {s}")]
    NonFinite { s: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ChartSingular { .. }
                | Error::BothChartsSingular { .. }
                | Error::OutOfValidity { .. }
                | Error::Quadrature { .. }
                | Error::GridMismatch(_)
                | Error::NonFinite { .. }
                | Error::TooShort { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
