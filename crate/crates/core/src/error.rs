use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a jet with zero constant term")]
    DivisionByZeroJet,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parametric curve is not locally a graph y(x) (dx/dt = 0)")]
    NotAGraph,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("transformed jet has a vertical tangent (|a11 + a12*y1| <= 1e-12)")]
    VerticalTangent,

    #[error("affine map is degenerate (|det| <= 1e-12)")]
    DegenerateMap,

    #[error("point is singular (S1 = 0 or S2 = 0)")]
    SingularPoint,

    #[error("sample {index} is regular; curve is not singular everywhere")]
    NotAllSingular { index: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("S3 vanishes; modular invariants T1, T2 are undefined")]
    S3Zero,

    #[error("integration step too large: frame norm grew by {growth:e} in one step")]
    StepTooLarge { growth: f64 },

    #[error("invalid curvature profile: {0}")]
    InvalidProfile(String),

    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
