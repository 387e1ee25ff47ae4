use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),

    #[error("a two-mode operation needs two distinct modes, got `{0}` twice")]
    SameMode(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("matrix is not unitary: max |U^dagger U - I| = {0:e}")]
    NotUnitary(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no amplitude in the postselected subspace")]
    NoPostselection,

    #[error("path enumeration limited to K <= {max}, got K = {k}")]
    EnumerationBound { k: usize, max: usize },

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("invalid mesh program: {0}")]
    Mesh(String),

    #[error("no postselected counts in the {0} basis")]
    InsufficientStatistics(String),
}

pub type Result<T> = std::result::Result<T, Error>;
