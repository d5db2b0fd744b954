use thiserror::Error;

/// Errors raised by the library. Every variant carries a human-readable
/// detail string so the CLI can surface it unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("invalid almost abelian spec: {0}")]
    InvalidSpec(String),
    #[error("not a hypercomplex structure: {0}")]
    NotHypercomplex(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("complex structure is not compatible with the metric")]
    NotHermitian,
    #[error("triple is not hyperhermitian for the metric: {0}")]
    NotHyperhermitian(String),
    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),
    #[error("tangent lift requires a flat, torsion-free connection: {0}")]
    LiftRequiresFlatTorsionFree(String),
    #[error("dimension {dim} exceeds the desk-scale cap {cap}")]
    DeskScaleExceeded { dim: usize, cap: usize },
    #[error("decomposition consistency failure: {0}")]
    Inconsistent(String),
    #[error("census mismatch for {record}: {detail}")]
    CensusMismatch { record: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
