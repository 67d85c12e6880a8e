use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("real action does not descend to the torsion-free quotient (defect {defect:e})")]
    NotDescending { defect: f64 },

    #[error("structure constants are not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("unit element is not a two-sided unit")]
    BadUnit,

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("invertible object has a non-regular bimodule but no inverse bimodule data")]
    UnsupportedInvertible,

    #[error("invalid module data: {0}")]
    InvalidModule(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map does not send source relations into target relations")]
    NotWellDefined,

    #[error("degree window too small: {0}")]
    WindowTooSmall(String),

    #[error("graded module is not flagged stable")]
    NotStable,

    #[error("stabilization not detected; invariants still changing at degree {degree}")]
    StabilizationNotDetected { degree: i64 },

    #[error("degenerate determinant line: {0}")]
    DegenerateDetLine(String),

    #[error("base change contract violated: lattice rank {lattice} but real dimension {real}")]
    BaseChange { lattice: usize, real: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
