use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KfanoError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("zero vector has no primitivity")]
    ZeroVector,

    #[error("empty degree vector")]
    EmptyDegreeVector,

    #[error("degree vector entry must be positive")]
    NonPositiveDegree,

    #[error("type C requires the doubled curve to have degree at least two")]
    TypeCNeedsHigherDegree,

    #[error("exponent l_{label} must be positive")]
    NonPositiveExponent { label: String },

    #[error("shift d_{label} must be nonnegative")]
    NegativeShift { label: String },

    #[error("column {label} of the generator matrix is not primitive")]
    NonPrimitiveColumn { label: String },

    #[error("generator matrix has duplicate columns ({a}, {b})")]
    DuplicateColumns { a: String, b: String },

    #[error("positivity inequality violated: {which}")]
    PositivityViolated { which: String },

    #[error("class group has rank {rank}, expected rank one")]
    RankNotOne { rank: usize },

    #[error("grading homogeneity violated at relation {relation}")]
    HomogeneityViolated { relation: usize },

    #[error("anticanonical degree is not a positive integer: {value}")]
    NonIntegerDegree { value: String },

    #[error("classification count mismatch: expected {expected}, got {got} for {row}")]
    CountMismatch {
        row: String,
        expected: String,
        got: String,
    },

    #[error("unknown family key: {key}")]
    UnknownKey { key: String },

    #[error("{0}")]
    Parse(String),
}
