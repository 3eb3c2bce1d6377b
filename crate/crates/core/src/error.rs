use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64, det: i64 },

    #[error("weight {weight} is not congruent mod 12 to the SL2 weight {expected} of the matrix")]
    WeightMismatch { weight: i64, expected: i64 },

    #[error("element is not in the kernel: {0}")]
    NotInKernel(String),

    #[error("word does not project to +-I in SL2(Z)")]
    NotPlusMinusIdentity,

    #[error("seed vectors have determinant {0}, expected 1")]
    BadSeed(i64),

    #[error("adjacent determinant det(v{i}, v{j}) = {det} is not positive")]
    NonPositiveDeterminant { i: usize, j: usize, det: i64 },

    #[error("invalid toric fan: {0}")]
    InvalidToricFan(String),

    #[error("invalid semitoric fan: {0}")]
    InvalidSemitoricFan(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("move {step} ({mv}) not applicable: {reason}")]
    MoveNotApplicable { step: usize, mv: String, reason: String },

    #[error("normalization stalled: {0}")]
    NormalizationStalled(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("polygon is not convex after shear at lambda = {0}")]
    NonConvexShear(String),

    #[error("fans differ: {0}")]
    FanMismatch(String),

    #[error("component mismatch: {0}")]
    ComponentMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search space of {0} words exceeds the limit of 10^8")]
    SearchSpaceTooLarge(u128),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
