use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("no invariant form attached to {0}")]
    MissingForm(String),
    #[error("invariant form is degenerate")]
    DegenerateForm,
    #[error("form parity mismatch: expected an {expected} form, found an {found} one")]
    FormParityMismatch { expected: &'static str, found: &'static str },
    #[error("ad({cartan}) does not act diagonally on basis vector {vector}")]
    NonDiagonalAction { cartan: String, vector: String },
    #[error("root of {0} vanishes on the splitting element")]
    ZeroOnRoot(String),
    #[error("no splitting element attached")]
    MissingSplitter,
    #[error("weight-zero vector {0} lies outside the Cartan subalgebra")]
    CartanNotWeightZero(String),
    #[error("partition enumeration exceeded its bound: {0}")]
    InfinitePartitions(String),
    #[error("the operator A is not scalar")]
    NonScalarA,
    #[error("grading incompatible: {0}")]
    GradingIncompatible(String),
    #[error("loop degree {degree} not allowed for {base} in the twisted algebra")]
    UnsupportedDegree { degree: i64, base: String },
    #[error("Cartan subalgebra has odd elements; use the Clifford-valued form (bsh_gram)")]
    OddCartan,
    #[error("{0} is not a weight of U(g+)")]
    NotAWeight(String),
    #[error("weight {0} lies outside the admissible cone")]
    OutOfCone(String),
    #[error("invalid anti-automorphism: {0}")]
    InvalidSigma(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
