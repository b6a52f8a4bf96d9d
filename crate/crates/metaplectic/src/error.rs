use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("result is not a polynomial: {0}")]
    NonPolynomialResult(String),
    #[error("exact coefficients required")]
    ExactModeRequired,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("component of degree {0} lies outside the graded range")]
    DegreeOutOfRange(i64),
    #[error("rank {0} is not supported here")]
    UnsupportedRank(usize),
    #[error("singular matrix")]
    Singular,
    #[error("upper-left block is singular, also after J pre-multiplication")]
    SingularABlock,
    #[error("matrix is not in the symplectic algebra (residual {0:e})")]
    NotSymplecticAlgebra(f64),
    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),
    #[error("matrix has non-real entries (max imaginary part {0:e})")]
    NonReal(f64),
    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),
    #[error("quadrature order insufficient: {0}")]
    QuadratureInsufficient(String),
    #[error("safe window exhausted: input degree {degree} exceeds window {window}")]
    SafeWindowExhausted { degree: i64, window: i64 },
    #[error("truncation degrees differ ({0} vs {1})")]
    TruncationMismatch(u32, u32),
    #[error("unknown check name: {0}")]
    UnknownCheck(String),
    #[error("unknown table: {0}")]
    UnknownTable(String),
    #[error("unknown dump object: {0}")]
    UnknownDump(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
