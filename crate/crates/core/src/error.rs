use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    ZeroInput,
    DimensionMismatch { expected: usize, got: usize },
    ContextMismatch,
    SizeMismatch { left: usize, right: usize },
    NotAUnit,
    NotCentral,
    IndexClash,
    NotNilpotentShape,
    WrongTauMode,
    NotClosed(String),
    EtaEscapesL,
    NotStablyElementaryCertificate,
    InvariantViolation(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroInput => write!(f, "zero input where a nonzero value is required"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::ContextMismatch => write!(f, "operands belong to different torus contexts"),
            Error::SizeMismatch { left, right } => {
                write!(f, "matrix size mismatch: {left} vs {right}")
            }
            Error::NotAUnit => write!(f, "element is not a unit (must be a nonzero single graded term)"),
            Error::NotCentral => write!(f, "element is not central"),
            Error::IndexClash => write!(f, "indices must be pairwise distinct"),
            Error::NotNilpotentShape => {
                write!(f, "matrix is not of the form a*E_ij with i != j")
            }
            Error::WrongTauMode => write!(f, "operation requires a different tau mode"),
            Error::NotClosed(what) => write!(f, "derivation bracket leaves the declared basis span: {what}"),
            Error::EtaEscapesL => write!(f, "eta image escapes the embedded subalgebra"),
            Error::NotStablyElementaryCertificate => {
                write!(f, "word reduction produced a nontrivial unit; no elementarity certificate")
            }
            Error::InvariantViolation(what) => write!(f, "invariant violated: {what}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
