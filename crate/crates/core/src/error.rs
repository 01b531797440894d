use coxfilt_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown group label `{0}` (expected A2, A3, B2, B3, G2, H3 or I2(m))")]
    UnknownLabel(String),
    #[error("{label} is not supported: {reason}")]
    Unsupported { label: String, reason: String },
    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("{label}: generated {found} group elements, expected {expected}")]
    GroupOrder { label: String, found: usize, expected: usize },
    #[error("no invariant of degree {0} among the seed polynomials extends the chosen family")]
    SearchExhausted(u32),
    #[error("invalid invariant set: {0}")]
    InvalidInvariants(String),
    #[error("invariant file {path}: {msg}")]
    InvariantFile { path: String, msg: String },
    #[error("{what} is not polynomial")]
    NotPolynomial { what: String },
    #[error("{what} is singular")]
    Singular { what: String },
    #[error("no derivation in the ansatz space solves the k = {k} equation")]
    Inconsistent { k: usize },
    #[error("the k = {k} equation has more than one solution in the ansatz space")]
    Underdetermined { k: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
