use std::path::PathBuf;

/// Errors raised anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("defining polynomial is not monic")]
    NonMonic,
    #[error("inconsistent ramification data: {0}")]
    InconsistentSplit(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(u64, u64),
    #[error("duplicate generator label {0}")]
    DuplicateLabel(u64),
    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),
    #[error("element is not idempotent modulo {0}")]
    NotIdempotent(u64),
    #[error("matrix does not lie in the algebra spanned by the generators")]
    NotInAlgebra,
    #[error("invalid Bezout certificate")]
    InvalidCertificate,
    #[error("f(a0) is not in the maximal ideal")]
    NoApproximateRoot,
    #[error("stored labels span only {found} of {rank} dimensions; raise the coefficient bound")]
    InsufficientLabels { found: usize, rank: usize },
    #[error("coefficient bound {requested} exceeds stored bound {available}")]
    BoundExceeded { requested: u64, available: u64 },
    #[error("residue characteristics differ: {0} vs {1}")]
    ResidueCharacteristic(u64, u64),
    #[error("precision cap reached: attained {attained}, needed {needed}")]
    PrecisionCap { attained: u32, needed: u32 },
    #[error("{path}: line {line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("not computed: {0}")]
    NotComputed(String),
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("store corruption at {path}: {msg}")]
    Corrupt { path: PathBuf, msg: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn parse(path: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, msg: msg.into() }
    }
}
