use thiserror::Error;

use crate::polyring::CoeffRing;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(CoeffRing, CoeffRing),

    #[error("negative exponent would be produced for variable `{0}`")]
    NegativeExponent(String),

    #[error("not integral: {0}")]
    NotIntegral(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),

    #[error("equation for `{0}` has an etale special fibre (twist 0); expected an alpha_p fibre")]
    EtaleFibre(String),

    #[error("search space too large: {candidates} candidates exceeds limit {limit}")]
    SearchSpaceTooLarge { candidates: String, limit: u64 },

    #[error("identity check failed: {0}")]
    IdentityFailure(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
