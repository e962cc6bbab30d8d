use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition (bad prime, level, dimension, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("operands belong to different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),

    #[error("value is not integral at p: {0}")]
    NotIntegral(String),

    #[error("linear part is not invertible at working precision")]
    NotInvertible,

    #[error("nerve complex is disconnected: {0}")]
    DisconnectedNerve(String),

    /// The elliptic curve does not satisfy the hypotheses of the hearing construction.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("no point count in the Hasse window {lo}..={hi} reproduces lambda0 = {lambda0}")]
    NoMatch { lambda0: f64, lo: u64, hi: u64 },

    #[error("point counts {candidates:?} all reproduce lambda0 = {lambda0} within tolerance")]
    Ambiguous { lambda0: f64, candidates: Vec<u64> },

    #[error("cell {0} has zero total jump rate")]
    ZeroTotalRate(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Precondition(_) => "precondition",
            Error::PrecisionExhausted(_) => "precision-exhausted",
            Error::PrimeMismatch(..) => "prime-mismatch",
            Error::NotIntegral(_) => "not-integral",
            Error::NotInvertible => "not-invertible",
            Error::DisconnectedNerve(_) => "disconnected-nerve",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::NoMatch { .. } => "no-match",
            Error::Ambiguous { .. } => "ambiguous",
            Error::ZeroTotalRate(_) => "zero-total-rate",
            Error::Parse(_) => "parse",
        }
    }
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
