use thiserror::Error;

use crate::field::Valuation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("working precision must be at least 1, got {0}")]
    InvalidPrecision(u32),

    #[error("operands live in different fields ({left} vs {right})")]
    ContextMismatch { left: String, right: String },

    #[error("division by an element that is zero at precision O({0})")]
    DivisionByZero(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not square: {0}")]
    NotSquare(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("invalid rescaling: {0}")]
    InvalidRescale(String),

    #[error("invalid counterexample parameters: {0}")]
    InvalidCounterexample(String),

    #[error("matrix is invertible at working precision, no kernel vector exists")]
    NoKernel,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error(
        "Newton iteration is not contracting at step {step}: ord f(x_k) went from {previous} to {current} \
         (start: ord f(x0) = {ord_f_start}, ord f'(x0) = {ord_df_start})"
    )]
    NonContracting {
        step: usize,
        previous: Valuation,
        current: Valuation,
        ord_f_start: Valuation,
        ord_df_start: Valuation,
    },

    #[error("no stabilization of (A/lambda)^(2^k) within {cap} squarings")]
    NoStabilization { cap: u32 },

    #[error("certification failed: {0}")]
    CertificationFailure(String),
}

impl Error {
    /// Errors caused by malformed or out-of-domain user input, as opposed to
    /// failures of the certification pipeline itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::InvalidPrecision(_)
                | Error::Parse(_)
                | Error::NotSquare(_)
                | Error::DimensionMismatch(_)
                | Error::HypothesisViolation(_)
                | Error::InvalidRescale(_)
                | Error::InvalidCounterexample(_)
                | Error::ContextMismatch { .. }
        )
    }
}
