use thiserror::Error;

/// Errors raised by the simulator and its front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arrhenius denominator `1 + beta*theta` is not positive.
    #[error("temperature {theta} out of domain: 1 + beta*theta = {denom} <= 0")]
    Domain { theta: f64, denom: f64 },

    /// NaN/Inf or an out-of-range conversion appeared during integration.
    #[error("numerical failure at tau = {tau}: {reason}")]
    Numerical { tau: f64, reason: String },

    /// A simulation aborted inside a given switching cycle.
    #[error("simulation failed in cycle {cycle}: {source}")]
    Cycle {
        cycle: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// Input series contains a non-finite value.
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("config error for key `{key}`: {reason}")]
    Config { key: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
