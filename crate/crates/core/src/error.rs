use thiserror::Error;

/// Errors produced by the channel model, the allocators and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value violates its constraint.
    #[error("invalid configuration: {field}: must satisfy {constraint}")]
    Config {
        field: &'static str,
        constraint: &'static str,
    },

    /// An operation was called with arguments outside its contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// D2D pairs exist but there is no cellular resource to carry them.
    #[error("infeasible instance: {num_d2d} D2D pairs but no cellular resource")]
    Infeasible { num_d2d: usize },

    /// Exhaustive search space exceeds the enumeration guard.
    #[error("instance too large for exhaustive search: {num_cellular}^{num_d2d} exceeds {limit}")]
    TooLarge {
        num_cellular: usize,
        num_d2d: usize,
        limit: u64,
    },

    /// A statistic is undefined for the given samples.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),
}

impl Error {
    /// Short machine-readable tag for the error category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config { .. } => "config",
            Error::Usage(_) => "usage",
            Error::Infeasible { .. } => "infeasible",
            Error::TooLarge { .. } => "too-large",
            Error::Degenerate(_) => "degenerate",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
