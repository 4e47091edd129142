use std::path::PathBuf;

use thiserror::Error;

use crate::market::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid market instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("quantity {quantity} out of range [0, {max}] for {what}")]
    QuantityOutOfRange {
        what: &'static str,
        quantity: u64,
        max: u64,
    },

    #[error("trade between supplier {supplier} and market {market} is not allowed")]
    MaskedPair { supplier: usize, market: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("auction exceeded iteration cap of {cap} ticks")]
    IterationCap { cap: u64 },

    #[error("enumeration of {required} candidates exceeds budget of {budget}")]
    EnumerationBudget { required: u128, budget: u128 },

    #[error("degenerate regression input: {0}")]
    Degenerate(&'static str),

    #[error("{what}: rejection budget of {budget} redraws exhausted")]
    RejectionBudget { what: String, budget: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("equilibrium verification failed: {0}")]
    Verification(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }

    /// Whether the failure stems from bad inputs or configuration (exit
    /// code 1) rather than a runtime or verifier failure (exit code 2).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInstance(_)
                | Error::InvalidArgument(_)
                | Error::Config(_)
                | Error::Data(_)
                | Error::QuantityOutOfRange { .. }
                | Error::MaskedPair { .. }
                | Error::Degenerate(_)
                | Error::Csv { .. }
        )
    }
}
