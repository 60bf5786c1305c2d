use thiserror::Error;

/// Errors produced by the walk simulator, sequence tools and optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QwalkError {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("walk of {requested} steps does not fit a lattice of half-width {half_width}")]
    LatticeExhausted { requested: usize, half_width: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("coin {label} is not supported here (only H and F are)")]
    UnsupportedCoin { label: String },

    #[error("exhaustive search over 2^{n_steps} sequences exceeds the limit of 2^{max}")]
    EnumerationTooLarge { n_steps: usize, max: usize },

    #[error("empty {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, QwalkError>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> QwalkError {
    QwalkError::InvalidParameter { name, value, reason }
}
