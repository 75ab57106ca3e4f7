use thiserror::Error;

use crate::ieee::FloatClass;

/// Errors produced by conversion, parsing and dataset loading.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("big integer subtraction would underflow")]
    Underflow,

    #[error("operation requires a finite value, got {0:?}")]
    NotFinite(FloatClass),

    #[error("operation requires a nonzero finite value, got {0:?}")]
    NoInterval(FloatClass),

    #[error("significand {m} with exponent {p} is not representable in {width}")]
    NotRepresentable { m: u64, p: i32, width: &'static str },

    #[error("malformed number {text:?}: {reason}")]
    Malformed { text: String, reason: &'static str },

    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
