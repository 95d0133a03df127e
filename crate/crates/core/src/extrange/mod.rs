//! Extended-range arithmetic.
//!
//! Complex values are stored in log-polar form so that moduli like
//! `exp(1e6)` remain representable. When an exponent is only known through
//! its logarithm the argument of the power is meaningless, and the result
//! degrades to a [`ModInterval`] bounding the modulus.

mod count;
mod interval;
mod logcomplex;
mod value;

pub use count::BigCount;
pub use interval::ModInterval;
pub use logcomplex::LogComplex;
pub use value::Value;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtRangeError {
    #[error("log-modulus left the finite range")]
    RangeExhausted,
    #[error("zero raised to a power known only by its logarithm")]
    ZeroToLogOnlyPower,
    #[error("lower modulus bound is indeterminate (interval may contain zero)")]
    IndeterminateSign,
    #[error("exact count required, got a log-only count")]
    LogOnlyCount,
}

pub type Result<T> = std::result::Result<T, ExtRangeError>;
