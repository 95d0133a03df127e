use super::{LogComplex, ModInterval, Result};
use crate::real::Real;

/// Result of an evaluation: a full complex value, or only modulus bounds when
/// an argument was lost to a log-only exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value<T> {
    Point(LogComplex<T>),
    Modulus(ModInterval<T>),
}

impl<T: Real> Value<T> {
    pub fn one() -> Self {
        Value::Point(LogComplex::one())
    }

    pub fn as_point(&self) -> Option<&LogComplex<T>> {
        match self {
            Value::Point(p) => Some(p),
            Value::Modulus(_) => None,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Value::Point(_))
    }

    /// Lower bound on the log-modulus (`-inf` when the value may be zero).
    pub fn log_abs_lo(&self) -> T {
        match self {
            Value::Point(p) => p.log_abs(),
            Value::Modulus(m) => m.lo_log(),
        }
    }

    pub fn log_abs_hi(&self) -> T {
        match self {
            Value::Point(p) => p.log_abs(),
            Value::Modulus(m) => m.hi_log(),
        }
    }

    pub fn to_interval(&self) -> Result<ModInterval<T>> {
        match self {
            Value::Point(p) if p.is_zero() => {
                ModInterval::new(T::neg_infinity(), T::min_value())
            }
            Value::Point(p) => ModInterval::point(p.log_abs()),
            Value::Modulus(m) => Ok(*m),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Value::Point(a), Value::Point(b)) => a.mul(b).map(Value::Point),
            _ => {
                if matches!(self, Value::Point(p) if p.is_zero())
                    || matches!(other, Value::Point(p) if p.is_zero())
                {
                    return Ok(Value::Point(LogComplex::zero()));
                }
                self.to_interval()?.mul(&other.to_interval()?).map(Value::Modulus)
            }
        }
    }
}

impl<T: Real> From<LogComplex<T>> for Value<T> {
    fn from(p: LogComplex<T>) -> Self {
        Value::Point(p)
    }
}
