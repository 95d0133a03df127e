use super::{ExtRangeError, Result};
use serde::{Deserialize, Serialize};

const EXACT_LIMIT: u64 = 1 << 53;

/// A nonnegative integer count that may exceed machine integers.
///
/// Counts at or above 2^53 are kept only through their natural logarithm:
/// multiplying an angle by such a count has no meaning in double precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BigCount {
    Exact {
        value: u64,
        #[serde(with = "crate::hexfloat")]
        log_value: f64,
    },
    LogOnly {
        #[serde(with = "crate::hexfloat")]
        log_value: f64,
    },
}

impl BigCount {
    pub fn exact(value: u64) -> Self {
        if value >= EXACT_LIMIT {
            return BigCount::LogOnly { log_value: (value as f64).ln() };
        }
        BigCount::Exact { value, log_value: (value as f64).ln() }
    }

    /// Count known through its natural log. Small counts are recovered exactly.
    pub fn from_log(log_value: f64) -> Self {
        if log_value < (EXACT_LIMIT as f64).ln() {
            BigCount::exact(floor_near_integer(log_value.exp()))
        } else {
            BigCount::LogOnly { log_value }
        }
    }

    /// `⌊x⌋` for a positive real given by its log.
    pub fn floor_of_log(log_x: f64) -> Self {
        Self::from_log(log_x)
    }

    pub fn log_value(&self) -> f64 {
        match self {
            BigCount::Exact { log_value, .. } | BigCount::LogOnly { log_value } => *log_value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BigCount::Exact { .. })
    }

    pub fn exact_value(&self) -> Option<u64> {
        match self {
            BigCount::Exact { value, .. } => Some(*value),
            BigCount::LogOnly { .. } => None,
        }
    }

    pub fn require_exact(&self) -> Result<u64> {
        self.exact_value().ok_or(ExtRangeError::LogOnlyCount)
    }

    /// Value as a float; may be `inf` for log-only counts.
    pub fn as_f64(&self) -> f64 {
        match self {
            BigCount::Exact { value, .. } => *value as f64,
            BigCount::LogOnly { log_value } => log_value.exp(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self.exact_value(), other.exact_value()) {
            (Some(a), Some(b)) => match a.checked_mul(b) {
                Some(p) => BigCount::exact(p),
                None => BigCount::LogOnly { log_value: self.log_value() + other.log_value() },
            },
            _ => {
                if self.as_f64() == 0.0 || other.as_f64() == 0.0 {
                    return BigCount::exact(0);
                }
                BigCount::LogOnly { log_value: self.log_value() + other.log_value() }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self.exact_value(), other.exact_value()) {
            (Some(a), Some(b)) => match a.checked_add(b) {
                Some(s) => BigCount::exact(s),
                None => BigCount::LogOnly { log_value: log_add(self.log_value(), other.log_value()) },
            },
            _ => BigCount::LogOnly { log_value: log_add(self.log_value(), other.log_value()) },
        }
    }
}

impl std::fmt::Display for BigCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BigCount::Exact { value, .. } => write!(f, "{value}"),
            BigCount::LogOnly { log_value } => write!(f, "exp({log_value:.6e})"),
        }
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Floor that snaps values within a relative 1e-9 of an integer to it, so
/// `exp(ln 64)` floors to 64 rather than 63.
pub(crate) fn floor_near_integer(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.abs().max(1.0) {
        nearest as u64
    } else {
        x.floor() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_log_consistency() {
        for v in [1u64, 2, 8, 1000, (1 << 53) - 1] {
            let c = BigCount::exact(v);
            assert!(c.is_exact());
            assert!((c.log_value() - (v as f64).ln()).abs() <= 1e-12);
        }
    }

    #[test]
    fn above_2_pow_53_is_log_only() {
        assert!(!BigCount::exact(1 << 53).is_exact());
        assert!(!BigCount::exact(u64::MAX).is_exact());
        assert_eq!(BigCount::from_log(100.0).require_exact(), Err(ExtRangeError::LogOnlyCount));
    }

    #[test]
    fn from_log_recovers_integers() {
        assert_eq!(BigCount::from_log(64f64.ln()).exact_value(), Some(64));
        assert_eq!(BigCount::from_log(8.5f64.ln()).exact_value(), Some(8));
    }

    #[test]
    fn arithmetic() {
        let a = BigCount::exact(8);
        assert_eq!(a.mul(&BigCount::exact(3)).exact_value(), Some(24));
        assert_eq!(a.add(&BigCount::exact(16)).exact_value(), Some(24));
        let big = BigCount::from_log(200.0);
        let s = big.add(&a);
        assert!(!s.is_exact());
        assert!((s.log_value() - 200.0).abs() < 1e-12);
        let p = big.mul(&a);
        assert!((p.log_value() - (200.0 + 8f64.ln())).abs() < 1e-12);
        let over = BigCount::exact(1 << 40).mul(&BigCount::exact(1 << 20));
        assert!(!over.is_exact());
    }
}
