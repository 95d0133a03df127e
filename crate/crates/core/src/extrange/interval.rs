use super::{ExtRangeError, Result};
use crate::real::Real;

/// Bounds `[exp(lo_log), exp(hi_log)]` on a modulus.
///
/// `lo_log = -inf` is the "unknown small" sentinel: the value may be zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModInterval<T> {
    lo_log: T,
    hi_log: T,
}

impl<T: Real> ModInterval<T> {
    /// Interval padded outward by one ulp on each side.
    pub fn new(lo_log: T, hi_log: T) -> Result<Self> {
        if !(lo_log <= hi_log) || !hi_log.is_finite() || lo_log == T::infinity() {
            return Err(ExtRangeError::RangeExhausted);
        }
        Ok(Self { lo_log: pad_down(lo_log), hi_log: pad_up(hi_log) })
    }

    /// Degenerate interval around a single log-modulus.
    pub fn point(log: T) -> Result<Self> {
        Self::new(log, log)
    }

    pub fn lo_log(&self) -> T {
        self.lo_log
    }

    pub fn hi_log(&self) -> T {
        self.hi_log
    }

    pub fn lower_known(&self) -> bool {
        self.lo_log.is_finite()
    }

    pub fn contains_log(&self, log: T) -> bool {
        self.lo_log <= log && log <= self.hi_log
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.lo_log + other.lo_log, self.hi_log + other.hi_log)
    }

    /// Bounds on `|w|^n` for a positive real exponent `n`.
    pub fn pow(&self, n: T) -> Result<Self> {
        let lo = if self.lo_log.is_finite() { self.lo_log * n } else { self.lo_log };
        Self::new(lo, self.hi_log * n)
    }

    /// Bounds on `|1 - w/2|` given bounds on `|w|`, by the triangle inequality
    /// `| |w|/2 - 1 | <= |1 - w/2| <= 1 + |w|/2`. The lower bound becomes the
    /// `-inf` sentinel when `|w|/2 = 1` is inside the interval.
    pub fn one_minus_half(&self) -> Result<Self> {
        let ln2 = T::LN_2();
        let lo_half = self.lo_log - ln2;
        let hi_half = self.hi_log - ln2;
        let hi = log_one_plus_exp(hi_half);
        let lo = if lo_half > T::zero() {
            // ln(e^x - 1) = x + ln(1 - e^-x)
            lo_half + (-(-lo_half).exp()).ln_1p()
        } else if hi_half < T::zero() {
            (-hi_half.exp()).ln_1p()
        } else {
            T::neg_infinity()
        };
        Self::new(lo, hi)
    }

    /// Like [`Self::one_minus_half`] but rejects an indeterminate lower bound.
    pub fn try_one_minus_half(&self) -> Result<Self> {
        let r = self.one_minus_half()?;
        if r.lower_known() {
            Ok(r)
        } else {
            Err(ExtRangeError::IndeterminateSign)
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self { lo_log: self.lo_log.min(other.lo_log), hi_log: self.hi_log.max(other.hi_log) }
    }
}

/// ln(1 + e^x) without overflow.
pub(crate) fn log_one_plus_exp<T: Real>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn pad_up<T: Real>(x: T) -> T {
    if !x.is_finite() {
        return x;
    }
    let step = (x.abs() * T::epsilon()).max(T::min_positive_value());
    x + step
}

fn pad_down<T: Real>(x: T) -> T {
    if !x.is_finite() {
        return x;
    }
    let step = (x.abs() * T::epsilon()).max(T::min_positive_value());
    x - step
}
