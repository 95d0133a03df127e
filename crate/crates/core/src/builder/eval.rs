use super::{BuildError, Construction, Level, Result};
use crate::extrange::ExtRangeError;
use crate::real::Real;
use crate::seedpoly::f0_eval;
use crate::{LogComplex, Value};
use std::f64::consts::LN_2;

/// Relative tolerance accepted by [`Construction::eval`].
pub const DEFAULT_REL_TOL: f64 = 0.5;

/// A factor value plus the relative deviation incurred when `1 - w/2` was
/// replaced by 1 for a negligible `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorValue {
    pub value: Value,
    pub deviation: f64,
}

/// `F_k(z) = (1 - (z/R_k)^{n_k} / 2)^{l_k}`.
pub fn fk_eval(level: &Level, z: &LogComplex) -> std::result::Result<FactorValue, ExtRangeError> {
    if z.is_zero() {
        return fk_eval_ratio(level, z);
    }
    fk_eval_ratio(level, &z.scale_log(-level.log_r)?)
}

/// `F_k` given the ratio `u = z/R_k` directly, which keeps `|u|` exact when
/// `log R_k` is too large to resolve factors like 2 in `log |z|`.
pub fn fk_eval_ratio(level: &Level, u: &LogComplex) -> std::result::Result<FactorValue, ExtRangeError> {
    let one = FactorValue { value: Value::one(), deviation: 0.0 };
    if u.is_zero() {
        return Ok(one);
    }
    match u.pow(&level.n)? {
        Value::Point(w) => {
            if w.is_zero() {
                return Ok(one);
            }
            if w.log_abs() < -f64::DOMINANCE {
                let deviation = (level.l.log_value() + w.log_abs() - LN_2).exp();
                return Ok(FactorValue { deviation, ..one });
            }
            let base = LogComplex::one().sub(&w.scale_log(-LN_2)?);
            let value = if base.is_zero() { Value::Point(base) } else { base.pow(&level.l)? };
            Ok(FactorValue { value, deviation: 0.0 })
        }
        Value::Modulus(w) => {
            let b = w.one_minus_half()?;
            Ok(FactorValue { value: Value::Modulus(b.pow(level.l.as_f64())?), deviation: 0.0 })
        }
    }
}

/// `f(z)` truncated after the first level whose `4R_k` covers `|z|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Value,
    /// Relative bound on the neglected tail, `8/R_k` plus dropped deviations.
    pub tail_err: f64,
    pub level: usize,
}

impl Evaluation {
    /// `-log(1 - tail_err)`: the log-modulus slack to deduct from margins.
    pub fn tail_log(&self) -> f64 {
        -(-self.tail_err).ln_1p()
    }
}

impl Construction {
    /// `f_k = F_0 * prod_{j<=k} F_j`.
    pub fn eval_truncated(&self, k: usize, z: &LogComplex) -> std::result::Result<Value, ExtRangeError> {
        self.product(k, z, |level| if z.is_zero() { Ok(*z) } else { z.scale_log(-level.log_r) })
            .map(|(v, _)| v)
    }

    /// `f_k(R_a u)`: the point is given relative to the radius of level `a`.
    /// Ratios to the other radii are formed from differences of the stored
    /// logs, so `|u|` enters every factor without rounding against `log R_a`.
    pub fn eval_anchored(&self, anchor: usize, u: &LogComplex, k: usize) -> std::result::Result<Value, ExtRangeError> {
        let log_anchor = self.levels[anchor - 1].log_r;
        let z = u.scale_log(log_anchor)?;
        self.product(k, &z, |level| {
            if level.k == anchor || u.is_zero() {
                Ok(*u)
            } else {
                u.scale_log(log_anchor - level.log_r)
            }
        })
        .map(|(v, _)| v)
    }

    fn product(
        &self,
        k: usize,
        z: &LogComplex,
        ratio: impl Fn(&Level) -> std::result::Result<LogComplex, ExtRangeError>,
    ) -> std::result::Result<(Value, f64), ExtRangeError> {
        let mut acc = Value::Point(f0_eval(&self.head, &self.spec, z)?);
        let mut dev = 0.0;
        for level in &self.levels[..k.min(self.depth())] {
            let f = fk_eval_ratio(level, &ratio(level)?)?;
            acc = acc.mul(&f.value)?;
            dev += f.deviation;
        }
        Ok((acc, dev))
    }

    /// Smallest `k` with `|z| <= 4R_k`.
    pub fn covering_level(&self, log_abs: f64) -> Option<usize> {
        let four = 2.0 * LN_2;
        self.levels.iter().find(|l| log_abs <= l.log_r + four).map(|l| l.k)
    }

    /// `f(z)` with the tail bound `8/R_k` for the covering level `k`.
    pub fn f_eval(&self, z: &LogComplex, rel_tol: f64) -> Result<Evaluation> {
        let k = self.covering_level(z.log_abs()).ok_or(BuildError::OutOfRange)?;
        let bound = 8.0 * (-self.levels[k - 1].log_r).exp();
        if bound > rel_tol {
            return Err(BuildError::TolUnreachable { bound, tol: rel_tol });
        }
        let (value, dev) = self.product(k, z, |level| if z.is_zero() { Ok(*z) } else { z.scale_log(-level.log_r) })?;
        Ok(Evaluation { value, tail_err: bound + dev, level: k })
    }

    /// [`Self::f_eval`] with [`DEFAULT_REL_TOL`].
    pub fn eval(&self, z: &LogComplex) -> Result<Evaluation> {
        self.f_eval(z, DEFAULT_REL_TOL)
    }
}
