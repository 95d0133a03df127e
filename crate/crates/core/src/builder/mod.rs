//! The radius ladder `R_k`, the factor parameters `n_k`, `l_k`, and
//! truncated evaluation of `f`.

mod circle;
mod eval;

pub use circle::{circle_max, circle_min, sample_count, CircleExtreme, Evaluator, MAX_CIRCLE_SAMPLES};
pub use eval::{fk_eval, fk_eval_ratio, Evaluation, FactorValue, DEFAULT_REL_TOL};

use crate::extrange::ExtRangeError;
use crate::seedpoly::{HeadParams, PolySpec, SeedError};
use crate::BigCount;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use thiserror::Error;

/// Largest `log R_k` the ladder may reach before the construction is capped.
pub const LOG_RADIUS_CAP: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("invalid parameters: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("|z| lies beyond 4 R_K")]
    OutOfRange,
    #[error("tail bound {bound:e} exceeds requested tolerance {tol:e}")]
    TolUnreachable { bound: f64, tol: f64 },
    #[error(transparent)]
    Range(#[from] ExtRangeError),
    #[error(transparent)]
    Seed(#[from] SeedError),
}

pub type Result<T> = std::result::Result<T, BuildError>;

/// How `n_k` is chosen from `R_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NRule {
    /// `n_k = c`
    Constant { c: u64 },
    /// `n_k = ⌊R_k^s⌋`
    Power { s: f64 },
    /// `n_k = ⌊R_k⌋^k`
    Tower,
    /// `n_k = ⌊(log R_k)^s⌋`
    LogPower { s: f64 },
}

/// How `l_k` is chosen from `R_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LRule {
    One,
    /// `l_k = ⌊log R_k / log 2⌋`
    MaxLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceRule {
    pub n: NRule,
    pub l: LRule,
}

impl Default for SequenceRule {
    fn default() -> Self {
        Self { n: NRule::Constant { c: 8 }, l: LRule::One }
    }
}

impl SequenceRule {
    /// Raw rule output for level `k` before clamping.
    pub fn raw_n(&self, log_r: f64, k: usize) -> BigCount {
        match self.n {
            NRule::Constant { c } => BigCount::exact(c),
            NRule::Power { s } => BigCount::floor_of_log(s * log_r),
            NRule::Tower => match BigCount::floor_of_log(log_r) {
                BigCount::Exact { value, .. } => match value.checked_pow(k as u32) {
                    Some(v) => BigCount::exact(v),
                    None => BigCount::LogOnly { log_value: k as f64 * (value as f64).ln() },
                },
                BigCount::LogOnly { log_value } => BigCount::LogOnly { log_value: k as f64 * log_value },
            },
            NRule::LogPower { s } => BigCount::floor_of_log(s * log_r.ln()),
        }
    }

    /// `n_k`, clamped to at least 8.
    pub fn n_for(&self, log_r: f64, k: usize) -> BigCount {
        let n = self.raw_n(log_r, k);
        if n.as_f64() < 8.0 {
            log::warn!("rule produced n_{k} = {n}; clamped to 8");
            return BigCount::exact(8);
        }
        n
    }

    pub fn l_for(&self, log_r: f64) -> BigCount {
        match self.l {
            LRule::One => BigCount::exact(1),
            LRule::MaxLog => {
                let x = log_r / LN_2;
                let l = BigCount::floor_of_log(x.ln());
                if l.as_f64() < 1.0 {
                    BigCount::exact(1)
                } else {
                    l
                }
            }
        }
    }
}

/// One rung of the ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub k: usize,
    #[serde(rename = "logR", with = "crate::hexfloat")]
    pub log_r: f64,
    pub n: BigCount,
    pub l: BigCount,
    /// `m + sum_{j<=k} n_j l_j`, the degree of `f_k`.
    pub m_k: BigCount,
    /// `log |C_k|` of the normal form, absent when it overflows.
    #[serde(rename = "logC", with = "crate::hexfloat::option")]
    pub log_c: Option<f64>,
    /// Sign of `C_k`; 0 when the parity of `sum_{j<k} l_j` is unknown.
    #[serde(rename = "signC")]
    pub sign_c: i8,
}

impl Level {
    pub fn exact(&self) -> bool {
        self.n.is_exact() && self.l.is_exact()
    }

    /// `n_k l_k`.
    pub fn nl(&self) -> BigCount {
        self.n.mul(&self.l)
    }

    /// `ε_k = 8 (l_k (2/3)^{n_k} + 1/R_k)`.
    pub fn epsilon(&self) -> f64 {
        epsilon_k(self)
    }
}

pub fn epsilon_k(level: &Level) -> f64 {
    let geometric = (level.l.log_value() + level.n.as_f64() * (2.0f64 / 3.0).ln()).exp();
    8.0 * (geometric + (-level.log_r).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub spec: PolySpec,
    pub head: HeadParams,
    pub rule: SequenceRule,
    pub levels: Vec<Level>,
    /// `log R_{K+1} = log M(f_K, 2R_K)`, absent when the ladder was capped.
    #[serde(rename = "logR_next", with = "crate::hexfloat::option")]
    pub log_r_next: Option<f64>,
    pub capped: bool,
    /// Base sample count used for every circle maximum.
    pub samples: usize,
}

/// Every violated explicit constraint, or an empty list.
pub fn validate_params(spec: &PolySpec, head: &HeadParams, rule: &SequenceRule, depth: usize) -> Vec<String> {
    let mut out = Vec::new();
    if !(head.lambda > 2.0) {
        out.push(format!("lambda = {} must exceed 2", head.lambda));
    }
    if head.iterations < 4 {
        out.push(format!("N = {} must be at least 4", head.iterations));
    }
    if head.m < 13 {
        out.push(format!("m = k0^N = {} must be at least 13", head.m));
    }
    if !(head.r >= 32.0) {
        out.push(format!("R = {} must be at least 32", head.r));
    }
    if depth < 1 {
        out.push("depth K must be at least 1".into());
    }
    match rule.n {
        NRule::Power { s } | NRule::LogPower { s } if !(s > 0.0 && s.is_finite()) => {
            out.push(format!("rule exponent s = {s} must be positive"));
        }
        _ => {}
    }
    if spec.roots().iter().any(|a| !(*a < head.r)) {
        out.push("seed roots must lie inside the leading radius".into());
    }
    out
}

/// Runs the construction for levels `1..=depth`. Each `R_{k+1}` is the
/// sampled maximum of `|f_k|` on `|z| = 2R_k`.
pub fn build(
    spec: &PolySpec,
    head: &HeadParams,
    rule: &SequenceRule,
    depth: usize,
    samples: usize,
) -> Result<Construction> {
    let problems = validate_params(spec, head, rule, depth);
    if !problems.is_empty() {
        return Err(BuildError::Validation(problems));
    }
    let mut c = Construction {
        spec: spec.clone(),
        head: head.clone(),
        rule: *rule,
        levels: Vec::with_capacity(depth),
        log_r_next: None,
        capped: false,
        samples,
    };
    let mut log_r = (2.0 * head.r).ln();
    let mut m_prev = BigCount::exact(head.m);
    for k in 1..=depth {
        let n = rule.n_for(log_r, k);
        let l = rule.l_for(log_r);
        if l.log_value() > (log_r / LN_2).ln() + 1e-9 {
            return Err(BuildError::Validation(vec![format!("l_{k} = {l} exceeds log R_k / log 2")]));
        }
        let m_k = m_prev.add(&n.mul(&l));
        let (log_c, sign_c) = normal_form_constant(&c, &n, &l, log_r);
        c.levels.push(Level { k, log_r, n, l, m_k, log_c, sign_c });
        m_prev = m_k;

        let hint = c.exact_degree(k);
        let next = circle_max(&|u: &_| c.eval_anchored(k, u, k), LN_2, &hint, samples);
        match next {
            Ok(ext) if ext.log.is_finite() && ext.log <= LOG_RADIUS_CAP => {
                log::debug!("level {k}: log R = {log_r}, next log R = {}", ext.log);
                log_r = ext.log;
                c.log_r_next = Some(log_r);
            }
            Ok(_) | Err(ExtRangeError::RangeExhausted) => {
                log::info!("ladder capped at level {k}");
                c.log_r_next = None;
                c.capped = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(c)
}

/// `log |C_k|` and its sign for the level about to be appended.
fn normal_form_constant(c: &Construction, n: &BigCount, l: &BigCount, log_r: f64) -> (Option<f64>, i8) {
    let mut log_c = c.head.log_lead() + n.as_f64() * l.as_f64() * log_r;
    let mut l_sum = 0u64;
    let mut parity_known = true;
    for lv in &c.levels {
        log_c -= lv.nl().as_f64() * lv.log_r + lv.l.as_f64() * LN_2;
        match lv.l.exact_value() {
            Some(v) => l_sum = l_sum.wrapping_add(v),
            None => parity_known = false,
        }
    }
    log_c -= l.as_f64() * LN_2;
    let sign = if !parity_known {
        0
    } else if l_sum % 2 == 0 {
        1
    } else {
        -1
    };
    (log_c.is_finite().then_some(log_c), sign)
}

impl Construction {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `k` (1-based).
    pub fn level(&self, k: usize) -> Option<&Level> {
        k.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    /// `log R_k` for `1 <= k <= K+1`.
    pub fn log_r(&self, k: usize) -> Option<f64> {
        match self.level(k) {
            Some(l) => Some(l.log_r),
            None if k == self.depth() + 1 => self.log_r_next,
            None => None,
        }
    }

    /// `m_{k-1}`, with `m_0 = m`.
    pub fn m_before(&self, k: usize) -> BigCount {
        match self.level(k.saturating_sub(1)) {
            Some(l) if k >= 2 => l.m_k,
            _ => BigCount::exact(self.head.m),
        }
    }

    /// Degree of `f_k` counting only the levels with exact parameters; the
    /// log-only factors have angle-independent modulus bounds.
    pub fn exact_degree(&self, k: usize) -> BigCount {
        self.levels[..k.min(self.depth())]
            .iter()
            .filter(|l| l.exact())
            .fold(BigCount::exact(self.head.m), |acc, l| acc.add(&l.nl()))
    }

    /// `sum_k l_k (2/3)^{n_k}` over built levels.
    pub fn tail_sum(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| (l.l.log_value() + l.n.as_f64() * (2.0f64 / 3.0).ln()).exp())
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("construction serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
