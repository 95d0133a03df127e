//! Verification suite: the ladder inequalities, the annulus mapping
//! inclusions, the minimum-modulus bound, the critical-value bound, and
//! order-of-growth estimates.
//!
//! Every comparison is done on natural logs of moduli. A check passes when
//! `margin_log = rhs_log - lhs_log >= 0`, with the truncation tail already
//! deducted against the check.

mod critical;
mod growth;
mod ladder;
mod maps;

pub use critical::{check_critical_h_bound, check_critical_values, critical_points, CriticalError};
pub use growth::{growth_order, liminf_criterion, GrowthError, GrowthRow};
pub use ladder::{check_ladder, EVAL_ALLOWANCE};
pub use maps::{
    check_annulus_maps, check_annulus_maps_with, check_b_invariance, check_b_invariance_with,
    check_julia_localization, check_min_modulus, localization_points, Identity, MapEval,
};

use crate::builder::{Construction, SequenceRule};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    SkippedLogOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The inequality being checked, in `lhs <= rhs` orientation.
    pub lemma_ref: String,
    pub level: Option<usize>,
    #[serde(with = "crate::hexfloat")]
    pub lhs_log: f64,
    #[serde(with = "crate::hexfloat")]
    pub rhs_log: f64,
    #[serde(with = "crate::hexfloat")]
    pub margin_log: f64,
    pub verdict: Verdict,
    pub samples_used: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl CheckResult {
    /// `lhs_log <= rhs_log`.
    pub fn compare(
        name: &str,
        lemma_ref: &str,
        level: Option<usize>,
        lhs_log: f64,
        rhs_log: f64,
        samples_used: usize,
    ) -> Self {
        let margin_log = rhs_log - lhs_log;
        let verdict = if margin_log >= 0.0 { Verdict::Pass } else { Verdict::Fail };
        Self {
            name: name.into(),
            lemma_ref: lemma_ref.into(),
            level,
            lhs_log,
            rhs_log,
            margin_log,
            verdict,
            samples_used,
            reason: None,
        }
    }

    pub fn skipped(name: &str, lemma_ref: &str, level: Option<usize>, reason: &str) -> Self {
        Self {
            name: name.into(),
            lemma_ref: lemma_ref.into(),
            level,
            lhs_log: f64::NAN,
            rhs_log: f64::NAN,
            margin_log: f64::NAN,
            verdict: Verdict::SkippedLogOnly,
            samples_used: 0,
            reason: Some(reason.into()),
        }
    }

    /// Forces a failure with an explanation (for example an evaluation error).
    pub fn failed(name: &str, lemma_ref: &str, level: Option<usize>, reason: String) -> Self {
        Self { reason: Some(reason), ..Self::compare(name, lemma_ref, level, f64::NAN, f64::NAN, 0) }
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Sample sizes and seed for [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Points per sampled circle.
    pub samples: usize,
    /// Random points per `B_k` band.
    pub band_points: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: crate::rng::DEFAULT_SEED, samples: 4096, band_points: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub samples: usize,
    pub band_points: usize,
    pub depth: usize,
    pub rule: SequenceRule,
    pub capped: bool,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn skips(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.verdict == Verdict::SkippedLogOnly)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<28} {:>3}  {:<52} {:>14}  verdict", "check", "k", "inequality", "margin(log)");
        for r in &self.results {
            let k = r.level.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::SkippedLogOnly => "skipped(log_only)",
            };
            let _ = writeln!(s, "{:<28} {:>3}  {:<52} {:>14.6e}  {verdict}", r.name, k, r.lemma_ref, r.margin_log);
        }
        s
    }
}

fn push_critical(
    out: &mut Vec<CheckResult>,
    name: &str,
    lemma: &str,
    k: usize,
    r: Result<CheckResult, CriticalError>,
) {
    match r {
        Ok(r) => out.push(r),
        Err(CriticalError::LogOnly) => out.push(CheckResult::skipped(name, lemma, Some(k), "n_k is log-only")),
        Err(CriticalError::InfeasibleDegree(_)) => {}
        Err(e) => out.push(CheckResult::failed(name, lemma, Some(k), e.to_string())),
    }
}

/// Runs every check that applies to `c`.
pub fn run_suite(c: &Construction, opts: &SuiteOptions) -> Report {
    let mut results = check_ladder(c);
    results.extend(check_annulus_maps(c, opts.samples));
    results.extend(check_b_invariance(c, opts.band_points, opts.seed));
    results.extend(check_julia_localization(c, opts.samples, opts.seed));
    results.extend(check_min_modulus(c, opts.samples));
    // The |H| >= 3/4 bound is only run on the first level: beyond it the
    // critical points sit where |1 - H| = (s_k / (m_{k-1} + n_k l_k))^2,
    // which exceeds 1/4 once m_{k-1} > 3 n_k l_k. The Fatou conclusion is
    // checked directly on every level.
    if c.depth() >= 1 {
        push_critical(&mut results, "critical_h_bound", critical::LEMMA, 1, check_critical_h_bound(c, 1));
    }
    for k in 1..=c.depth() {
        if c.log_r(k + 1).is_some() {
            push_critical(&mut results, "critical_values_in_b", critical::VALUE_LEMMA, k, check_critical_values(c, k));
        }
    }
    for level in &c.levels {
        results.push(crate::chebgeom::zero_radius_check(level));
    }
    Report {
        seed: opts.seed,
        samples: opts.samples,
        band_points: opts.band_points,
        depth: c.depth(),
        rule: c.rule,
        capped: c.capped,
        results,
    }
}

#[cfg(test)]
mod tests;
