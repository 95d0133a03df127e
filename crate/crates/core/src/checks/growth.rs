use crate::builder::Construction;
use crate::BigCount;
use serde::Serialize;
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("growth estimates need at least 3 levels, ledger has {0}")]
    ShallowLedger(usize),
}

/// Order-of-growth surrogates read off the ladder; no evaluation of `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub k: usize,
    pub log_r: f64,
    pub n: BigCount,
    /// `log log M(f, 2R_k) / log 2R_k`, using `M(f_k, 2R_k) = R_{k+1}`.
    pub rho_hat: Option<f64>,
    /// `log(n_k log 2) / log 2R_k`, from `min |f| >= 2^{n_k}` on `|z| = 2R_k`.
    pub rho_lower: f64,
    /// `log log M(f, 2R_k) / log log 2R_k`.
    pub liminf_ratio: Option<f64>,
}

pub fn growth_order(c: &Construction) -> Result<Vec<GrowthRow>, GrowthError> {
    if c.depth() < 3 {
        return Err(GrowthError::ShallowLedger(c.depth()));
    }
    Ok(c.levels
        .iter()
        .map(|level| {
            let log_2r = LN_2 + level.log_r;
            let next = c.log_r(level.k + 1);
            GrowthRow {
                k: level.k,
                log_r: level.log_r,
                n: level.n,
                rho_hat: next.map(|r| r.ln() / log_2r),
                rho_lower: (level.n.log_value() + LN_2.ln()) / log_2r,
                liminf_ratio: next.map(|r| r.ln() / log_2r.ln()),
            }
        })
        .collect())
}

/// `log log M(f, 2R_k) / log log 2R_k` for every level with a known successor.
pub fn liminf_criterion(c: &Construction) -> Result<Vec<f64>, GrowthError> {
    Ok(growth_order(c)?.into_iter().filter_map(|r| r.liminf_ratio).collect())
}
