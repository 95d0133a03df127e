use super::CheckResult;
use crate::builder::Construction;
use std::f64::consts::LN_2;

/// Relative slack granted to every closed-form ladder comparison, covering
/// the rounding in the sampled maxima and the summed logs.
pub const EVAL_ALLOWANCE: f64 = 1e-9;

fn allowed(mut r: CheckResult) -> CheckResult {
    r.margin_log += EVAL_ALLOWANCE * r.lhs_log.abs().max(r.rhs_log.abs());
    r.verdict = if r.margin_log >= 0.0 { super::Verdict::Pass } else { super::Verdict::Fail };
    r
}

/// The growth inequalities between consecutive radii, in log form.
pub fn check_ladder(c: &Construction) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let m = c.head.m as f64;
    let lead = c.head.log_lead();
    for level in &c.levels {
        let k = level.k;
        let Some(next) = c.log_r(k + 1) else { continue };
        let lk = level.log_r;
        let prev = &c.levels[..k - 1];
        let nl: Vec<f64> = prev.iter().map(|l| l.nl().as_f64()).collect();
        let nlk = level.nl().as_f64();
        let sum_nl: f64 = nl.iter().sum();
        let sum_nl_log: f64 = prev.iter().zip(&nl).map(|(l, x)| x * l.log_r).sum();
        let sum_l: f64 = prev.iter().map(|l| l.l.as_f64()).sum();
        let lk_count = level.l.as_f64();
        let finite = [sum_nl, sum_nl_log, nlk, sum_l, lk_count].iter().all(|x| x.is_finite());
        let some = Some(k);

        out.push(allowed(CheckResult::compare(
            "ladder_growth",
            "log 4 + 2 log R_k <= log R_{k+1}",
            some,
            4f64.ln() + 2.0 * lk,
            next,
            1,
        )));
        if !finite {
            for name in ["ladder_lower_half_power", "ladder_lower_product", "ladder_upper_product"] {
                out.push(CheckResult::skipped(name, "closed-form ladder bound", some, "n_j l_j is log-only"));
            }
            continue;
        }
        let sum_2n = 2.0 * sum_nl - 2.0 * sum_l;
        let lower_half = lead + LN_2 * (sum_2n + nlk - 2.0 * lk_count + m - 1.0) + lk * (sum_nl / 2.0 + m);
        out.push(allowed(CheckResult::compare(
            "ladder_lower_half_power",
            "m* log λ + (Σ(2n_j-2)l_j + (n_k-2)l_k + m-1) log 2 + (Σn_jl_j/2 + m) log R_k <= log R_{k+1}",
            some,
            lower_half,
            next,
            1,
        )));
        let sum_n2: f64 = sum_nl - 2.0 * sum_l + nlk - 2.0 * lk_count;
        let lower_prod = lead + LN_2 * (m - 1.0 + sum_n2) + lk * (m + sum_nl) - sum_nl_log;
        out.push(allowed(CheckResult::compare(
            "ladder_lower_product",
            "m* log λ + (m-1+Σ_{j<=k}(n_j-2)l_j) log 2 + (m+Σ_{j<k}n_jl_j) log R_k - Σ_{j<k} n_jl_j log R_j <= log R_{k+1}",
            some,
            lower_prod,
            next,
            1,
        )));
        let upper = 1.5f64.ln() + lead + (m + sum_nl + nlk) * (LN_2 + lk) - sum_nl_log - nlk * lk;
        out.push(allowed(CheckResult::compare(
            "ladder_upper_product",
            "log R_{k+1} <= log 3/2 + m* log λ + (m+Σ_{j<=k}n_jl_j) log 2R_k - Σ_{j<=k} n_jl_j log R_j",
            some,
            next,
            upper,
            1,
        )));
        if k >= 2 {
            let before = m + nl[..k - 2].iter().sum::<f64>();
            out.push(allowed(CheckResult::compare(
                "index_vs_radius_ratio",
                "m + Σ_{j<=k-2} n_jl_j <= 2 log R_k / log R_{k-1}",
                some,
                before.ln(),
                (2.0 * lk / c.levels[k - 2].log_r).ln(),
                1,
            )));
            out.push(allowed(CheckResult::compare(
                "index_vs_log_radius",
                "m + Σ_{j<k} n_jl_j <= 2 log R_k / log 2",
                some,
                (m + sum_nl).ln(),
                (2.0 * lk / LN_2).ln(),
                1,
            )));
        }
    }
    out
}
