use super::maps::{band, BandScan, MapEval};
use super::CheckResult;
use crate::builder::Construction;
use crate::chebgeom::h_eval;
use crate::{Complex64, LogComplex};
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

pub(super) const LEMMA: &str = "3/4 <= |H_{n_k}(z/R_k)| at critical points of f_k in A_k off the zeros of H";
pub(super) const VALUE_LEMMA: &str = "f(critical points in A_k off the zeros of H) ⊂ B_k";

/// Degree limit for the critical-point search.
const MAX_DEGREE: u64 = 2000;
const NEWTON_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriticalError {
    #[error("degree m_k = {0} is above the search limit")]
    InfeasibleDegree(u64),
    #[error("n_k is log-only")]
    LogOnly,
    #[error("level {0} is not in the ledger")]
    NoLevel(usize),
    #[error("Newton iteration failed to locate any critical point")]
    ConvergenceFailure,
}

/// `z f_k'(z) / f_k(z)` at `z = R_k u`, evaluated as a sum of per-factor
/// logarithmic derivatives so that no factor overflows.
fn log_derivative(c: &Construction, k: usize, u: Complex64) -> Option<Complex64> {
    let level = c.level(k)?;
    let z = LogComplex::from_cartesian(u).scale_log(level.log_r).ok()?;
    let one = Complex64::new(1.0, 0.0);
    // head: z F_0'/F_0 = prod_i (w_i p'(w_i) / p(w_i)), w_0 = z
    let mut w = z;
    let mut head = one;
    for _ in 0..c.head.iterations {
        let w2 = w.mul(&w).ok()?;
        let mut s = Complex64::new(0.0, 0.0);
        for a in c.spec.roots() {
            // 2w^2/(w^2 - a^2) = 2 / (1 - a^2/w^2)
            let t = LogComplex::from_real(a * a).div(&w2).ok()?.to_cartesian();
            s += 2.0 / (one - t);
        }
        head *= s;
        w = crate::seedpoly::p_eval(&c.spec, c.head.lambda, &w).ok()?;
        if w.is_zero() {
            return None;
        }
    }
    let mut g = head;
    for lv in &c.levels[..k] {
        let n = lv.n.exact_value()?;
        let l = lv.l.exact_value()? as f64;
        // n l (-w/2)/(1 - w/2) with w = (z/R_j)^n
        // the own-level ratio is u itself; going through z would cost the
        // precision of log R_k
        let ratio = if lv.k == k { LogComplex::from_cartesian(u) } else { z.scale_log(-lv.log_r).ok()? };
        let wj = ratio.pow_exact(n).ok()?;
        let term = if wj.log_abs() > 0.0 {
            let inv = LogComplex::from_real(2.0).div(&wj).ok()?.to_cartesian();
            one / (one - inv)
        } else {
            let h = wj.to_cartesian() * 0.5;
            -h / (one - h)
        };
        g += term * (n as f64 * l);
    }
    Some(g)
}

/// Critical points of `f_k` in `A_k` as `u = z/R_k`, found by Newton's method
/// on the logarithmic derivative from seeds spread over the annulus.
pub fn critical_points(c: &Construction, k: usize) -> Result<Vec<Complex64>, CriticalError> {
    let level = c.level(k).ok_or(CriticalError::NoLevel(k))?;
    let n = level.n.exact_value().ok_or(CriticalError::LogOnly)?;
    level.l.exact_value().ok_or(CriticalError::LogOnly)?;
    let m_k = level.m_k.exact_value().ok_or(CriticalError::LogOnly)?;
    if m_k > MAX_DEGREE {
        return Err(CriticalError::InfeasibleDegree(m_k));
    }
    let scale = m_k as f64;
    let radii = [0.3, 0.6, 0.9, 1.0, 1.05, 1.1, 1.3, 2.0, 3.5];
    let angles = 4 * n as usize;
    let seeds: Vec<Complex64> = radii
        .iter()
        .flat_map(|&r| (0..angles).map(move |j| Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / angles as f64)))
        .collect();
    let found: Vec<Option<Complex64>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut u = seed;
            for _ in 0..NEWTON_STEPS {
                let g = log_derivative(c, k, u)?;
                if g.norm() <= 1e-10 * scale {
                    return (0.25..=4.0).contains(&u.norm()).then_some(u);
                }
                let h = 1e-7 * u.norm();
                let dg = (log_derivative(c, k, u + h)? - log_derivative(c, k, u - h)?) / (2.0 * h);
                let step = g / dg;
                if !step.is_finite() {
                    return None;
                }
                // damp steps that would leave the annulus region entirely
                let step = if step.norm() > 0.25 * u.norm() { step * (0.25 * u.norm() / step.norm()) } else { step };
                u -= step;
            }
            None
        })
        .collect();
    let mut roots: Vec<Complex64> = Vec::new();
    for u in found.into_iter().flatten() {
        if !roots.iter().any(|r| (r - u).norm() <= 1e-8 * u.norm()) {
            roots.push(u);
        }
    }
    roots.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap().then(a.norm().partial_cmp(&b.norm()).unwrap()));
    Ok(roots)
}

/// Located critical points that are not zeros of `H_{n_k}`.
fn regular_critical_points(c: &Construction, k: usize) -> Result<Vec<Complex64>, CriticalError> {
    let level = c.level(k).ok_or(CriticalError::NoLevel(k))?;
    let roots = critical_points(c, k)?;
    let kept: Vec<Complex64> = roots
        .into_iter()
        .filter(|&u| {
            h_eval(&level.n, &LogComplex::from_cartesian(u)).map(|v| v.log_abs_hi()).unwrap_or(f64::NEG_INFINITY)
                > (1e-6f64).ln()
        })
        .collect();
    if kept.is_empty() {
        return Err(CriticalError::ConvergenceFailure);
    }
    Ok(kept)
}

/// The images of the located critical points lie in `B_k`, so the critical
/// points are in the Fatou set.
pub fn check_critical_values(c: &Construction, k: usize) -> Result<CheckResult, CriticalError> {
    let level = c.level(k).ok_or(CriticalError::NoLevel(k))?;
    let target = band(c, k).ok_or(CriticalError::NoLevel(k))?;
    let mut scan = BandScan::new();
    for u in regular_critical_points(c, k)? {
        let z = LogComplex::from_cartesian(u).scale_log(level.log_r).map_err(|_| CriticalError::ConvergenceFailure)?;
        scan.push(&c.image_log(&z), target);
    }
    Ok(scan.result("critical_values_in_b", VALUE_LEMMA, k))
}

/// Checks the lower bound on `|H_{n_k}|` over the located critical points,
/// excluding zeros of `H_{n_k}` (where `f_k` vanishes).
pub fn check_critical_h_bound(c: &Construction, k: usize) -> Result<CheckResult, CriticalError> {
    let level = c.level(k).ok_or(CriticalError::NoLevel(k))?;
    let logs: Vec<f64> = regular_critical_points(c, k)?
        .iter()
        .map(|&u| h_eval(&level.n, &LogComplex::from_cartesian(u)).map(|v| v.log_abs_hi()).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let worst = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut r = CheckResult::compare("critical_h_bound", LEMMA, Some(k), 0.75f64.ln(), worst, logs.len());
    let bound = level.nl().exact_value().unwrap_or(u64::MAX) as usize;
    if logs.len() > bound {
        r = CheckResult::failed(
            "critical_h_bound",
            LEMMA,
            Some(k),
            format!("{} critical points located, more than n_k l_k = {bound}", logs.len()),
        );
    }
    Ok(r)
}
