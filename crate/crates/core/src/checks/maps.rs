use super::CheckResult;
use crate::builder::{circle_min, Construction, Level};
use crate::rng;
use crate::LogComplex;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

/// A map whose image moduli can be bounded, with any truncation slack
/// already applied.
pub trait MapEval: Sync {
    /// `(lo, hi)` bounds on `log |g(z)|`.
    fn image_log(&self, z: &LogComplex) -> Result<(f64, f64), String>;
}

impl MapEval for Construction {
    fn image_log(&self, z: &LogComplex) -> Result<(f64, f64), String> {
        let e = self.eval(z).map_err(|e| e.to_string())?;
        let t = e.tail_log();
        Ok((e.value.log_abs_lo() - t, e.value.log_abs_hi() + t))
    }
}

/// `z ↦ z`, for exercising the checks against a map that must fail them.
pub struct Identity;

impl MapEval for Identity {
    fn image_log(&self, z: &LogComplex) -> Result<(f64, f64), String> {
        Ok((z.log_abs(), z.log_abs()))
    }
}

const LN4: f64 = 2.0 * LN_2;

/// Log bounds of the open band `B_k = (4R_k, R_{k+1}/4)`.
pub(super) fn band(c: &Construction, k: usize) -> Option<(f64, f64)> {
    let lo = c.log_r(k)? + LN4;
    let hi = c.log_r(k + 1).map_or(f64::INFINITY, |r| r - LN4);
    Some((lo, hi))
}

/// Worst-case comparison of sampled image bounds against a target band.
pub(super) struct BandScan {
    worst: f64,
    lhs: f64,
    rhs: f64,
    count: usize,
    error: Option<String>,
}

impl BandScan {
    pub(super) fn new() -> Self {
        Self { worst: f64::INFINITY, lhs: f64::NAN, rhs: f64::NAN, count: 0, error: None }
    }

    pub(super) fn push(&mut self, image: &Result<(f64, f64), String>, target: (f64, f64)) {
        self.count += 1;
        match image {
            Err(e) => {
                self.error.get_or_insert_with(|| e.clone());
            }
            Ok((lo, hi)) => {
                let below = lo - target.0;
                let above = target.1 - hi;
                if below.min(above) < self.worst {
                    self.worst = below.min(above);
                    (self.lhs, self.rhs) = if below <= above { (target.0, *lo) } else { (*hi, target.1) };
                }
            }
        }
    }

    pub(super) fn result(self, name: &str, lemma: &str, k: usize) -> CheckResult {
        if let Some(e) = self.error {
            return CheckResult::failed(name, lemma, Some(k), e);
        }
        CheckResult::compare(name, lemma, Some(k), self.lhs, self.rhs, self.count)
    }
}

fn images(map: &impl MapEval, points: &[LogComplex]) -> Vec<Result<(f64, f64), String>> {
    points.par_iter().map(|z| map.image_log(z)).collect()
}

fn circle(log_r: f64, samples: usize) -> Vec<LogComplex> {
    (0..samples)
        .map(|i| LogComplex::new(log_r, -PI + 2.0 * PI * i as f64 / samples as f64).expect("finite radius"))
        .collect()
}

fn log_only_skip(name: &str, lemma: &str, k: usize) -> CheckResult {
    CheckResult::skipped(name, lemma, Some(k), "n_k is log-only; argument-dependent sampling skipped")
}

/// Images of the circles `3/2 R_k`, `5/2 R_k`, `R_k/4`, `4R_k` against their
/// target bands, plus the covering witness for `A_{k+1}`.
pub fn check_annulus_maps(c: &Construction, samples: usize) -> Vec<CheckResult> {
    check_annulus_maps_with(c, c, samples)
}

pub fn check_annulus_maps_with(c: &Construction, map: &impl MapEval, samples: usize) -> Vec<CheckResult> {
    let circles: [(&str, &str, f64, usize); 4] = [
        ("inner_v_circle", "f(|z| = 3/2 R_k) ⊂ [4R_k, R_{k+1}/4]", 1.5f64.ln(), 0),
        ("outer_v_circle", "f(|z| = 5/2 R_k) ⊂ [4R_{k+1}, R_{k+2}/4]", 2.5f64.ln(), 1),
        ("inner_a_circle", "f(|z| = R_k/4) ⊂ [4R_k, R_{k+1}/4]", -LN4, 0),
        ("outer_a_circle", "f(|z| = 4R_k) ⊂ [4R_{k+1}, R_{k+2}/4]", LN4, 1),
    ];
    let witness_lemma = "max f(|z|=3/2 R_k) <= R_{k+1}/4 and 4R_{k+1} <= min f(|z|=5/2 R_k)";
    let mut out = Vec::new();
    for level in &c.levels {
        let k = level.k;
        if c.log_r(k + 1).is_none() {
            continue;
        }
        if !level.exact() {
            for (name, lemma, _, _) in circles {
                out.push(log_only_skip(name, lemma, k));
            }
            out.push(log_only_skip("v_covers_next_a", witness_lemma, k));
            continue;
        }
        let mut extremes = Vec::new();
        for (name, lemma, offset, shift) in circles {
            let target = band(c, k + shift).expect("radius known");
            let pts = circle(level.log_r + offset, samples);
            let imgs = images(map, &pts);
            let mut scan = BandScan::new();
            for im in &imgs {
                scan.push(im, target);
            }
            let mut r = scan.result(name, lemma, k);
            if target.1.is_infinite() {
                r = r.with_reason("partial: R_{k+2} not built, upper band edge unchecked");
            }
            out.push(r);
            let hi = imgs.iter().filter_map(|r| r.as_ref().ok()).map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
            let lo = imgs.iter().filter_map(|r| r.as_ref().ok()).map(|x| x.0).fold(f64::INFINITY, f64::min);
            extremes.push((lo, hi));
        }
        let next = c.log_r(k + 1).expect("checked above");
        let (below, above) = (next - LN4 - extremes[0].1, extremes[1].0 - (next + LN4));
        let (lhs, rhs) = if below <= above { (extremes[0].1, next - LN4) } else { (next + LN4, extremes[1].0) };
        out.push(CheckResult::compare("v_covers_next_a", witness_lemma, Some(k), lhs, rhs, 2 * samples));
    }
    out
}

/// `f(B_k) ⊂ B_{k+1}` on points uniform in log-radius and angle, the first
/// two placed on the band edges.
pub fn check_b_invariance(c: &Construction, points: usize, seed: u64) -> Vec<CheckResult> {
    check_b_invariance_with(c, c, points, seed)
}

pub fn check_b_invariance_with(c: &Construction, map: &impl MapEval, points: usize, seed: u64) -> Vec<CheckResult> {
    const LEMMA: &str = "f(B_k) ⊂ B_{k+1}";
    let mut out = Vec::new();
    for level in &c.levels {
        let k = level.k;
        let (Some(src), Some(next_level)) = (band(c, k), c.level(k + 1)) else { continue };
        if c.log_r(k + 2).is_none() {
            continue;
        }
        if !level.exact() || !next_level.exact() {
            out.push(log_only_skip("b_invariance", LEMMA, k));
            continue;
        }
        let mut g = rng::stream(seed, 0x0B00 + k as u64);
        let pts: Vec<LogComplex> = (0..points)
            .map(|i| {
                let log_r = match i {
                    0 => src.0,
                    1 => src.1,
                    _ => rng::uniform(&mut g, src.0, src.1),
                };
                LogComplex::new(log_r, rng::angle(&mut g)).expect("finite")
            })
            .collect();
        let target = band(c, k + 1).expect("radius known");
        let mut scan = BandScan::new();
        for im in &images(map, &pts) {
            scan.push(im, target);
        }
        out.push(scan.result("b_invariance", LEMMA, k));
    }
    out
}

/// Points of `A_k` outside `V_k` and outside the petal annulus
/// `[R_k(1 - 1/n_k), R_k(1 + 2/n_k)]` must map into `B_k ∪ B_{k+1}`; the part
/// inside the petal annulus' inner edge must land in `B_k`.
pub fn check_julia_localization(c: &Construction, samples: usize, seed: u64) -> Vec<CheckResult> {
    const LEMMA: &str = "f(A_k \\ (V_k ∪ petal annulus)) ⊂ B_k ∪ B_{k+1}";
    const INNER: &str = "f(R_k/4 <= |z| < R_k(1-1/n_k)) ⊂ B_k";
    let mut out = Vec::new();
    for level in &c.levels {
        let k = level.k;
        if c.log_r(k + 1).is_none() {
            continue;
        }
        if !level.exact() {
            out.push(log_only_skip("julia_localization", LEMMA, k));
            continue;
        }
        let l = level.log_r;
        let petal_lo = (1.0 - 1.0 / level.n.as_f64()).ln();
        let pts = localization_points(level, samples, seed);
        let bk = band(c, k).expect("radius known");
        let bk1 = band(c, k + 1).expect("radius known");
        let imgs = images(c, &pts);
        let mut all = BandScan::new();
        let mut inner = BandScan::new();
        for (z, im) in pts.iter().zip(&imgs) {
            // score against whichever band fits better
            let fit = |b: (f64, f64)| im.as_ref().map(|(lo, hi)| (lo - b.0).min(b.1 - hi)).unwrap_or(f64::NEG_INFINITY);
            all.push(im, if fit(bk) >= fit(bk1) { bk } else { bk1 });
            if z.log_abs() - l < petal_lo {
                inner.push(im, bk);
            }
        }
        out.push(all.result("julia_localization", LEMMA, k));
        out.push(inner.result("inner_region_to_b", INNER, k));
    }
    out
}

/// Uniform points (in log-radius and angle) of `A_k` minus `V_k` and minus
/// the petal annulus `[R_k(1 - 1/n_k), R_k(1 + 2/n_k)]`.
pub fn localization_points(level: &Level, samples: usize, seed: u64) -> Vec<LogComplex> {
    let n = level.n.as_f64();
    let excluded = [((1.0 - 1.0 / n).ln(), (2.0 / n).ln_1p()), (1.5f64.ln(), 2.5f64.ln())];
    let mut g = rng::stream(seed, 0x0A00 + level.k as u64);
    let mut pts = Vec::with_capacity(samples);
    while pts.len() < samples {
        let t = rng::uniform(&mut g, -LN4, LN4);
        let theta = rng::angle(&mut g);
        if excluded.iter().any(|&(a, b)| t >= a && t <= b) {
            continue;
        }
        pts.push(LogComplex::new(level.log_r + t, theta).expect("finite"));
    }
    pts
}

/// `min |f| >= 2^{n_k}` on `|z| = 2R_k`. Only meaningful for `l_k = 1`;
/// other levels produce no result.
pub fn check_min_modulus(c: &Construction, samples: usize) -> Vec<CheckResult> {
    const LEMMA: &str = "n_k log 2 <= log min_{|z|=2R_k} |f|";
    let mut out = Vec::new();
    for level in &c.levels {
        if level.l.exact_value() != Some(1) {
            continue;
        }
        let k = level.k;
        if !level.n.is_exact() {
            out.push(log_only_skip("min_modulus", LEMMA, k));
            continue;
        }
        let f = |u: &LogComplex| c.eval_anchored(k, u, k);
        let tail = -(-8.0 * (-level.log_r).exp()).ln_1p();
        match circle_min(&f, LN_2, &c.exact_degree(k), samples) {
            Ok(ext) => out.push(CheckResult::compare(
                "min_modulus",
                LEMMA,
                Some(k),
                level.n.as_f64() * LN_2,
                ext.log - tail,
                ext.samples,
            )),
            Err(e) => out.push(CheckResult::failed("min_modulus", LEMMA, Some(k), e.to_string())),
        }
    }
    out
}
