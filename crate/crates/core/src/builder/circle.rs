use crate::extrange::ExtRangeError;
use crate::{BigCount, LogComplex, Value};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::f64::consts::PI;

/// Upper limit on degree-driven circle sampling.
pub const MAX_CIRCLE_SAMPLES: usize = 10_000_000;
const CANDIDATES: usize = 8;
const CHUNK: usize = 1 << 14;
const ANGLE_TOL: f64 = 1e-12;

/// Anything that maps a point to a (possibly interval) value.
pub trait Evaluator: Sync {
    fn eval_value(&self, z: &LogComplex) -> Result<Value, ExtRangeError>;
}

impl<F> Evaluator for F
where
    F: Fn(&LogComplex) -> Result<Value, ExtRangeError> + Sync,
{
    fn eval_value(&self, z: &LogComplex) -> Result<Value, ExtRangeError> {
        self(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleExtreme {
    pub log: f64,
    pub angle: f64,
    pub samples: usize,
}

/// `max(samples, min(8 * degree, MAX_CIRCLE_SAMPLES))`.
pub fn sample_count(samples: usize, degree_hint: &BigCount) -> usize {
    let by_degree = (8.0 * degree_hint.as_f64()).min(MAX_CIRCLE_SAMPLES as f64) as usize;
    samples.max(by_degree).max(1)
}

/// Sampled maximum of `log|g|` on `|z| = exp(log_radius)`, refined by
/// golden-section search around the best samples. Interval values count by
/// their upper bound.
pub fn circle_max(
    g: &impl Evaluator,
    log_radius: f64,
    degree_hint: &BigCount,
    samples: usize,
) -> Result<CircleExtreme, ExtRangeError> {
    extreme(g, log_radius, sample_count(samples, degree_hint), |v| v.log_abs_hi())
}

/// Sampled minimum of `log|g|`; interval values count by their lower bound.
pub fn circle_min(
    g: &impl Evaluator,
    log_radius: f64,
    degree_hint: &BigCount,
    samples: usize,
) -> Result<CircleExtreme, ExtRangeError> {
    let r = extreme(g, log_radius, sample_count(samples, degree_hint), |v| -v.log_abs_lo())?;
    Ok(CircleExtreme { log: -r.log, ..r })
}

/// Larger score first; ties go to the smaller angle.
fn better(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
}

fn extreme(
    g: &impl Evaluator,
    log_radius: f64,
    n: usize,
    score: impl Fn(&Value) -> f64 + Sync,
) -> Result<CircleExtreme, ExtRangeError> {
    let step = 2.0 * PI / n as f64;
    let at = |theta: f64| -> Result<f64, ExtRangeError> {
        let z = LogComplex::new(log_radius, theta)?;
        Ok(score(&g.eval_value(&z)?))
    };
    let chunks: Vec<Result<Vec<(f64, f64)>, ExtRangeError>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut best: Vec<(f64, f64)> = Vec::with_capacity(CANDIDATES + 1);
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let theta = -PI + step * i as f64;
                let s = at(theta)?;
                if s.is_nan() {
                    return Err(ExtRangeError::RangeExhausted);
                }
                best.push((s, theta));
                best.sort_by(better);
                best.truncate(CANDIDATES);
            }
            Ok(best)
        })
        .collect();
    let mut cands = Vec::new();
    for c in chunks {
        cands.extend(c?);
    }
    cands.sort_by(better);
    cands.truncate(CANDIDATES);
    let mut best = cands[0];
    for &(s, theta) in &cands {
        let refined = golden_section(&at, theta - step, theta + step)?;
        if refined.0 > best.0 || (refined.0 == best.0 && refined.1 < best.1) {
            best = refined;
        }
        if s > best.0 {
            best = (s, theta);
        }
    }
    Ok(CircleExtreme { log: best.0, angle: crate::real::normalize_angle(best.1), samples: n })
}

/// Maximizes `h` on `[a, b]` to [`ANGLE_TOL`]; returns `(value, argument)`.
fn golden_section(
    h: &impl Fn(f64) -> Result<f64, ExtRangeError>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64), ExtRangeError> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    while b - a > ANGLE_TOL {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = h(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = h(x2)?;
        }
    }
    Ok(if f1 >= f2 { (f1, x1) } else { (f2, x2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_monomial() {
        let c = |_: &LogComplex| Ok(Value::Point(LogComplex::from_real(-3.0)));
        let r = circle_max(&c, 2.0, &BigCount::exact(0), 4096).unwrap();
        assert_eq!(r.log, 3f64.ln());
        let mono = |z: &LogComplex| z.pow_exact(16).map(Value::Point);
        let r = circle_max(&mono, 5.0, &BigCount::exact(16), 4096).unwrap();
        assert!((r.log - 80.0).abs() < 1e-12);
        let r = circle_min(&mono, 5.0, &BigCount::exact(16), 4096).unwrap();
        assert!((r.log - 80.0).abs() < 1e-12);
    }

    #[test]
    fn finds_peak_between_samples() {
        // |1 + z^n| on the unit circle peaks at 2 at z^n = 1
        let n = 37u64;
        let g = |z: &LogComplex| Ok(Value::Point(LogComplex::one().add(&z.pow_exact(n)?)));
        let r = circle_max(&g, 0.0, &BigCount::exact(n), 4096).unwrap();
        assert!((r.log - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sample_count_rule() {
        assert_eq!(sample_count(4096, &BigCount::exact(24)), 4096);
        assert_eq!(sample_count(4096, &BigCount::exact(1000)), 8000);
        assert_eq!(sample_count(4096, &BigCount::exact(1 << 40)), MAX_CIRCLE_SAMPLES);
    }
}
