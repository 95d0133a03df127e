//! Geometry of `H_m(z) = z^m (2 - z^m) = -T_2(z^m/√2 - 1/√2)`, the map that
//! each product factor looks like near its own radius.

use crate::builder::Level;
use crate::checks::CheckResult;
use crate::extrange::{ExtRangeError, LogComplex, ModInterval, Value};
use crate::real::Real;
use crate::BigCount;
use num_complex::Complex;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChebError {
    #[error("no sign change of |H_{m}| - 1 on the ray at angle {angle}")]
    BracketFailure { m: u64, angle: f64 },
    #[error("need m <= 1024 and at least 8m angular samples")]
    BadArguments,
}

/// `H_m(z)`; a modulus interval when `m` is log-only.
pub fn h_eval<T: Real>(m: &BigCount, z: &LogComplex<T>) -> Result<Value<T>, ExtRangeError> {
    if z.is_zero() {
        return Ok(Value::Point(LogComplex::zero()));
    }
    match z.pow(m)? {
        Value::Point(w) => {
            let two = LogComplex::from_real(T::lit(2.0));
            Ok(Value::Point(w.mul(&two.sub(&w))?))
        }
        Value::Modulus(w) => {
            // |2 - w| = 2 |1 - w/2|
            let shift = ModInterval::point(T::LN_2())?;
            let factor = w.one_minus_half()?.mul(&shift)?;
            Ok(Value::Modulus(w.mul(&factor)?))
        }
    }
}

fn native_h<T: Real>(m: u32, z: Complex<T>) -> Complex<T> {
    let w = z.powu(m);
    w * (Complex::new(T::lit(2.0), T::zero()) - w)
}

/// `|H_m(z) + T_2(z^m/√2 - 1/√2)|` with `T_2(x) = 2x^2 - 1`.
pub fn chebyshev_consistency<T: Real>(m: u32, z: Complex<T>) -> T {
    let s = T::FRAC_1_SQRT_2();
    let x = z.powu(m) * s - s;
    let t2 = x * x * T::lit(2.0) - T::one();
    (native_h(m, z) + t2).norm()
}

/// `|(1 - H_m(z)) - (1 - z^m)^2|`.
pub fn one_minus_h_identity<T: Real>(m: u32, z: Complex<T>) -> T {
    let one = Complex::new(T::one(), T::zero());
    let d = one - z.powu(m);
    ((one - native_h(m, z)) - d * d).norm()
}

/// Sampled level curve `|H_m| = 1` with the petal bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PetalGeometry {
    pub m: u64,
    pub inner_bound: f64,
    pub outer_bound: f64,
    /// Left root of `T_2`.
    pub z2: f64,
    /// `1 - 1/√2`, the distance from `z2` to -1.
    pub r2: f64,
    pub rt2: f64,
    /// `(angle, radius)` crossings, in angle order.
    pub level_curve: Vec<(f64, f64)>,
}

const RAY_CELLS: usize = 256;
const RADIUS_TOL: f64 = 1e-12;

fn abs_h_minus_one(m: u64, theta: f64, r: f64) -> f64 {
    let z = LogComplex::new(r.ln(), theta).expect("finite ray point");
    h_eval(&BigCount::exact(m), &z).expect("native range").log_abs_hi().exp() - 1.0
}

/// Radial bisection of `|H_m(r e^{iθ})| - 1` over `[1 - 1/m, 1 + 2/m]` on
/// `angular_samples` equally spaced rays; every sign change is recorded.
pub fn level_curve(m: u64, angular_samples: usize) -> Result<PetalGeometry, ChebError> {
    if m == 0 || m > 1024 || angular_samples < 8 * m as usize {
        return Err(ChebError::BadArguments);
    }
    let lo = 1.0 - 1.0 / m as f64;
    let hi = 1.0 + 2.0 / m as f64;
    let rays: Vec<Result<Vec<(f64, f64)>, ChebError>> = (0..angular_samples)
        .into_par_iter()
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / angular_samples as f64;
            let g = |r: f64| abs_h_minus_one(m, theta, r);
            if !(g(lo) < 0.0 && g(hi) > 0.0) {
                return Err(ChebError::BracketFailure { m, angle: theta });
            }
            let mut out = Vec::new();
            let width = (hi - lo) / RAY_CELLS as f64;
            let mut a = lo;
            let mut ga = g(a);
            for j in 1..=RAY_CELLS {
                let b = if j == RAY_CELLS { hi } else { lo + width * j as f64 };
                let gb = g(b);
                if (ga < 0.0) != (gb < 0.0) {
                    out.push((theta, bisect(&g, a, b, ga)));
                }
                a = b;
                ga = gb;
            }
            Ok(out)
        })
        .collect();
    let mut curve = Vec::new();
    for r in rays {
        curve.extend(r?);
    }
    Ok(PetalGeometry {
        m,
        inner_bound: lo,
        outer_bound: hi,
        z2: -std::f64::consts::FRAC_1_SQRT_2,
        r2: 1.0 - std::f64::consts::FRAC_1_SQRT_2,
        rt2: std::f64::consts::FRAC_1_SQRT_2,
        level_curve: curve,
    })
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, ga: f64) -> f64 {
    let neg_at_a = ga < 0.0;
    while b - a > RADIUS_TOL {
        let mid = 0.5 * (a + b);
        if (g(mid) < 0.0) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

impl PetalGeometry {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("angle,radius\n");
        for (a, r) in &self.level_curve {
            let _ = writeln!(s, "{a:.17e},{r:.17e}");
        }
        s
    }
}

/// `max |H_m| < 1` on `|z| = 1 - 1/m` and `min |H_m| > 1` on `|z| = 1 + 2/m`.
pub fn containment_check(m: u64, samples: usize) -> (CheckResult, CheckResult) {
    let mf = m as f64;
    let on_circle = |r: f64| -> Vec<f64> {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let z = LogComplex::new(r.ln(), 2.0 * PI * i as f64 / samples as f64).expect("finite");
                h_eval(&BigCount::exact(m), &z).expect("native range").log_abs_hi()
            })
            .collect()
    };
    let inner = on_circle(1.0 - 1.0 / mf).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let outer = on_circle(1.0 + 2.0 / mf).into_iter().fold(f64::INFINITY, f64::min);
    (
        CheckResult::compare(
            "petal_inner_disk",
            "max |H_m| < 1 on |z| = 1 - 1/m",
            None,
            inner,
            0.0,
            samples,
        ),
        CheckResult::compare(
            "petal_outer_disk",
            "min |H_m| > 1 on |z| = 1 + 2/m",
            None,
            0.0,
            outer,
            samples,
        ),
    )
}

/// Radius of the zeros of `F_k`: exactly `log R_k + ln2/n_k`, against the
/// first-order form `log R_k + ln(1 + ln2/n_k)`.
pub fn zero_radius(level: &Level) -> (f64, f64) {
    let t = (LN_2.ln() - level.n.log_value()).exp();
    (level.log_r + t, level.log_r + t.ln_1p())
}

/// [`CheckResult`] comparing the two forms of [`zero_radius`] against `1/n^2`.
pub fn zero_radius_check(level: &Level) -> CheckResult {
    // gap = t - ln(1 + t) with t = ln2/n, taken in log form so that log-only
    // n (t below the smallest subnormal) still compares
    let log_t = LN_2.ln() - level.n.log_value();
    let t = log_t.exp();
    let log_gap = if t > 1e-4 { (t - t.ln_1p()).ln() } else { 2.0 * log_t - LN_2 + (-2.0 * t / 3.0).ln_1p() };
    let log_bound = -2.0 * level.n.log_value();
    CheckResult::compare("zero_radius", "|ln2/n - ln(1 + ln2/n)| <= 1/n^2", Some(level.k), log_gap, log_bound, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Verdict;
    use crate::rng;

    fn lc(re: f64, im: f64) -> LogComplex<f64> {
        LogComplex::from_cartesian(Complex::new(re, im))
    }

    #[test]
    fn h_examples() {
        let two = BigCount::exact(2);
        assert!(h_eval(&two, &LogComplex::<f64>::zero()).unwrap().as_point().unwrap().is_zero());
        let one = h_eval(&BigCount::exact(5), &lc(1.0, 0.0)).unwrap();
        assert!((one.as_point().unwrap().to_cartesian() - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let v = h_eval(&two, &lc(0.0, 1.0)).unwrap().as_point().unwrap().to_cartesian();
        assert!((v - Complex::new(-3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn h_single_precision() {
        let v = h_eval(&BigCount::exact(2), &LogComplex::<f32>::from_cartesian(Complex::new(0.0, 1.0))).unwrap();
        assert!((v.as_point().unwrap().to_cartesian() - Complex::new(-3.0f32, 0.0)).norm() < 1e-5);
        assert!(chebyshev_consistency(8, Complex::new(0.3f32, 0.9)) < 1e-5);
    }

    #[test]
    fn h_log_only_bounds_contain_true_modulus() {
        // H = w(2 - w) with |w| = 1 on the unit circle, so |H| ranges over [1, 3]
        let m = BigCount::LogOnly { log_value: 60.0 };
        let v = h_eval(&m, &lc(1.0, 0.0)).unwrap();
        assert!(v.log_abs_hi() >= 3f64.ln() - 1e-12);
        assert!(v.log_abs_lo() <= 1e-12);
    }

    #[test]
    fn identity_examples() {
        assert_eq!(chebyshev_consistency(7, Complex::new(1.0, 0.0)), 0.0);
        assert!(chebyshev_consistency(7, Complex::new(0.0, 0.0)) < 1e-15);
        assert_eq!(one_minus_h_identity(3, Complex::new(0.0, 0.0)), 0.0);
        assert_eq!(one_minus_h_identity(3, Complex::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn identities_on_random_points() {
        let mut g = rng::stream(rng::DEFAULT_SEED, 40);
        for m in [2, 8, 32] {
            for _ in 0..10_000 {
                let z = Complex::from_polar(rng::uniform(&mut g, 0.0, 2.0f64.powf(1.0 / m as f64)), rng::angle(&mut g));
                assert!(chebyshev_consistency(m, z) <= 1e-12);
                assert!(one_minus_h_identity(m, z) <= 1e-11);
            }
        }
    }

    #[test]
    fn rotation_invariance() {
        let mut g = rng::stream(rng::DEFAULT_SEED, 41);
        for m in [3u64, 8, 33] {
            let rot = LogComplex::new(0.0, 2.0 * PI / m as f64).unwrap();
            for _ in 0..200 {
                let z = LogComplex::new(rng::uniform(&mut g, -1.0, 0.2), rng::angle(&mut g)).unwrap();
                let a = h_eval(&BigCount::exact(m), &z).unwrap().as_point().unwrap().to_cartesian();
                let b = h_eval(&BigCount::exact(m), &z.mul(&rot).unwrap()).unwrap().as_point().unwrap().to_cartesian();
                assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn level_curve_bounds_and_symmetry() {
        for m in [2u64, 8, 16] {
            let geom = level_curve(m, 32 * m as usize).unwrap();
            assert!(!geom.level_curve.is_empty());
            for &(theta, r) in &geom.level_curve {
                assert!(r >= geom.inner_bound - 1e-9 && r <= geom.outer_bound + 1e-9);
                assert!(abs_h_minus_one(m, theta, r).abs() < 1e-9);
            }
            // the rays are spaced so that a rotation by 2π/m maps ray i to ray i + 32
            let per_ray: Vec<Vec<f64>> = (0..32 * m as usize)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / (32 * m) as f64;
                    geom.level_curve.iter().filter(|p| p.0 == t).map(|p| p.1).collect()
                })
                .collect();
            for i in 0..per_ray.len() {
                let j = (i + 32) % per_ray.len();
                assert_eq!(per_ray[i].len(), per_ray[j].len());
                for (a, b) in per_ray[i].iter().zip(&per_ray[j]) {
                    assert!((a - b).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn petal_center_crossing() {
        // along arg z^m = 0 the modulus is ρ|2 - ρ| with ρ = r^m, which
        // reaches 1 at ρ = 1 + √2
        let m = 8u64;
        let geom = level_curve(m, 8 * m as usize).unwrap();
        let want = (1.0 + 2f64.sqrt()).powf(1.0 / m as f64);
        let on_ray: Vec<f64> = geom.level_curve.iter().filter(|p| p.0 == 0.0).map(|p| p.1).collect();
        assert!(on_ray.iter().any(|r| (r - want).abs() < 1e-11), "{on_ray:?}");
    }

    #[test]
    fn containment_margins() {
        for m in [2u64, 8, 16, 32] {
            let (inner, outer) = containment_check(m, 4096);
            assert_eq!(inner.verdict, Verdict::Pass);
            assert_eq!(outer.verdict, Verdict::Pass);
            assert!(inner.margin_log > 0.0 && outer.margin_log > 0.0);
        }
        // m = 2 on r = 1/2: max |H_2| = ρ(2 + ρ) at ρ = 1/4
        let (inner, _) = containment_check(2, 4096);
        assert!((inner.lhs_log - (0.25f64 * 2.25).ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_examples() {
        let mut level = Level {
            k: 1,
            log_r: 0.0,
            n: BigCount::exact(1),
            l: BigCount::exact(1),
            m_k: BigCount::exact(1),
            log_c: None,
            sign_c: 1,
        };
        assert!((zero_radius(&level).0.exp() - 2.0).abs() < 1e-15);
        for n in [8u64, 64, 1024] {
            level.n = BigCount::exact(n);
            level.log_r = 5.0;
            let (exact, approx) = zero_radius(&level);
            assert!(((exact - 5.0).exp() - 2f64.powf(1.0 / n as f64)).abs() < 1e-14);
            assert!((exact - approx).abs() <= 1.0 / (n * n) as f64);
            let r = zero_radius_check(&level);
            assert_eq!(r.verdict, Verdict::Pass);
            let t = LN_2 / n as f64;
            assert!((r.lhs_log - (t - t.ln_1p()).ln()).abs() < 1e-6);
        }
        // series branch agrees with the direct difference near the switch
        level.n = BigCount::exact(20_000);
        let t = LN_2 / 20_000.0;
        assert!((zero_radius_check(&level).lhs_log - (t - t.ln_1p()).ln()).abs() < 1e-6);
        level.n = BigCount::LogOnly { log_value: 4.0e135 };
        let r = zero_radius_check(&level);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.margin_log.is_finite());
    }

    #[test]
    fn csv_export() {
        let geom = level_curve(2, 16).unwrap();
        let csv = geom.to_csv();
        assert!(csv.starts_with("angle,radius\n"));
        assert_eq!(csv.lines().count(), geom.level_curve.len() + 1);
    }

    #[test]
    fn rejects_sparse_rays() {
        assert_eq!(level_curve(8, 10), Err(ChebError::BadArguments));
    }
}
