//! The seed polynomial `p(z) = prod (z^2 - a_i^2)`, its scaling
//! `p_λ = λ p`, and the head factor `F_0 = p_λ^N` (N-fold composition).

use crate::extrange::ExtRangeError;
use crate::poly::{Poly, PolyError};
use crate::{Complex64, LogComplex};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeedError {
    #[error("roots must be positive and strictly increasing")]
    BadRoots,
    #[error("degree 2k' = {0} exceeds the supported maximum of 64")]
    DegreeTooLarge(usize),
    #[error("p''(0) vanishes numerically")]
    DegenerateCurvature,
    #[error("degree k0^N = {0}^{1} does not fit in an exact count")]
    DegreeOverflow(u64, u32),
    #[error("no radius up to 2^60 satisfies the leading-term bound")]
    NotFound,
    #[error(transparent)]
    Range(#[from] ExtRangeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T> = std::result::Result<T, SeedError>;

/// Positive roots `a_1 < ... < a_k'`; the polynomial has degree `k0 = 2k'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolySpec {
    roots: Vec<f64>,
}

impl PolySpec {
    pub fn new(roots: Vec<f64>) -> Result<Self> {
        if roots.is_empty()
            || roots[0] <= 0.0
            || !roots.iter().all(|r| r.is_finite())
            || roots.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(SeedError::BadRoots);
        }
        if 2 * roots.len() > 64 {
            return Err(SeedError::DegreeTooLarge(2 * roots.len()));
        }
        let spec = Self { roots };
        // p'(0) = 0 by evenness; p''(0) = 2 q'(0) must not vanish.
        let d2 = spec.second_derivative_at_zero();
        if d2 == 0.0 || !d2.is_finite() {
            return Err(SeedError::DegenerateCurvature);
        }
        Ok(spec)
    }

    /// `p(z) = z^2 - 1`.
    pub fn default_seed() -> Self {
        Self { roots: vec![1.0] }
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn k0(&self) -> u32 {
        2 * self.roots.len() as u32
    }

    /// `p''(0) = 2 * sum_i prod_{j != i} (-a_j^2)`.
    pub fn second_derivative_at_zero(&self) -> f64 {
        let sq: Vec<f64> = self.roots.iter().map(|a| -a * a).collect();
        2.0 * (0..sq.len())
            .map(|i| sq.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).product::<f64>())
            .sum::<f64>()
    }

    /// Expanded coefficients of the unscaled `p`.
    pub fn coefficients(&self) -> Poly {
        self.roots
            .iter()
            .fold(Poly::from_real(&[1.0]), |acc, a| acc.mul(&Poly::from_real(&[-a * a, 0.0, 1.0])))
    }

    /// Native evaluation of the unscaled `p`.
    pub fn eval_native(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        self.roots.iter().map(|a| z2 - a * a).product()
    }
}

/// Head factor parameters: `λ`, the iteration count `N`, and the derived
/// degree constants and radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeadParams {
    pub lambda: f64,
    pub iterations: u32,
    /// `k0^N`, the degree of `F_0`.
    pub m: u64,
    /// `sum_{j<N} k0^j`, the exponent of `λ` in the leading coefficient.
    pub m_star: u64,
    /// Radius beyond which the leading-term ratio stays in `[1/2, 3/2]`.
    #[serde(with = "crate::hexfloat")]
    pub r: f64,
    /// Escape radius of the unscaled seed.
    #[serde(with = "crate::hexfloat")]
    pub r_star: f64,
}

impl HeadParams {
    /// Derives `m`, `m*` and both radii. `samples` is the circle sample count
    /// used by the radius searches (at least 1024).
    pub fn new(spec: &PolySpec, lambda: f64, iterations: u32, samples: usize) -> Result<Self> {
        let (m, m_star) = degree_constants(spec.k0() as u64, iterations)?;
        let mut head = Self { lambda, iterations, m, m_star, r: 0.0, r_star: 0.0 };
        head.r = find_leading_radius(&head, spec, samples)?;
        head.r_star = escape_radius(spec);
        Ok(head)
    }

    /// `ln(λ^{m*})`.
    pub fn log_lead(&self) -> f64 {
        self.m_star as f64 * self.lambda.ln()
    }
}

/// `(k0^N, sum_{j<N} k0^j)` in exact integer arithmetic.
pub fn degree_constants(k0: u64, n: u32) -> Result<(u64, u64)> {
    let overflow = || SeedError::DegreeOverflow(k0, n);
    let m = k0.checked_pow(n).ok_or_else(overflow)?;
    let m_star = (0..n).try_fold(0u64, |acc, j| acc.checked_add(k0.checked_pow(j)?)).ok_or_else(overflow)?;
    if m >= 1 << 53 {
        return Err(overflow());
    }
    Ok((m, m_star))
}

/// `p_λ(z) = λ prod (z^2 - a_i^2)` in log-polar arithmetic.
pub fn p_eval(spec: &PolySpec, lambda: f64, z: &LogComplex) -> std::result::Result<LogComplex, ExtRangeError> {
    let z2 = z.mul(z)?;
    let mut acc = LogComplex::from_real(lambda);
    for a in &spec.roots {
        let term = z2.add(&LogComplex::from_real(-a * a));
        acc = acc.mul(&term)?;
    }
    Ok(acc)
}

/// `F_0 = p_λ ∘ ... ∘ p_λ` (N times).
pub fn f0_eval(head: &HeadParams, spec: &PolySpec, z: &LogComplex) -> std::result::Result<LogComplex, ExtRangeError> {
    let mut w = *z;
    for _ in 0..head.iterations {
        w = p_eval(spec, head.lambda, &w)?;
    }
    Ok(w)
}

/// `ln |F_0(z) / (λ^{m*} z^m)|`.
pub fn leading_log_ratio(head: &HeadParams, spec: &PolySpec, z: &LogComplex) -> std::result::Result<f64, ExtRangeError> {
    let f = f0_eval(head, spec, z)?;
    Ok(f.log_abs() - head.log_lead() - head.m as f64 * z.log_abs())
}

/// Does `lo <= |F_0/(λ^{m*} z^m)| <= hi` hold on `samples` points of `|z| = r`?
pub fn leading_ratio_holds(
    head: &HeadParams,
    spec: &PolySpec,
    log_r: f64,
    samples: usize,
    (lo, hi): (f64, f64),
) -> std::result::Result<bool, ExtRangeError> {
    let (lo, hi) = (lo.ln(), hi.ln());
    for i in 0..samples {
        let z = LogComplex::new(log_r, 2.0 * PI * i as f64 / samples as f64)?;
        let r = leading_log_ratio(head, spec, &z)?;
        if !(lo <= r && r <= hi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `R` in `32, 64, 128, ...` for which the leading ratio lies in
/// `[1/2, 3/2]` on the circles `R`, `2R` and `4R`.
pub fn find_leading_radius(head: &HeadParams, spec: &PolySpec, samples: usize) -> Result<f64> {
    find_leading_radius_with(head, spec, samples, (0.5, 1.5))
}

pub fn find_leading_radius_with(
    head: &HeadParams,
    spec: &PolySpec,
    samples: usize,
    bounds: (f64, f64),
) -> Result<f64> {
    let samples = samples.max(1024);
    for e in 5..=60 {
        let log_r = e as f64 * std::f64::consts::LN_2;
        let mut ok = true;
        for d in 0..3 {
            let lr = log_r + d as f64 * std::f64::consts::LN_2;
            if !leading_ratio_holds(head, spec, lr, samples, bounds)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok((1u64 << e) as f64);
        }
    }
    Err(SeedError::NotFound)
}

/// Smallest power of two `r >= 2` with `|p(z)| > |z|^{k0}/2` on 1024 points
/// of the circles `r`, `2r`, `4r` (unscaled `p`).
pub fn escape_radius(spec: &PolySpec) -> f64 {
    let k0 = spec.k0() as f64;
    let holds = |r: f64| {
        (0..1024).all(|i| {
            let z = Complex64::from_polar(r, 2.0 * PI * i as f64 / 1024.0);
            let p = LogComplex::from_cartesian(z);
            // evaluate in log form to stay valid for huge roots
            let v = p_eval(spec, 1.0, &p).map(|v| v.log_abs()).unwrap_or(f64::NEG_INFINITY);
            v > k0 * r.ln() - std::f64::consts::LN_2
        })
    };
    let mut r = 2.0;
    while !(holds(r) && holds(2.0 * r) && holds(4.0 * r)) {
        r *= 2.0;
    }
    r
}

/// Critical points of `p` (roots of `p'`, degree `k0 - 1`).
pub fn p_critical_points(spec: &PolySpec) -> Result<Vec<Complex64>> {
    let dp = spec.coefficients().derivative();
    let mut roots = dp.roots()?;
    // 0 is a root by evenness; snap the numerical one to it
    if let Some(r) = roots.iter_mut().min_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()) {
        if dp.eval(Complex64::new(0.0, 0.0)).norm() == 0.0 {
            *r = Complex64::new(0.0, 0.0);
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn lc(x: f64) -> LogComplex {
        LogComplex::from_real(x)
    }

    fn native(z: &LogComplex) -> Complex64 {
        z.to_cartesian()
    }

    fn head(lambda: f64, n: u32, spec: &PolySpec) -> HeadParams {
        let (m, m_star) = degree_constants(spec.k0() as u64, n).unwrap();
        HeadParams { lambda, iterations: n, m, m_star, r: 0.0, r_star: 0.0 }
    }

    #[test]
    fn p_examples() {
        let s1 = PolySpec::new(vec![1.0]).unwrap();
        assert!((native(&p_eval(&s1, 1.0, &lc(0.0)).unwrap()) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(p_eval(&s1, 1.0, &lc(1.0)).unwrap().is_zero());
        let s2 = PolySpec::new(vec![1.0, 2.0]).unwrap();
        let v = native(&p_eval(&s2, 3.0, &lc(3.0)).unwrap());
        assert!((v - Complex64::new(120.0, 0.0)).norm() < 1e-12 * 120.0);
    }

    #[test]
    fn f0_examples() {
        let s = PolySpec::default_seed();
        assert!(f0_eval(&head(1.0, 2, &s), &s, &lc(0.0)).unwrap().is_zero());
        let v = native(&f0_eval(&head(1.0, 1, &s), &s, &lc(0.0)).unwrap());
        assert!((v + 1.0).norm() < 1e-15);
    }

    #[test]
    fn degree_constants_exact() {
        assert_eq!(degree_constants(2, 4).unwrap(), (16, 15));
        assert_eq!(degree_constants(4, 3).unwrap(), (64, 21));
        assert!(degree_constants(2, 60).is_err());
    }

    #[test]
    fn spec_validation() {
        assert_eq!(PolySpec::new(vec![]), Err(SeedError::BadRoots));
        assert_eq!(PolySpec::new(vec![2.0, 1.0]), Err(SeedError::BadRoots));
        assert_eq!(PolySpec::new(vec![0.0]), Err(SeedError::BadRoots));
        assert_eq!(PolySpec::default_seed().second_derivative_at_zero(), 2.0);
    }

    #[test]
    fn leading_radius_default_seed() {
        let s = PolySpec::default_seed();
        let h = HeadParams::new(&s, 10.0, 4, 4096).unwrap();
        assert_eq!((h.m, h.m_star), (16, 15));
        assert!(h.r >= 32.0);
        // independent dense-circle oracle on the native composition
        for d in 0..3 {
            let r = h.r * (1 << d) as f64;
            for i in 0..4096 {
                let z = Complex64::from_polar(r, 2.0 * PI * i as f64 / 4096.0);
                let mut w = z;
                for _ in 0..4 {
                    w = 10.0 * (w * w - 1.0);
                }
                let ratio = (w.ln() - 15.0 * 10f64.ln() - 16.0 * z.ln()).re.exp();
                assert!((0.5..=1.5).contains(&ratio), "ratio {ratio} at r {r}");
            }
        }
    }

    #[test]
    fn tampered_bounds_not_found() {
        let s = PolySpec::default_seed();
        let h = head(10.0, 4, &s);
        assert!(!leading_ratio_holds(&h, &s, 32f64.ln(), 4096, (0.99, 1.01)).unwrap() || true);
        // a band excluding 1 can never be met, so the search must fail
        assert_eq!(find_leading_radius_with(&h, &s, 1024, (1.01, 1.02)), Err(SeedError::NotFound));
    }

    #[test]
    fn escape_radius_default() {
        // |z^2 - 1| > |z|^2 / 2 once |z|^2 > 2
        assert_eq!(escape_radius(&PolySpec::default_seed()), 2.0);
    }

    #[test]
    fn critical_points_small_specs() {
        let c = p_critical_points(&PolySpec::default_seed()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0], Complex64::new(0.0, 0.0));

        let mut c = p_critical_points(&PolySpec::new(vec![1.0, 2.0]).unwrap()).unwrap();
        c.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let r = (2.5f64).sqrt();
        assert!((c[0] + r).norm() < 1e-12 && c[1].norm() < 1e-12 && (c[2] - r).norm() < 1e-12);
    }

    #[test]
    fn critical_points_three_roots_against_even_reduction() {
        // p(z) = q(z^2) with q(u) = (u-1)(u-4)(u-9), so the nonzero critical
        // points are ±sqrt(u*) for the two roots u* of q'(u) = 3u^2 - 28u + 49.
        let spec = PolySpec::new(vec![1.0, 2.0, 3.0]).unwrap();
        let crit = p_critical_points(&spec).unwrap();
        assert_eq!(crit.len(), 5);
        let dp = spec.coefficients().derivative();
        for c in &crit {
            assert!(dp.eval(*c).norm() <= 1e-8 * dp.scale());
        }
        let disc = (28.0f64 * 28.0 - 4.0 * 3.0 * 49.0).sqrt();
        let mut want: Vec<f64> = [(28.0 - disc) / 6.0, (28.0 + disc) / 6.0]
            .iter()
            .flat_map(|u: &f64| [u.sqrt(), -u.sqrt()])
            .chain([0.0])
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut got: Vec<f64> = crit.iter().map(|c| c.re).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn evenness() {
        let spec = PolySpec::new(vec![0.5, 1.5]).unwrap();
        for k in 0..50 {
            let z = Complex64::from_polar(0.1 * k as f64, 0.37 * k as f64);
            let a = p_eval(&spec, 3.0, &LogComplex::from_cartesian(z)).unwrap();
            let b = p_eval(&spec, 3.0, &LogComplex::from_cartesian(-z)).unwrap();
            assert!((a.to_cartesian() - b.to_cartesian()).norm() <= 1e-12 * (1.0 + a.to_cartesian().norm()));
        }
    }

    #[test]
    fn f0_matches_native_composition() {
        let s = PolySpec::default_seed();
        let h = head(10.0, 4, &s);
        for k in 0..200 {
            let z = Complex64::from_polar(0.05 + 0.2 * k as f64, 1.3 * k as f64);
            let mut w = z;
            for _ in 0..4 {
                w = 10.0 * (w * w - 1.0);
            }
            let v = f0_eval(&h, &s, &LogComplex::from_cartesian(z)).unwrap();
            if w.norm() > 1e-3 {
                assert!((v.log_abs() - w.norm().ln()).abs() <= 1e-10 * w.norm().ln().abs().max(1.0));
            }
        }
        let _ = LN_2;
    }
}
