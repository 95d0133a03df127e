//! Dense complex polynomials and a simultaneous root finder.

use crate::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("root finder did not converge after {0} iterations")]
    ConvergenceFailure(usize),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
}

/// Coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::from_real(&[0.0]);
        }
        Poly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect(),
        )
    }

    /// Largest coefficient modulus, used as the residual scale.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All complex roots by the Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Result<Vec<Complex64>, PolyError> {
        let n = self.degree();
        if n == 0 {
            if self.coeffs[0].norm() == 0.0 {
                return Err(PolyError::ZeroPolynomial);
            }
            return Ok(Vec::new());
        }
        let lead = self.coeffs[n];
        // Cauchy bound on root moduli
        let bound = 1.0
            + self.coeffs[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
        let deriv = self.derivative();
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                Complex64::from_polar(0.5 * bound, t)
            })
            .collect();
        const MAX_ITER: usize = 500;
        for _ in 0..MAX_ITER {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                let p = self.eval(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / deriv.eval(z[i]);
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if step.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
                }
            }
            if max_step < 1e-15 {
                return Ok(z);
            }
        }
        // accept if residuals are already at rounding level
        let scale = self.scale();
        if z.iter().all(|&r| self.eval(r).norm() <= 1e-10 * scale * (1.0 + r.norm()).powi(n as i32)) {
            return Ok(z);
        }
        Err(PolyError::ConvergenceFailure(MAX_ITER))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cubic() {
        // (z-1)(z+2)(z-3i)
        let p = Poly::from_real(&[-1.0, 1.0])
            .mul(&Poly::from_real(&[2.0, 1.0]))
            .mul(&Poly::new(vec![Complex64::new(0.0, -3.0), Complex64::new(1.0, 0.0)]));
        let mut r = p.roots().unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(0.0, 3.0)).norm() < 1e-12);
        assert!((r[2] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn derivative_and_eval() {
        let p = Poly::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.derivative(), Poly::from_real(&[2.0, 6.0]));
        assert_eq!(p.eval(Complex64::new(2.0, 0.0)), Complex64::new(17.0, 0.0));
    }
}
