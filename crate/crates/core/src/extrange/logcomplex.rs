use super::{BigCount, ExtRangeError, ModInterval, Result, Value};
use crate::real::{normalize_angle, scaled_angle, Real};
use num_complex::Complex;

/// A complex number `exp(log_mag) * exp(i * arg)`, or exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex<T> {
    is_zero: bool,
    log_mag: T,
    arg: T,
}

impl<T: Real> LogComplex<T> {
    pub fn zero() -> Self {
        Self { is_zero: true, log_mag: T::zero(), arg: T::zero() }
    }

    pub fn one() -> Self {
        Self { is_zero: false, log_mag: T::zero(), arg: T::zero() }
    }

    /// Builds a nonzero value; fails if `log_mag` or `arg` is not finite.
    pub fn new(log_mag: T, arg: T) -> Result<Self> {
        if !log_mag.is_finite() || !arg.is_finite() {
            return Err(ExtRangeError::RangeExhausted);
        }
        Ok(Self { is_zero: false, log_mag, arg: normalize_angle(arg) })
    }

    /// Positive real number given by its natural log.
    pub fn from_log(log_mag: T) -> Result<Self> {
        Self::new(log_mag, T::zero())
    }

    pub fn from_real(x: T) -> Self {
        if x == T::zero() {
            Self::zero()
        } else if x > T::zero() {
            Self { is_zero: false, log_mag: x.ln(), arg: T::zero() }
        } else {
            Self { is_zero: false, log_mag: (-x).ln(), arg: T::PI() }
        }
    }

    pub fn from_cartesian(z: Complex<T>) -> Self {
        if z.re == T::zero() && z.im == T::zero() {
            return Self::zero();
        }
        // hypot keeps full precision for tiny/huge components
        let log_mag = z.re.hypot(z.im).ln();
        Self { is_zero: false, log_mag, arg: normalize_angle(z.im.atan2(z.re)) }
    }

    /// Native complex value; overflows to infinity for huge moduli.
    pub fn to_cartesian(&self) -> Complex<T> {
        if self.is_zero {
            return Complex::new(T::zero(), T::zero());
        }
        let r = self.log_mag.exp();
        let (s, c) = exact_sin_cos(self.arg);
        Complex::new(r * c, r * s)
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn log_abs(&self) -> T {
        if self.is_zero {
            T::neg_infinity()
        } else {
            self.log_mag
        }
    }

    pub fn arg(&self) -> T {
        if self.is_zero {
            T::zero()
        } else {
            self.arg
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero {
            return *self;
        }
        Self { arg: normalize_angle(self.arg + T::PI()), ..*self }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero {
            return Err(ExtRangeError::RangeExhausted);
        }
        Self::new(-self.log_mag, -self.arg)
    }

    /// Multiplies by `exp(log_scale)`.
    pub fn scale_log(&self, log_scale: T) -> Result<Self> {
        if self.is_zero {
            return Ok(*self);
        }
        Self::new(self.log_mag + log_scale, self.arg)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero || other.is_zero {
            return Ok(Self::zero());
        }
        Self::new(self.log_mag + other.log_mag, self.arg + other.arg)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    /// Sum computed in the frame of the larger operand:
    /// `larger * (1 + smaller / larger)`.
    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero {
            return *self;
        }
        if self.is_zero {
            return *other;
        }
        let (big, small) = if self.log_mag >= other.log_mag { (self, other) } else { (other, self) };
        let gap = small.log_mag - big.log_mag;
        if gap < -T::DOMINANCE {
            return *big;
        }
        let (s, c) = exact_sin_cos(normalize_angle(small.arg - big.arg));
        let r = gap.exp();
        let w = Complex::new(T::one() + r * c, r * s);
        if w.re == T::zero() && w.im == T::zero() {
            return Self::zero();
        }
        let log_w = if r < T::lit(0.5) {
            // ln|1+ratio| without cancellation for small ratios
            let t = r * (r + T::lit(2.0) * c);
            t.ln_1p() / T::lit(2.0)
        } else {
            w.re.hypot(w.im).ln()
        };
        Self {
            is_zero: false,
            log_mag: big.log_mag + log_w,
            arg: normalize_angle(big.arg + w.im.atan2(w.re)),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Integer power. Exact counts give a point value; log-only counts give a
    /// modulus interval because `n * arg` is meaningless.
    pub fn pow(&self, n: &BigCount) -> Result<Value<T>> {
        match n {
            BigCount::Exact { value, .. } => self.pow_exact(*value).map(Value::Point),
            BigCount::LogOnly { log_value } => {
                if self.is_zero {
                    return Err(ExtRangeError::ZeroToLogOnlyPower);
                }
                let n = T::lit(log_value.exp());
                let log = n * self.log_mag;
                if !log.is_finite() && self.log_mag != T::zero() {
                    return Err(ExtRangeError::RangeExhausted);
                }
                let log = if self.log_mag == T::zero() { T::zero() } else { log };
                ModInterval::new(log, log).map(Value::Modulus)
            }
        }
    }

    pub fn pow_exact(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one());
        }
        if self.is_zero {
            return Ok(Self::zero());
        }
        let nf = T::from_u64(n).ok_or(ExtRangeError::RangeExhausted)?;
        let log_mag = nf * self.log_mag;
        if !log_mag.is_finite() {
            return Err(ExtRangeError::RangeExhausted);
        }
        Ok(Self { is_zero: false, log_mag, arg: scaled_angle(nf, self.arg) })
    }
}

/// sin/cos that are exact at multiples of π/2, so that exact cancellations
/// such as `1 + (-1)` produce zero.
fn exact_sin_cos<T: Real>(a: T) -> (T, T) {
    let half_pi = T::FRAC_PI_2();
    if a == T::zero() {
        (T::zero(), T::one())
    } else if a == T::PI() || a == -T::PI() {
        (T::zero(), -T::one())
    } else if a == half_pi {
        (T::one(), T::zero())
    } else if a == -half_pi {
        (-T::one(), T::zero())
    } else {
        a.sin_cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    type L = LogComplex<f64>;

    #[test]
    fn mul_examples() {
        let a = L::new(0.0, 0.0).unwrap();
        let b = L::new(LN_2, PI / 2.0).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.log_abs(), LN_2);
        assert_eq!(p.arg(), PI / 2.0);

        let m1 = L::new(0.0, PI).unwrap();
        let sq = m1.mul(&m1).unwrap();
        assert_eq!(sq.log_abs(), 0.0);
        assert!(sq.arg().abs() < 1e-15);

        assert!(a.mul(&L::zero()).unwrap().is_zero());
    }

    #[test]
    fn add_examples() {
        let one = L::one();
        let two = one.add(&one);
        assert!((two.log_abs() - LN_2).abs() < 1e-16);
        assert_eq!(two.arg(), 0.0);
        assert_eq!(one.add(&L::zero()), one);
        assert!(one.add(&one.neg()).is_zero());

        let big = L::from_log(100.0).unwrap();
        let s = big.add(&one);
        // ln(e^100 + 1) = 100 + ln(1 + e^-100) rounds to 100
        assert!(((s.log_abs() - 100.0) / 100.0).abs() < 1e-40);
    }

    #[test]
    fn dominance_threshold_is_noop() {
        let big = L::new(50.0, 0.3).unwrap();
        let tiny = L::new(5.0, 1.0).unwrap();
        assert_eq!(big.add(&tiny), big);
    }

    #[test]
    fn overflow_is_reported() {
        let a = L::from_log(f64::MAX).unwrap();
        assert_eq!(a.mul(&a), Err(ExtRangeError::RangeExhausted));
        assert!(L::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn pow_examples() {
        let rot = L::new(0.0, PI / 4.0).unwrap();
        let p = rot.pow_exact(4).unwrap();
        assert_eq!(p.log_abs(), 0.0);
        assert!((p.arg() - PI).abs() < 1e-15);

        let two = L::from_log(LN_2).unwrap();
        let p = two.pow_exact(10).unwrap();
        assert!((p.log_abs() - 10.0 * LN_2).abs() < 1e-15);
        assert_eq!(p.arg(), 0.0);

        let e = L::zero().pow(&BigCount::from_log(100.0));
        assert_eq!(e, Err(ExtRangeError::ZeroToLogOnlyPower));
        match two.pow(&BigCount::from_log(100.0)).unwrap() {
            Value::Modulus(iv) => {
                let want = 100f64.exp() * LN_2;
                assert!(iv.lo_log() <= want && want <= iv.hi_log());
            }
            Value::Point(_) => panic!("log-only power must lose the argument"),
        }
    }

    #[test]
    fn generic_over_f32() {
        let a = LogComplex::<f32>::from_cartesian(Complex::new(3.0, 4.0));
        let b = a.mul(&a).unwrap().to_cartesian();
        assert!((b.re + 7.0).abs() < 1e-4 && (b.im - 24.0).abs() < 1e-4);
    }
}
