//! Scalar abstraction shared by the log-polar arithmetic and the native
//! Chebyshev identity checks.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating point scalar usable as the mantissa type of [`crate::LogComplex`].
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Log-magnitude gap beyond which the smaller addend cannot change the sum.
    const DOMINANCE: Self;
    /// High part of a two-term split of 2π.
    const TWO_PI_HI: Self;
    /// Low part of a two-term split of 2π (`TWO_PI_HI + TWO_PI_LO ≈ 2π` to twice the precision).
    const TWO_PI_LO: Self;
    /// Largest integer below which every integer is exactly representable.
    const EXACT_INT_LIMIT: u64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f64 {
    const DOMINANCE: f64 = 40.0;
    const TWO_PI_HI: f64 = 6.283_185_307_179_586;
    const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;
    const EXACT_INT_LIMIT: u64 = 1 << 53;
}

impl Real for f32 {
    // e^-17 is below single precision.
    const DOMINANCE: f32 = 17.0;
    const TWO_PI_HI: f32 = 6.283_185_5;
    const TWO_PI_LO: f32 = -1.748_455_5e-7;
    const EXACT_INT_LIMIT: u64 = 1 << 24;
}

/// Reduces an angle to `(-π, π]`.
pub fn normalize_angle<T: Real>(a: T) -> T {
    if a == -T::PI() {
        return T::PI();
    }
    if a > -T::PI() && a <= T::PI() {
        return a;
    }
    let k = (a / T::TWO_PI_HI).round();
    let mut r = (-k).mul_add(T::TWO_PI_HI, a);
    r = (-k).mul_add(T::TWO_PI_LO, r);
    let two_pi = T::TWO_PI_HI;
    while r <= -T::PI() {
        r = r + two_pi;
    }
    while r > T::PI() {
        r = r - two_pi;
    }
    r
}

/// `n * a` reduced to `(-π, π]`, carrying the rounding error of the product
/// through the reduction.
pub fn scaled_angle<T: Real>(n: T, a: T) -> T {
    let p = n * a;
    let err = n.mul_add(a, -p);
    let k = (p / T::TWO_PI_HI).round();
    let mut r = (-k).mul_add(T::TWO_PI_HI, p);
    r = (-k).mul_add(T::TWO_PI_LO, r);
    normalize_angle(r + err)
}
