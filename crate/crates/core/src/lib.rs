//! Numerical laboratory for entire functions of the form
//! `f(z) = F_0(z) * prod_k (1 - (z/R_k)^{n_k} / 2)^{l_k}`.
//!
//! The crate builds the radius ladder `R_k`, evaluates `f` with a certified
//! tail bound, checks the mapping inequalities that organise the Fatou/Julia
//! decomposition, and estimates box dimensions of rendered Julia-set proxies.
//!
//! The log-polar arithmetic ([`extrange`]) and the Chebyshev map geometry
//! ([`chebgeom`]) are generic over the float type ([`Real`]); everything built
//! on the radius ladder runs in `f64` through the aliases below.

pub mod builder;
pub mod chebgeom;
pub mod checks;
pub mod dynamics;
pub mod extrange;
pub mod hexfloat;
pub mod real;
pub mod rng;
pub mod poly;
pub mod seedpoly;

pub use extrange::{BigCount, ExtRangeError};
pub use real::Real;

/// Log-polar complex number in double precision.
pub type LogComplex = extrange::LogComplex<f64>;
pub type LogComplex32 = extrange::LogComplex<f32>;
pub type ModInterval = extrange::ModInterval<f64>;
pub type Value = extrange::Value<f64>;
pub type Complex64 = num_complex::Complex<f64>;
