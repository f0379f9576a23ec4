//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All floating-point code is written against [`Real`], which is implemented
//! for `f32` and `f64`. Complex values are `num_complex::Complex<T>`.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, One, ToPrimitive, Zero};
use serde::{de::DeserializeOwned, Serialize};

/// Real floating-point scalar.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Binomial coefficient `C(n, k)` evaluated in the scalar type.
///
/// Returns zero when `k > n`. The running product stays integral at every
/// step, so the result is exact whenever it fits the mantissa.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1);
    }
    acc.round()
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Signed binomial with the convention `C(n, k) = 0` for negative arguments.
pub fn binomial_signed<T: Real>(n: i64, k: i64) -> T {
    if n < 0 || k < 0 || k > n {
        T::zero()
    } else {
        binomial(n as usize, k as usize)
    }
}

/// `(-1)^k` as a scalar.
#[inline]
pub fn sign<T: Real>(k: usize) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Smallest pairwise distance in a list of complex points (`+inf` for fewer
/// than two points).
pub fn min_pairwise_distance<T: Real>(points: &[Complex<T>]) -> T {
    let mut best = T::infinity();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((*a - *b).norm());
        }
    }
    best
}

/// Lift a list of reals to the real axis of the complex plane.
pub fn to_complex<T: Real>(xs: &[T]) -> Vec<Complex<T>> {
    xs.iter().map(|&x| Complex::new(x, T::zero())).collect()
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff<T: Real>(a: T, b: T, floor: T) -> T {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
