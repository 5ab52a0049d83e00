//! Scalar abstractions.
//!
//! The Frobenius recurrence and the truncation polynomial only need field
//! arithmetic, so they are written against [`Field`] and run unchanged over
//! `f32`, `f64` or exact [`BigRational`]. Everything that takes square roots
//! or exponentials is written against [`Real`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed};

/// Arithmetic needed by the coefficient recurrence.
pub trait Field: Num + Neg<Output = Self> + Clone + PartialOrd + Debug {
    fn from_int(value: i64) -> Self;

    /// Absolute value.
    fn magnitude(&self) -> Self;

    /// `false` for overflowed floating point values; always `true` for exact types.
    fn is_finite_value(&self) -> bool;

    /// Lossy conversion used for diagnostics (error messages, scale factors).
    fn to_f64_lossy(&self) -> f64;
}

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Field + Float + FromPrimitive + Copy + Display + Send + Sync + 'static {
    fn lit(value: f64) -> Self {
        <Self as FromPrimitive>::from_f64(value).expect("literal representable in scalar type")
    }
}

macro_rules! impl_float_field {
    ($($t:ty),*) => {$(
        impl Field for $t {
            fn from_int(value: i64) -> Self {
                value as $t
            }
            fn magnitude(&self) -> Self {
                <$t>::abs(*self)
            }
            fn is_finite_value(&self) -> bool {
                <$t>::is_finite(*self)
            }
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
        impl Real for $t {}
    )*};
}

impl_float_field!(f32, f64);

impl Field for BigRational {
    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn magnitude(&self) -> Self {
        Signed::abs(self)
    }
    fn is_finite_value(&self) -> bool {
        true
    }
    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Largest magnitude in a slice, zero for an empty slice.
pub fn max_magnitude<T: Field>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| {
        let m = v.magnitude();
        if m > acc {
            m
        } else {
            acc
        }
    })
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_difference<T: Real>(a: T, b: T, floor: T) -> T {
    let scale = Float::abs(a).max(Float::abs(b)).max(floor);
    if scale.is_zero() {
        return T::zero();
    }
    Float::abs(a - b) / scale
}
