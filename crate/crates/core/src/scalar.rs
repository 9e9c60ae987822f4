//! Scalar traits the number-theoretic routines are generic over.
//!
//! Everything in this crate is exact. Fixed-width integers (`i64`, `i128`,
//! `u64`) are the fast path for bounded sweeps; `BigInt`/`BigUint` remove
//! any magnitude limit. Fixed-width instantiations panic on overflow in
//! debug builds, so pick the width to match the range being swept.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact integer type usable for nonnegative arguments (`n`, `N`, `m`, ...).
///
/// Signed types qualify too; negative values are rejected at runtime by the
/// operations that take naturals.
pub trait Natural:
    Integer + Clone + FromPrimitive + ToPrimitive + Debug + Display + Hash + Send + Sync + 'static
{
}

impl<T> Natural for T where
    T: Integer
        + Clone
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Hash
        + Send
        + Sync
        + 'static
{
}

/// A signed exact integer: slacks and rational numerators can be negative.
pub trait Integral: Natural + Signed {}

impl<T> Integral for T where T: Natural + Signed {}

/// Lifts a small machine integer into `T`.
///
/// Panics only if `T` cannot hold `x`, which for the constants used here
/// (digits, bases, levels) means `T` is narrower than `u32`.
#[inline]
pub(crate) fn lift<T: Natural>(x: u64) -> T {
    T::from_u64(x).expect("scalar type too narrow for constant")
}

/// `base^exp` in `T`.
#[inline]
pub(crate) fn pow<T: Natural>(base: u32, exp: u32) -> T {
    num_traits::pow(lift::<T>(base as u64), exp as usize)
}

/// Rational constant `num/den` in `Ratio<T>`.
#[inline]
pub(crate) fn ratio<T: Natural>(num: u64, den: u64) -> Ratio<T> {
    Ratio::new(lift(num), lift(den))
}
