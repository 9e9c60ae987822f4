//! Exact digital sums in base `b`, the digit tableau, Delange's and Lev's
//! Takagi-like functions, and exhaustive verification of the inequalities
//! relating them.
//!
//! The number-theoretic core is generic over the integer scalar (see
//! [`scalar`]); the aliases below fix the arbitrary-precision defaults.

pub mod base;
pub mod cli;
pub mod digits;
pub mod error;
pub mod scalar;
pub mod tableau;
pub mod takagi;
pub mod verifier;

pub use base::Base;
pub use error::{Error, Result};
pub use scalar::{Integral, Natural};

/// Arbitrary-precision natural number.
pub type Nat = num_bigint::BigUint;
/// Arbitrary-precision signed integer.
pub type Int = num_bigint::BigInt;
/// Exact rational in lowest terms with arbitrary-precision parts.
pub type ExactRational = num_rational::BigRational;
/// Exact rational over `i64`, for bounded grids where speed matters.
pub type SmallRational = num_rational::Ratio<i64>;
