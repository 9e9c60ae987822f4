//! The extremal families showing `[(b+1)/2]` is optimal in the
//! second-difference bound.
//!
//! Even `b`: `m = k = b^n/2` attains equality. Odd `b`: along
//! `m = k = k_n = (b^n - 1)/2` the normalized second difference is
//! `(b+1)/2 - (b-1)n/(2 k_n)`, which increases to `(b+1)/2`.

use num_rational::Ratio;

use crate::base::Base;
use crate::digits::cumulative_digit_sum_unchecked;
use crate::error::{Error, Result};
use crate::scalar::{lift, pow, Integral};

/// `k_n = (b^n - 1)/2` for odd `b`.
pub fn odd_half_power<T: Integral>(b: Base, n: u32) -> T {
    (pow::<T>(b.get(), n) - T::one()) / lift(2)
}

/// The normalized second difference `[S(2m) - 2S(m)]/m` along the extremal
/// family: `m = b^n/2` for even `b`, `m = k_n` for odd `b`.
pub fn sharpness_ratio<T: Integral>(b: Base, n: u32) -> Result<Ratio<T>> {
    if n < 1 {
        return Err(Error::Constraint("sharpness family starts at n = 1".into()));
    }
    let m: T = if b.is_odd() {
        odd_half_power(b, n)
    } else {
        pow::<T>(b.get(), n) / lift(2)
    };
    let twice = m.clone() * lift(2);
    let diff = cumulative_digit_sum_unchecked(&twice, b) - lift::<T>(2) * cumulative_digit_sum_unchecked(&m, b);
    Ok(Ratio::new(diff, m))
}

/// Closed form of [`sharpness_ratio`]: `[(b+1)/2]` for even `b`,
/// `(b+1)/2 - (b-1)n/(2 k_n)` for odd `b`.
pub fn sharpness_closed_form<T: Integral>(b: Base, n: u32) -> Result<Ratio<T>> {
    if n < 1 {
        return Err(Error::Constraint("sharpness family starts at n = 1".into()));
    }
    let limit = Ratio::from_integer(lift::<T>(b.half_ceil() as u64));
    if !b.is_odd() {
        return Ok(limit);
    }
    let kn: T = odd_half_power(b, n);
    Ok(limit - Ratio::new(lift::<T>((b.get() as u64 - 1) * n as u64), lift::<T>(2) * kn))
}

/// `(b+1)/2 - ratio`, the distance to the optimal constant.
pub fn sharpness_deficit<T: Integral>(b: Base, n: u32) -> Result<Ratio<T>> {
    let limit = Ratio::new(lift::<T>(b.get() as u64 + 1), lift(2));
    Ok(limit - sharpness_ratio::<T>(b, n)?)
}
