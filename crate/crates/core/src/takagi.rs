//! Delange's functions `h_b`, Lev's functions `ω_b`, and Delange's
//! decomposition of `S_b(n)`.
//!
//! `g_b` is the 1-periodic integral of `(b-1)/2 - [bt]`,
//! `h_b(x) = Σ_n b^{-n} g_b(b^n x)`, `φ_b(x) = min(dist(x, Z), 1/b)` and
//! `ω_b(x) = Σ_n b^{-n} φ_b(b^n x)`. At `b`-adic points `k/b^n` both series
//! terminate, so values there are exact rationals. Elsewhere `h_b` is
//! evaluated by truncation with a certified tail bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::base::Base;
use crate::digits::{cumulative_digit_sum_unchecked, digit_count, ensure_natural, exact_log};
use crate::error::{Error, Result};
use crate::scalar::{lift, pow, ratio, Integral};

/// Default number of series terms for truncated evaluation.
pub const DEFAULT_DEPTH: u32 = 40;

/// The point `k / b^n`, kept with `b ∤ k` unless `n = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BAdicRational<T> {
    numerator: T,
    level: u32,
    base: Base,
}

impl<T: Integral> BAdicRational<T> {
    pub fn new(numerator: T, level: u32, base: Base) -> Result<Self> {
        ensure_natural("k", &numerator)?;
        let bb: T = lift(base.get() as u64);
        let (mut k, mut n) = (numerator, level);
        while n > 0 && !k.is_zero() && k.is_multiple_of(&bb) {
            k = k / bb.clone();
            n -= 1;
        }
        if k.is_zero() {
            n = 0;
        }
        Ok(BAdicRational {
            numerator: k,
            level: n,
            base,
        })
    }

    pub fn numerator(&self) -> &T {
        &self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn to_ratio(&self) -> Ratio<T> {
        Ratio::new(self.numerator.clone(), pow(self.base.get(), self.level))
    }

    /// Numerator reduced into the fundamental period `[0, b^n]`.
    fn periodic_numerator(&self) -> T {
        let scale: T = pow(self.base.get(), self.level);
        if self.numerator > scale {
            self.numerator.mod_floor(&scale)
        } else {
            self.numerator.clone()
        }
    }
}

fn fract<T: Integral>(x: &Ratio<T>) -> Ratio<T> {
    x - x.floor()
}

/// `g_b(x)`, exact. On `[i/b, (i+1)/b)` it is
/// `i(b-i)/(2b) + ((b-1)/2 - i)(x - i/b)`.
pub fn g_exact<T: Integral>(x: &Ratio<T>, b: Base) -> Ratio<T> {
    let bu = b.get() as u64;
    let y = fract(x);
    let bt: Ratio<T> = Ratio::from_integer(lift(bu));
    let i = (&y * &bt).floor().to_integer();
    let iu = i.to_u64().expect("0 <= i < b");
    let peak = ratio::<T>(iu * (bu - iu), 2 * bu);
    let slope = Ratio::new(lift::<T>(bu - 1) - lift::<T>(2 * iu), lift(2));
    peak + slope * (y - Ratio::new(i, lift(bu)))
}

/// `G_b = max g_b = [b/2] [(b+1)/2] / (2b)`, attained at `x = [b/2]/b`.
pub fn g_peak<T: Integral>(b: Base) -> Ratio<T> {
    let bu = b.get() as u64;
    ratio((bu / 2) * bu.div_ceil(2), 2 * bu)
}

/// Partial sum `h_b^{(depth)}(x) = Σ_{j<depth} b^{-j} g_b(b^j x)`, exact.
///
/// Runs in integer arithmetic over the common denominator `2bq·b^{depth-1}`
/// where `x = p/q`.
pub fn h_partial<T: Integral>(x: &Ratio<T>, b: Base, depth: u32) -> Ratio<T> {
    if depth == 0 {
        return Ratio::zero();
    }
    let bu = b.get() as u64;
    let bt: T = lift(bu);
    let q = x.denom().clone();
    let mut r = x.numer().mod_floor(&q);
    let mut acc = T::zero();
    for _ in 0..depth {
        let br = bt.clone() * r.clone();
        let i = br.div_floor(&q);
        let iu = i.to_u64().expect("0 <= i < b");
        let term = lift::<T>(iu * (bu - iu)) * q.clone()
            + (lift::<T>(bu - 1) - lift::<T>(2 * iu)) * (br.clone() - i * q.clone());
        acc = acc * bt.clone() + term;
        r = br.mod_floor(&q);
    }
    let den = lift::<T>(2 * bu) * q * pow::<T>(b.get(), depth - 1);
    Ratio::new(acc, den)
}

/// `h_b(k/b^n) = b^{-n} ((b-1)/2 · kn - S_b(k))`.
pub fn h_at_badic<T: Integral>(x: &BAdicRational<T>) -> Ratio<T> {
    let b = x.base;
    let bu = b.get() as u64;
    let k = x.periodic_numerator();
    let n: T = lift(x.level as u64);
    let twice = lift::<T>(bu - 1) * k.clone() * n - lift::<T>(2) * cumulative_digit_sum_unchecked(&k, b);
    Ratio::new(twice, lift::<T>(2) * pow::<T>(b.get(), x.level))
}

/// `φ_b(x) = min(dist(x, Z), 1/b)`.
pub fn phi<T: Integral>(x: &Ratio<T>, b: Base) -> Ratio<T> {
    let y = fract(x);
    let dist = std::cmp::min(y.clone(), Ratio::one() - y);
    std::cmp::min(dist, ratio(1, b.get() as u64))
}

/// `ω_b(k/b^n) = Σ_{j<n} b^{-j} φ_b(b^j k/b^n)`; later terms vanish.
pub fn omega_at_badic<T: Integral>(x: &BAdicRational<T>) -> Ratio<T> {
    let b = x.base;
    let bt: Ratio<T> = Ratio::from_integer(lift(b.get() as u64));
    let mut point = x.to_ratio();
    let mut weight: Ratio<T> = Ratio::one();
    let mut sum = Ratio::zero();
    for _ in 0..x.level {
        sum = sum + &weight * phi(&point, b);
        point = fract(&(point * &bt));
        weight = weight / &bt;
    }
    sum
}

/// A truncated series value with a bound on its distance to the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedValue<T: Clone + Integer> {
    pub value: Ratio<T>,
    pub depth: u32,
    pub error_bound: Ratio<T>,
}

impl<T: Integral> TruncatedValue<T> {
    /// Whether `exact` lies within the certified bound of `value`.
    pub fn encloses(&self, exact: &Ratio<T>) -> bool {
        (&self.value - exact).abs() <= self.error_bound
    }
}

impl TruncatedValue<BigInt> {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn error_bound_f64(&self) -> f64 {
        self.error_bound.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Tail of the `h_b` series after `depth` terms: `G_b b^{1-depth}/(b-1)`.
pub fn h_tail_bound<T: Integral>(b: Base, depth: u32) -> Ratio<T> {
    let bu = b.get() as u64;
    let peak = g_peak::<T>(b);
    let scale = Ratio::new(lift::<T>(bu), pow::<T>(b.get(), depth) * lift(bu - 1));
    peak * scale
}

/// `h_b(x)` truncated after `depth >= 1` terms.
pub fn h_truncated<T: Integral>(x: &Ratio<T>, b: Base, depth: u32) -> Result<TruncatedValue<T>> {
    if depth == 0 {
        return Err(Error::Constraint("truncation depth must be at least 1".into()));
    }
    Ok(TruncatedValue {
        value: h_partial(x, b, depth),
        depth,
        error_bound: h_tail_bound(b, depth),
    })
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn rat(num: u64, den: u64) -> BigRational {
    BigRational::new(big(num), big(den))
}

/// `2^-e` as an exact rational.
fn two_pow_neg(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}

/// Delange's periodic function
/// `F(x) = (b-1)/2 (1 - {x}) - b^{1-{x}} h_b(b^{{x}-1})`, evaluated at a
/// rational `x`.
///
/// For `{x} = 0` the argument `1/b` is exact. Otherwise `b^{{x}-1}` is
/// irrational; it is approximated in double precision and the bound covers
/// that rounding (budgeted at `(b+4)·2^-50`), the Lipschitz drift of the
/// first `depth` series terms across the rounding interval, and the series
/// tail.
pub fn delange_f(x: &BigRational, b: Base, depth: u32) -> Result<TruncatedValue<BigInt>> {
    if depth == 0 {
        return Err(Error::Constraint("truncation depth must be at least 1".into()));
    }
    let bu = b.get() as u64;
    let frac = fract(x);
    let tail = h_tail_bound::<BigInt>(b, depth);
    let half_span = rat(bu - 1, 2);

    if frac.is_zero() {
        let h = h_partial(&rat(1, bu), b, depth);
        let bb = BigRational::from_integer(big(bu));
        return Ok(TruncatedValue {
            value: half_span - &bb * h,
            depth,
            error_bound: bb * tail,
        });
    }

    let xf = frac.to_f64().expect("fractional part converts");
    let uf = (bu as f64).powf(xf - 1.0);
    let u = BigRational::from_float(uf).expect("finite power");
    let h = h_partial(&u, b, depth);
    let value = &half_span * (BigRational::one() - &frac) - &h / &u;

    let delta = rat(bu + 4, 1) * two_pow_neg(50);
    let h_max = g_peak::<BigInt>(b) * rat(bu, bu - 1);
    let bb = rat(bu, 1);
    let drift = rat(depth as u64 * (bu - 1), 2) * &delta;
    let error_bound = rat(2, 1) * &bb * &bb * &delta * h_max + rat(2, 1) * bb * (tail + drift);
    Ok(TruncatedValue {
        value,
        depth,
        error_bound,
    })
}

/// `log_b n` as an exact rational with a bound on its distance to the true
/// logarithm. Exact when `n` is a power of `b`.
fn log_enclosure(n: &BigInt, b: Base) -> (BigRational, BigRational) {
    if let Some(p) = exact_log(n, b) {
        return (BigRational::from_integer(big(p as u64)), BigRational::zero());
    }
    let lf = n.to_f64().expect("finite").ln() / (b.get() as f64).ln();
    let l = BigRational::from_float(lf).expect("finite logarithm");
    let err = BigRational::from_f64(lf.abs() + 1.0).expect("finite") * two_pow_neg(46);
    (l, err)
}

/// `F(log_b n)` for `n >= 1`.
///
/// With `L` the digit count of `n`, `b^{{log_b n}-1} = n/b^L` exactly, so the
/// series is evaluated at a `b`-adic point; only the linear term carries
/// logarithm rounding.
pub fn delange_f_at_log(n: &BigInt, b: Base, depth: u32) -> Result<TruncatedValue<BigInt>> {
    let (value, error_bound, _) = delange_f_at_log_parts(n, b, depth)?;
    Ok(TruncatedValue {
        value,
        depth,
        error_bound,
    })
}

fn delange_f_at_log_parts(
    n: &BigInt,
    b: Base,
    depth: u32,
) -> Result<(BigRational, BigRational, (BigRational, BigRational))> {
    if depth == 0 {
        return Err(Error::Constraint("truncation depth must be at least 1".into()));
    }
    if *n < BigInt::one() {
        return Err(Error::Constraint(format!("Delange decomposition needs n >= 1, got {n}")));
    }
    let bu = b.get() as u64;
    let digits = digit_count(n, b);
    let scale: BigInt = pow(b.get(), digits);
    let (log, log_err) = log_enclosure(n, b);
    let frac = &log - BigRational::from_integer(big(digits as u64 - 1));
    let half_span = rat(bu - 1, 2);
    let u = BigRational::new(n.clone(), scale.clone());
    let inv_u = BigRational::new(scale, n.clone());
    let h = h_partial(&u, b, depth);
    let value = &half_span * (BigRational::one() - frac) - &inv_u * h;
    let error_bound = &half_span * &log_err + inv_u * h_tail_bound::<BigInt>(b, depth);
    Ok((value, error_bound, (log, log_err)))
}

/// `S_b(n) - [(b-1)/2 · n log_b n + n F(log_b n)]`, which is zero in exact
/// arithmetic, together with a certified bound on the evaluation error.
pub fn delange_residual(n: &BigInt, b: Base, depth: u32) -> Result<TruncatedValue<BigInt>> {
    let (f_value, f_err, (log, log_err)) = delange_f_at_log_parts(n, b, depth)?;
    let bu = b.get() as u64;
    let half_span = rat(bu - 1, 2);
    let nr = BigRational::from_integer(n.clone());
    let s = BigRational::from_integer(cumulative_digit_sum_unchecked(n, b));
    let value = s - &half_span * &nr * log - &nr * f_value;
    let error_bound = &half_span * &nr * log_err + nr * f_err;
    Ok(TruncatedValue {
        value,
        depth,
        error_bound,
    })
}
