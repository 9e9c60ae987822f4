//! Base-`b` digit expansions and digital sums.
//!
//! `s_b(n)` is the digit sum of `n`, `S_b(N) = s_b(0) + ... + s_b(N-1)` the
//! cumulative digit sum and `Σ_b(s, t) = S_b(t) - S_b(s)` the block sum of
//! the interval `[s, t)`.

use num_rational::Ratio;

use crate::base::Base;
use crate::error::{Error, Result};
use crate::scalar::{lift, pow, Natural};

/// Canonical base-`b` expansion, least significant digit first.
///
/// The last digit is nonzero; zero is the empty expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitVector {
    digits: Vec<u32>,
    base: Base,
}

impl DigitVector {
    /// Builds a canonical vector from raw digits, trimming trailing zeros.
    pub fn from_digits(mut digits: Vec<u32>, base: Base) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(Error::Constraint(format!("digit {d} out of range for base {base}")));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitVector { digits, base })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at position `i`, zero past the end.
    pub fn get(&self, i: usize) -> u32 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.digits.iter().map(|&d| d as u64).sum()
    }

    /// Reconstructs `Σ α_j b^j`.
    pub fn value<T: Natural>(&self) -> T {
        let b: T = lift(self.base.get() as u64);
        self.digits
            .iter()
            .rev()
            .fold(T::zero(), |acc, &d| acc * b.clone() + lift(d as u64))
    }
}

pub(crate) fn ensure_natural<T: Natural>(name: &'static str, n: &T) -> Result<()> {
    if *n < T::zero() {
        return Err(Error::Negative {
            name,
            value: n.to_string(),
        });
    }
    Ok(())
}

/// Base-`b` expansion of `n`.
pub fn digits<T: Natural>(n: &T, b: Base) -> Result<DigitVector> {
    ensure_natural("n", n)?;
    Ok(DigitVector {
        digits: raw_digits(n, b),
        base: b,
    })
}

fn raw_digits<T: Natural>(n: &T, b: Base) -> Vec<u32> {
    let bb: T = lift(b.get() as u64);
    let mut out = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&bb);
        out.push(r.to_u32().expect("digit below base fits u32"));
        rest = q;
    }
    out
}

/// `s_b(n)`.
pub fn digit_sum<T: Natural>(n: &T, b: Base) -> Result<T> {
    ensure_natural("n", n)?;
    Ok(digit_sum_unchecked(n, b))
}

pub(crate) fn digit_sum_unchecked<T: Natural>(n: &T, b: Base) -> T {
    let bb: T = lift(b.get() as u64);
    let mut sum = T::zero();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&bb);
        sum = sum + r;
        rest = q;
    }
    sum
}

/// `S_b(N)` by direct summation. Linear in `N`; this is the reference oracle.
pub fn cumulative_digit_sum_naive<T: Natural>(big_n: &T, b: Base) -> Result<T> {
    ensure_natural("N", big_n)?;
    let mut total = T::zero();
    let mut n = T::zero();
    while n < *big_n {
        total = total + digit_sum_unchecked(&n, b);
        n = n + T::one();
    }
    Ok(total)
}

/// `S_b(N)` in `O(log_b N)` operations.
///
/// Walks the digits of `N` from the most significant end, maintaining the
/// prefix `q` together with `S_b(q)` and `s_b(q)`, and appends one digit `r`
/// at a time via
/// `S_b(bq + r) = b S_b(q) + b(b-1)q/2 + r s_b(q) + r(r-1)/2`.
pub fn cumulative_digit_sum<T: Natural>(big_n: &T, b: Base) -> Result<T> {
    ensure_natural("N", big_n)?;
    Ok(cumulative_digit_sum_unchecked(big_n, b))
}

pub(crate) fn cumulative_digit_sum_unchecked<T: Natural>(big_n: &T, b: Base) -> T {
    let bu = b.get() as u64;
    let bb: T = lift(bu);
    let pair_sum: T = lift(bu * (bu - 1) / 2);
    let mut prefix = T::zero();
    let mut cum = T::zero();
    let mut sum = T::zero();
    for r in raw_digits(big_n, b).into_iter().rev() {
        let r = r as u64;
        let rt: T = lift(r);
        cum = bb.clone() * cum
            + pair_sum.clone() * prefix.clone()
            + rt.clone() * sum.clone()
            + lift(r * r.saturating_sub(1) / 2);
        sum = sum + rt.clone();
        prefix = prefix * bb.clone() + rt;
    }
    cum
}

/// `Σ_b(s, t)`: digit sum of the block `s, s+1, ..., t-1`. `s == t` gives 0.
pub fn block_sum<T: Natural>(s: &T, t: &T, b: Base) -> Result<T> {
    ensure_natural("s", s)?;
    if s > t {
        return Err(Error::EmptyInterval {
            start: s.to_string(),
            end: t.to_string(),
        });
    }
    Ok(cumulative_digit_sum_unchecked(t, b) - cumulative_digit_sum_unchecked(s, b))
}

/// Average digit sum over `[s, t)`, in lowest terms.
pub fn average_digit_sum<T: Natural>(s: &T, t: &T, b: Base) -> Result<Ratio<T>> {
    if s >= t {
        return Err(Error::EmptyInterval {
            start: s.to_string(),
            end: t.to_string(),
        });
    }
    let total = block_sum(s, t, b)?;
    Ok(Ratio::new(total, t.clone() - s.clone()))
}

/// Digitwise comparison: every base-`b` digit of `n` is at most the
/// corresponding digit of `m`.
///
/// This is the (reflexive) partial order written `n ≺_b m` in the literature
/// on digit arrangements; `n` dominated by itself is always true.
pub fn digit_dominates<T: Natural>(n: &T, m: &T, b: Base) -> Result<bool> {
    ensure_natural("n", n)?;
    ensure_natural("m", m)?;
    let (dn, dm) = (raw_digits(n, b), raw_digits(m, b));
    if dn.len() > dm.len() {
        return Ok(false);
    }
    Ok(dn.iter().zip(&dm).all(|(x, y)| x <= y))
}

/// Checks `s_b(n + b^{p_1} + ... + b^{p_k}) <= s_b(n) + k`.
pub fn add_power_bound_check<T: Natural>(n: &T, powers: &[u32], b: Base) -> Result<bool> {
    ensure_natural("n", n)?;
    let shifted = powers
        .iter()
        .fold(n.clone(), |acc, &p| acc + pow::<T>(b.get(), p));
    let lhs = digit_sum_unchecked(&shifted, b);
    let rhs = digit_sum_unchecked(n, b) + lift(powers.len() as u64);
    Ok(lhs <= rhs)
}

/// Number of base-`b` digits of `n` (zero has none).
pub fn digit_count<T: Natural>(n: &T, b: Base) -> u32 {
    let bb: T = lift(b.get() as u64);
    let mut count = 0;
    let mut rest = n.clone();
    while !rest.is_zero() {
        rest = rest / bb.clone();
        count += 1;
    }
    count
}

/// Returns `Some(p)` when `n == b^p`.
pub fn exact_log<T: Natural>(n: &T, b: Base) -> Option<u32> {
    if n.is_zero() || *n < T::zero() {
        return None;
    }
    let p = digit_count(n, b) - 1;
    if pow::<T>(b.get(), p) == *n {
        Some(p)
    } else {
        None
    }
}

/// `S_b(b^n) = n b^n (b-1) / 2`.
pub fn cumulative_at_power<T: Natural>(n: u32, b: Base) -> T {
    let bu = b.get() as u64;
    lift::<T>(n as u64) * pow::<T>(b.get(), n) * lift(bu - 1) / lift(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::{BigInt, BigUint};

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn digits_examples() {
        assert!(digits(&0u64, base(2)).unwrap().is_empty());
        assert_eq!(digits(&14u64, base(3)).unwrap().digits(), &[2, 1, 1]);
        assert_eq!(digits(&9u64, base(3)).unwrap().digits(), &[0, 0, 1]);
        assert_eq!(digits(&14u64, base(3)).unwrap().value::<u64>(), 14);
    }

    #[test]
    fn negative_arguments_are_rejected() {
        assert!(matches!(digits(&-1i64, base(2)), Err(Error::Negative { .. })));
        assert!(digit_sum(&-5i64, base(3)).is_err());
        assert!(cumulative_digit_sum(&-5i64, base(3)).is_err());
        assert!(digit_dominates(&1i64, &-1i64, base(3)).is_err());
    }

    #[test]
    fn from_digits_trims_and_validates() {
        let v = DigitVector::from_digits(vec![1, 0, 0], base(2)).unwrap();
        assert_eq!(v.digits(), &[1]);
        assert!(DigitVector::from_digits(vec![3], base(3)).is_err());
    }

    #[test]
    fn digit_sum_examples() {
        for b in 2..=10 {
            assert_eq!(digit_sum(&0u64, base(b)).unwrap(), 0);
            for p in 0..10 {
                assert_eq!(digit_sum(&(b as u64).pow(p), base(b)).unwrap(), 1);
            }
        }
        assert_eq!(digit_sum(&14u64, base(3)).unwrap(), 4);
    }

    #[test]
    fn cumulative_examples() {
        assert_eq!(cumulative_digit_sum_naive(&0u64, base(2)).unwrap(), 0);
        assert_eq!(cumulative_digit_sum_naive(&5u64, base(3)).unwrap(), 6);
        assert_eq!(cumulative_digit_sum_naive(&8u64, base(2)).unwrap(), 12);
        assert_eq!(cumulative_digit_sum(&10u64, base(2)).unwrap(), 15);
        assert_eq!(cumulative_digit_sum(&6u64, base(2)).unwrap(), 7);
        assert_eq!(cumulative_digit_sum(&8u64, base(2)).unwrap(), 12);
        assert_eq!(cumulative_digit_sum(&0u64, base(7)).unwrap(), 0);
    }

    #[test]
    fn cumulative_matches_oracle_small() {
        for b in 2..=10 {
            for n in 0u64..2000 {
                assert_eq!(
                    cumulative_digit_sum(&n, base(b)).unwrap(),
                    cumulative_digit_sum_naive(&n, base(b)).unwrap(),
                    "b={b} N={n}"
                );
            }
        }
    }

    #[test]
    fn power_closed_form_big() {
        // S_b(b^n) beyond u64 range.
        for b in 2..=10u32 {
            for n in [20u32, 40, 64] {
                let big_n: BigUint = num_traits::pow(BigUint::from(b), n as usize);
                let fast = cumulative_digit_sum(&big_n, base(b)).unwrap();
                assert_eq!(fast, cumulative_at_power::<BigUint>(n, base(b)));
            }
        }
    }

    #[test]
    fn block_and_average_examples() {
        assert_eq!(block_sum(&7u64, &7u64, base(4)).unwrap(), 0);
        assert_eq!(block_sum(&2u64, &5u64, base(3)).unwrap(), 5);
        assert_eq!(
            block_sum(&0u64, &37u64, base(5)).unwrap(),
            cumulative_digit_sum(&37u64, base(5)).unwrap()
        );
        assert!(matches!(
            block_sum(&5u64, &2u64, base(3)),
            Err(Error::EmptyInterval { .. })
        ));

        assert_eq!(average_digit_sum(&0i64, &4, base(2)).unwrap(), Ratio::from_integer(1));
        assert_eq!(average_digit_sum(&2i64, &5, base(3)).unwrap(), Ratio::new(5, 3));
        for b in 2..=6u32 {
            for n in 0..6u32 {
                let t = (b as i64).pow(n);
                assert_eq!(
                    average_digit_sum(&0, &t, base(b)).unwrap(),
                    Ratio::new(n as i64 * (b as i64 - 1), 2)
                );
            }
        }
        assert!(average_digit_sum(&3i64, &3, base(3)).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(digit_dominates(&1u64, &10, base(3)).unwrap());
        assert!(!digit_dominates(&4u64, &10, base(3)).unwrap());
        assert!(digit_dominates(&42u64, &42, base(5)).unwrap());
        assert!(digit_dominates(&0u64, &42, base(5)).unwrap());
        assert!(!digit_dominates(&9u64, &1, base(3)).unwrap());
    }

    #[test]
    fn power_bound_examples() {
        assert!(add_power_bound_check(&17u64, &[], base(3)).unwrap());
        assert!(add_power_bound_check(&1u64, &[0], base(2)).unwrap());
        for b in 2..=10u32 {
            let n = (b - 1) as u64;
            assert!(add_power_bound_check(&n, &[0], base(b)).unwrap());
            // strict: s_b(b) = 1 < (b-1) + 1
            assert!(digit_sum(&(n + 1), base(b)).unwrap() < digit_sum(&n, base(b)).unwrap() + 1);
        }
    }

    #[test]
    fn exact_log_detects_powers() {
        assert_eq!(exact_log(&1u64, base(3)), Some(0));
        assert_eq!(exact_log(&81u64, base(3)), Some(4));
        assert_eq!(exact_log(&80u64, base(3)), None);
        assert_eq!(exact_log(&0u64, base(3)), None);
        assert_eq!(digit_count(&0u64, base(3)), 0);
        assert_eq!(digit_count(&BigInt::from(1000), base(10)), 4);
    }
}
