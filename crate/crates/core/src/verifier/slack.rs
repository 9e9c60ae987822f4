//! Slack (right-hand side minus left-hand side) of each inequality at a
//! single tuple. Nonnegative slack means the inequality holds there; zero
//! marks an equality witness. All slacks are exact.

use num_rational::Ratio;

use crate::base::Base;
use crate::digits::{cumulative_digit_sum_unchecked, ensure_natural};
use crate::error::{Error, Result};
use crate::scalar::{lift, pow, Integral};
use crate::takagi::{h_at_badic, BAdicRational};

/// Source of `S_b(N)` values.
pub trait CumulativeSums<T> {
    fn base(&self) -> Base;
    fn cumulative(&self, n: &T) -> T;

    fn block(&self, s: &T, t: &T) -> T
    where
        T: Integral,
    {
        self.cumulative(t) - self.cumulative(s)
    }
}

/// Evaluates `S_b` with the logarithmic-time recursion on every call.
#[derive(Clone, Copy, Debug)]
pub struct Direct(pub Base);

impl<T: Integral> CumulativeSums<T> for Direct {
    fn base(&self) -> Base {
        self.0
    }

    fn cumulative(&self, n: &T) -> T {
        cumulative_digit_sum_unchecked(n, self.0)
    }
}

/// `S_b(0..=max)` precomputed, for sweeps.
#[derive(Clone, Debug)]
pub struct SumTable {
    base: Base,
    values: Vec<i64>,
}

impl SumTable {
    pub fn new(base: Base, max: u64) -> Self {
        let mut values = Vec::with_capacity(max as usize + 1);
        let mut acc = 0i64;
        values.push(0);
        for n in 0..max {
            acc += crate::digits::digit_sum_unchecked(&(n as i64), base);
            values.push(acc);
        }
        SumTable { base, values }
    }

    pub fn max(&self) -> u64 {
        self.values.len() as u64 - 1
    }
}

impl CumulativeSums<i64> for SumTable {
    fn base(&self) -> Base {
        self.base
    }

    fn cumulative(&self, n: &i64) -> i64 {
        self.values[*n as usize]
    }
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Constraint(what()))
    }
}

/// `S_b(m+n) - S_b(m) - S_b(n) - min(m, n)`.
pub fn superadditivity_slack<T: Integral>(m: &T, n: &T, b: Base) -> Result<T> {
    ensure_natural("m", m)?;
    ensure_natural("n", n)?;
    Ok(superadditivity_with(&Direct(b), m, n))
}

pub(crate) fn superadditivity_with<T: Integral, C: CumulativeSums<T>>(sums: &C, m: &T, n: &T) -> T {
    sums.cumulative(&(m.clone() + n.clone()))
        - sums.cumulative(m)
        - sums.cumulative(n)
        - std::cmp::min(m, n).clone()
}

/// `2k + l - [S_3(m+k+l) + S_3(m-k) + S_3(m-l) - 3 S_3(m)]` for
/// `0 <= l <= k <= m`.
pub fn ternary_slack<T: Integral>(k: &T, l: &T, m: &T) -> Result<T> {
    ensure_natural("l", l)?;
    require(l <= k && k <= m, || format!("need 0 <= l <= k <= m, got k={k}, l={l}, m={m}"))?;
    Ok(ternary_with(&Direct(Base::TERNARY), k, l, m))
}

pub(crate) fn ternary_with<T: Integral, C: CumulativeSums<T>>(sums: &C, k: &T, l: &T, m: &T) -> T {
    let three: T = lift(3);
    let two: T = lift(2);
    let lhs = sums.cumulative(&(m.clone() + k.clone() + l.clone()))
        + sums.cumulative(&(m.clone() - k.clone()))
        + sums.cumulative(&(m.clone() - l.clone()))
        - three * sums.cumulative(m);
    two * k.clone() + l.clone() - lhs
}

/// `[(b+1)/2] k - [S_b(m+k) + S_b(m-k) - 2 S_b(m)]` for `0 <= k <= m`.
pub fn general_bound_slack<T: Integral>(m: &T, k: &T, b: Base) -> Result<T> {
    ensure_natural("k", k)?;
    require(k <= m, || format!("need 0 <= k <= m, got k={k}, m={m}"))?;
    Ok(general_bound_with(&Direct(b), m, k))
}

pub(crate) fn general_bound_with<T: Integral, C: CumulativeSums<T>>(sums: &C, m: &T, k: &T) -> T {
    let c: T = lift(sums.base().half_ceil() as u64);
    let two: T = lift(2);
    let lhs = sums.cumulative(&(m.clone() + k.clone())) + sums.cumulative(&(m.clone() - k.clone()))
        - two * sums.cumulative(m);
    c * k.clone() - lhs
}

/// `b Σ_b(n, n+k) + b(b-1)k/2 - Σ_b(n, n+bk)`.
pub fn times_b_slack<T: Integral>(n: &T, k: &T, b: Base) -> Result<T> {
    ensure_natural("n", n)?;
    ensure_natural("k", k)?;
    Ok(times_b_with(&Direct(b), n, k))
}

pub(crate) fn times_b_with<T: Integral, C: CumulativeSums<T>>(sums: &C, n: &T, k: &T) -> T {
    let bu = sums.base().get() as u64;
    let bt: T = lift(bu);
    let short = sums.block(n, &(n.clone() + k.clone()));
    let long = sums.block(n, &(n.clone() + bt.clone() * k.clone()));
    bt * short + lift::<T>(bu * (bu - 1) / 2) * k.clone() - long
}

/// Average form of the same inequality:
/// `s̄_b(n, n+k) + (b-1)/2 - s̄_b(n, n+bk)`, which equals the slack divided
/// by `bk`. Needs `k >= 1`.
pub fn times_b_average_slack<T: Integral>(n: &T, k: &T, b: Base) -> Result<Ratio<T>> {
    require(*k >= T::one(), || format!("average form needs k >= 1, got k={k}"))?;
    let slack = times_b_slack(n, k, b)?;
    Ok(Ratio::new(slack, lift::<T>(b.get() as u64) * k.clone()))
}

fn h_at<T: Integral>(k: T, n: u32, b: Base) -> Ratio<T> {
    h_at_badic(&BAdicRational::new(k, n, b).expect("grid points are nonnegative"))
}

/// Approximate convexity of `h_b` at `x = (m-k)/b^n`, `y = (m+k)/b^n`, in
/// the doubled form
/// `h_b(x) + h_b(y) + (1/2)[(b+1)/2](y - x) - 2 h_b((x+y)/2)`,
/// so that `slack · b^n` is exactly [`general_bound_slack`].
pub fn approx_convexity_h_slack<T: Integral>(m: &T, k: &T, level: u32, b: Base) -> Result<Ratio<T>> {
    ensure_natural("k", k)?;
    require(k <= m, || format!("need 0 <= k <= m, got k={k}, m={m}"))?;
    let scale: T = pow(b.get(), level);
    require(m.clone() + k.clone() <= scale, || {
        format!("need m + k <= b^n, got m={m}, k={k}, b^n={scale}")
    })?;
    let x = h_at(m.clone() - k.clone(), level, b);
    let y = h_at(m.clone() + k.clone(), level, b);
    let mid = h_at(m.clone(), level, b);
    let c = lift::<T>(b.half_ceil() as u64);
    let spread = Ratio::new(c * k.clone(), scale);
    Ok(x + y + spread - mid * lift::<T>(2))
}

/// Lev's ternary inequality at `x = (m-k)/3^n`, `y = (m-l)/3^n`,
/// `z = (m+k+l)/3^n`, multiplied through by 3:
/// `h_3(x) + h_3(y) + h_3(z) + (z - x) - 3 h_3((x+y+z)/3)`.
/// `slack · 3^n` is exactly [`ternary_slack`].
pub fn lev_slack<T: Integral>(m: &T, k: &T, l: &T, level: u32) -> Result<Ratio<T>> {
    ensure_natural("l", l)?;
    require(l <= k && k <= m, || format!("need 0 <= l <= k <= m, got k={k}, l={l}, m={m}"))?;
    let b = Base::TERNARY;
    let scale: T = pow(3, level);
    let top = m.clone() + k.clone() + l.clone();
    require(top <= scale, || format!("need m + k + l <= 3^n, got {top} > {scale}"))?;
    let x = h_at(m.clone() - k.clone(), level, b);
    let y = h_at(m.clone() - l.clone(), level, b);
    let z = h_at(top, level, b);
    let mid = h_at(m.clone(), level, b);
    let spread = Ratio::new(lift::<T>(2) * k.clone() + l.clone(), scale);
    Ok(x + y + z + spread - mid * lift::<T>(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn superadditivity_examples() {
        assert_eq!(superadditivity_slack(&0i64, &0, base(2)).unwrap(), 0);
        assert_eq!(superadditivity_slack(&1i64, &2, base(2)).unwrap(), 0);
        assert_eq!(superadditivity_slack(&3i64, &2, base(2)).unwrap(), 0);
        assert!(superadditivity_slack(&-1i64, &2, base(2)).is_err());
    }

    #[test]
    fn ternary_examples() {
        for m in 0..30i64 {
            assert_eq!(ternary_slack(&0, &0, &m).unwrap(), 0);
            assert_eq!(ternary_slack(&m, &m, &m).unwrap(), 0, "k = l = m = {m}");
        }
        assert_eq!(ternary_slack(&2i64, &2, &2).unwrap(), 0);
        assert!(ternary_slack(&1i64, &2, &3).is_err());
        assert!(ternary_slack(&4i64, &2, &3).is_err());
    }

    #[test]
    fn general_bound_examples() {
        assert_eq!(general_bound_slack(&7i64, &0, base(5)).unwrap(), 0);
        assert_eq!(general_bound_slack(&2i64, &2, base(2)).unwrap(), 0);
        // k_n = (3^n - 1)/2 has slack (b-1)n/2 = n
        for n in 1..10u32 {
            let kn = (3i64.pow(n) - 1) / 2;
            assert_eq!(general_bound_slack(&kn, &kn, base(3)).unwrap(), n as i64);
        }
        assert!(general_bound_slack(&1i64, &2, base(3)).is_err());
    }

    #[test]
    fn times_b_examples() {
        for b in 2..=7 {
            for k in 0..50i64 {
                assert_eq!(times_b_slack(&0, &k, base(b)).unwrap(), 0);
            }
            assert_eq!(times_b_slack(&13i64, &0, base(b)).unwrap(), 0);
        }
        assert_eq!(times_b_slack(&1i64, &1, base(2)).unwrap(), 1);
        assert_eq!(times_b_average_slack(&1i64, &1, base(2)).unwrap(), Ratio::new(1, 2));
        assert!(times_b_average_slack(&1i64, &0, base(2)).is_err());
    }

    #[test]
    fn approx_convexity_examples() {
        assert!(approx_convexity_h_slack(&3i64, &0, 2, base(3)).unwrap().is_zero());
        assert!(approx_convexity_h_slack(&2i64, &2, 2, base(2)).unwrap().is_zero());
        assert!(approx_convexity_h_slack(&2i64, &3, 2, base(2)).is_err());
        assert!(approx_convexity_h_slack(&3i64, &2, 2, base(2)).is_err());
        let b = base(3);
        for m in 0..=27i64 {
            for k in 0..=m.min(27 - m) {
                let s = approx_convexity_h_slack(&m, &k, 3, b).unwrap();
                assert_eq!(s * 27, Ratio::from_integer(general_bound_slack(&m, &k, b).unwrap()));
            }
        }
    }

    #[test]
    fn lev_examples() {
        assert!(lev_slack(&5i64, &0, &0, 2).unwrap().is_zero());
        assert!(lev_slack(&1i64, &1, &1, 1).unwrap().is_zero());
        assert!(lev_slack(&2i64, &1, &1, 1).is_err());
        assert!(lev_slack(&1i64, &0, &1, 2).is_err());
    }

    #[test]
    fn table_matches_direct() {
        for b in 2..=10 {
            let table = SumTable::new(base(b), 3000);
            assert_eq!(table.max(), 3000);
            for n in 0..=3000i64 {
                assert_eq!(table.cumulative(&n), Direct(base(b)).cumulative(&n));
            }
        }
    }
}
