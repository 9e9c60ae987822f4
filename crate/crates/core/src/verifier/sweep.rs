use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{Accumulator, SlackValue, VerificationReport};
use super::slack::{
    approx_convexity_h_slack, general_bound_with, lev_slack, superadditivity_with, ternary_with,
    times_b_with, CumulativeSums, SumTable,
};
use crate::base::Base;
use crate::error::{Error, Result};

pub const DEFAULT_WITNESS_CAP: usize = 1000;

/// Largest `S_b` table a sweep may allocate.
const MAX_TABLE: u64 = 50_000_000;
/// Largest `b^n` grid for the Takagi-function sweeps.
const MAX_GRID: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// `S(m+n) >= S(m) + S(n) + min(m, n)`.
    Superadditivity,
    /// `S_3(m+k+l) + S_3(m-k) + S_3(m-l) - 3S_3(m) <= 2k + l`.
    Ternary,
    /// `S(m+k) + S(m-k) - 2S(m) <= [(b+1)/2] k`.
    GeneralBound,
    /// `Σ(n, n+bk) <= bΣ(n, n+k) + b(b-1)k/2`.
    TimesB,
    /// Approximate midpoint convexity of `h_b` on `b`-adic grids.
    ApproxConvexityH,
    /// Lev's three-point inequality for `h_3` on triadic grids.
    Lev,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::Superadditivity,
        TheoremId::Ternary,
        TheoremId::GeneralBound,
        TheoremId::TimesB,
        TheoremId::ApproxConvexityH,
        TheoremId::Lev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Superadditivity => "superadditivity",
            TheoremId::Ternary => "ternary",
            TheoremId::GeneralBound => "general_bound",
            TheoremId::TimesB => "times_b",
            TheoremId::ApproxConvexityH => "approx_convexity_h",
            TheoremId::Lev => "lev",
        }
    }

    /// Names of the tuple coordinates, in sweep order.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            TheoremId::Superadditivity => &["b", "m", "n"],
            TheoremId::Ternary => &["m", "k", "l"],
            TheoremId::GeneralBound => &["b", "m", "k"],
            TheoremId::TimesB => &["b", "n", "k"],
            TheoremId::ApproxConvexityH => &["b", "level", "m", "k"],
            TheoremId::Lev => &["level", "m", "k", "l"],
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let id = match key.as_str() {
            "superadditivity" => TheoremId::Superadditivity,
            "ternary" => TheoremId::Ternary,
            "general_bound" => TheoremId::GeneralBound,
            "times_b" => TheoremId::TimesB,
            "approx_convexity_h" | "approx_convexity" => TheoremId::ApproxConvexityH,
            "lev" => TheoremId::Lev,
            _ => return Err(Error::UnknownTheorem(s.to_string())),
        };
        Ok(id)
    }
}

/// The tuples a sweep covers. All bounds are inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "theorem", rename_all = "snake_case")]
pub enum SweepSpec {
    /// `b` in `bases`, `0 <= m <= max_m`, `0 <= n <= max_n`.
    Superadditivity { bases: Vec<Base>, max_m: u64, max_n: u64 },
    /// `0 <= l <= k <= m <= max_m`.
    Ternary { max_m: u64 },
    /// `b` in `bases`, `min_k <= k <= m <= max_m`.
    GeneralBound { bases: Vec<Base>, max_m: u64, min_k: u64 },
    /// `b` in `bases`, `0 <= n <= max_n`, `0 <= k <= max_k`.
    TimesB { bases: Vec<Base>, max_n: u64, max_k: u64 },
    /// `b` in `bases`, `0 <= level <= max_level`, `0 <= k <= m`, `m + k <= b^level`.
    ApproxConvexityH { bases: Vec<Base>, max_level: u32 },
    /// `0 <= level <= max_level`, `0 <= l <= k <= m`, `m + k + l <= 3^level`.
    Lev { max_level: u32 },
}

fn bases(list: &[u32]) -> Vec<Base> {
    list.iter().map(|&b| Base::new(b).expect("static base")).collect()
}

impl SweepSpec {
    /// The default range for each theorem.
    pub fn default_for(id: TheoremId) -> Self {
        match id {
            TheoremId::Superadditivity => SweepSpec::Superadditivity {
                bases: bases(&[2, 3, 5, 10]),
                max_m: 500,
                max_n: 500,
            },
            TheoremId::Ternary => SweepSpec::Ternary { max_m: 300 },
            TheoremId::GeneralBound => SweepSpec::GeneralBound {
                bases: bases(&[2, 3, 4, 5, 6, 7, 8, 9, 10]),
                max_m: 500,
                min_k: 0,
            },
            TheoremId::TimesB => SweepSpec::TimesB {
                bases: bases(&[2, 3, 4, 5, 6]),
                max_n: 300,
                max_k: 300,
            },
            TheoremId::ApproxConvexityH => SweepSpec::ApproxConvexityH {
                bases: bases(&[2, 3, 4, 5]),
                max_level: 4,
            },
            TheoremId::Lev => SweepSpec::Lev { max_level: 3 },
        }
    }

    pub fn theorem(&self) -> TheoremId {
        match self {
            SweepSpec::Superadditivity { .. } => TheoremId::Superadditivity,
            SweepSpec::Ternary { .. } => TheoremId::Ternary,
            SweepSpec::GeneralBound { .. } => TheoremId::GeneralBound,
            SweepSpec::TimesB { .. } => TheoremId::TimesB,
            SweepSpec::ApproxConvexityH { .. } => TheoremId::ApproxConvexityH,
            SweepSpec::Lev { .. } => TheoremId::Lev,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let malformed = |msg: String| Err(Error::MalformedRange(msg));
        let check_bases = |bases: &[Base]| {
            if bases.is_empty() {
                return malformed("at least one base is required".into());
            }
            Ok(())
        };
        let check_table = |max: u64| {
            if max > MAX_TABLE {
                return malformed(format!("range needs S_b up to {max}, limit is {MAX_TABLE}"));
            }
            Ok(())
        };
        let check_grid = |b: u32, level: u32| {
            match (b as u64).checked_pow(level) {
                Some(size) if size <= MAX_GRID => Ok(()),
                _ => malformed(format!("grid {b}^{level} exceeds the limit of {MAX_GRID} points")),
            }
        };
        match self {
            SweepSpec::Superadditivity { bases, max_m, max_n } => {
                check_bases(bases)?;
                check_table(max_m.saturating_add(*max_n))
            }
            SweepSpec::Ternary { max_m } => check_table(max_m.saturating_mul(3)),
            SweepSpec::GeneralBound { bases, max_m, min_k } => {
                check_bases(bases)?;
                if min_k > max_m {
                    return malformed(format!("min_k = {min_k} exceeds max_m = {max_m}"));
                }
                check_table(max_m.saturating_mul(2))
            }
            SweepSpec::TimesB { bases, max_n, max_k } => {
                check_bases(bases)?;
                let widest = bases.iter().map(|b| b.get() as u64).max().unwrap_or(2);
                check_table(max_n.saturating_add(widest.saturating_mul(*max_k)))
            }
            SweepSpec::ApproxConvexityH { bases, max_level } => {
                check_bases(bases)?;
                bases.iter().try_for_each(|b| check_grid(b.get(), *max_level))
            }
            SweepSpec::Lev { max_level } => check_grid(3, *max_level),
        }
    }
}

fn list(bases: &[Base]) -> String {
    let v: Vec<String> = bases.iter().map(|b| b.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepSpec::Superadditivity { bases, max_m, max_n } => {
                write!(f, "b in {}, 0 <= m <= {max_m}, 0 <= n <= {max_n}", list(bases))
            }
            SweepSpec::Ternary { max_m } => write!(f, "0 <= l <= k <= m <= {max_m}"),
            SweepSpec::GeneralBound { bases, max_m, min_k } => {
                write!(f, "b in {}, {min_k} <= k <= m <= {max_m}", list(bases))
            }
            SweepSpec::TimesB { bases, max_n, max_k } => {
                write!(f, "b in {}, 0 <= n <= {max_n}, 0 <= k <= {max_k}", list(bases))
            }
            SweepSpec::ApproxConvexityH { bases, max_level } => write!(
                f,
                "b in {}, level <= {max_level}, 0 <= k <= m, m + k <= b^level",
                list(bases)
            ),
            SweepSpec::Lev { max_level } => {
                write!(f, "level <= {max_level}, 0 <= l <= k <= m, m + k + l <= 3^level")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Maximum number of equality witnesses (and counterexamples) listed.
    pub witness_cap: usize,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs inline.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            witness_cap: DEFAULT_WITNESS_CAP,
            jobs: None,
        }
    }
}

fn run_units<U, S, F>(opts: &SweepOptions, units: &[U], eval: F) -> Accumulator<S>
where
    U: Sync,
    S: SlackValue,
    F: Fn(&U, &mut Accumulator<S>) + Sync,
{
    let cap = opts.witness_cap;
    let one = |u: &U| {
        let mut acc = Accumulator::new(cap);
        eval(u, &mut acc);
        acc
    };
    let parallel = || {
        units
            .par_iter()
            .map(one)
            .reduce(|| Accumulator::new(cap), Accumulator::merge)
    };
    match opts.jobs {
        Some(1) => units.iter().map(one).fold(Accumulator::new(cap), Accumulator::merge),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(parallel),
            Err(_) => parallel(),
        },
        None => parallel(),
    }
}

/// Evaluates the slack of `spec`'s inequality on every tuple of its range.
///
/// The report is identical for every choice of `opts.jobs`.
pub fn sweep(spec: &SweepSpec, opts: &SweepOptions) -> Result<VerificationReport> {
    spec.validate()?;
    let id = spec.theorem();
    let report = match spec {
        SweepSpec::Superadditivity { bases, max_m, max_n } => {
            let tables: Vec<SumTable> = bases.iter().map(|&b| SumTable::new(b, max_m + max_n)).collect();
            let units: Vec<(usize, u64)> = (0..bases.len())
                .flat_map(|i| (0..=*max_m).map(move |m| (i, m)))
                .collect();
            run_units(opts, &units, |&(i, m), acc: &mut Accumulator<i64>| {
                let (table, b) = (&tables[i], tables[i].base().get() as u64);
                for n in 0..=*max_n {
                    acc.record(&[b, m, n], superadditivity_with(table, &(m as i64), &(n as i64)));
                }
            })
            .into_report(id, spec.clone())
        }
        SweepSpec::Ternary { max_m } => {
            let table = SumTable::new(Base::TERNARY, 3 * max_m);
            let units: Vec<u64> = (0..=*max_m).collect();
            run_units(opts, &units, |&m, acc: &mut Accumulator<i64>| {
                for k in 0..=m {
                    for l in 0..=k {
                        acc.record(&[m, k, l], ternary_with(&table, &(k as i64), &(l as i64), &(m as i64)));
                    }
                }
            })
            .into_report(id, spec.clone())
        }
        SweepSpec::GeneralBound { bases, max_m, min_k } => {
            let tables: Vec<SumTable> = bases.iter().map(|&b| SumTable::new(b, 2 * max_m)).collect();
            let units: Vec<(usize, u64)> = (0..bases.len())
                .flat_map(|i| (*min_k..=*max_m).map(move |m| (i, m)))
                .collect();
            run_units(opts, &units, |&(i, m), acc: &mut Accumulator<i64>| {
                let (table, b) = (&tables[i], tables[i].base().get() as u64);
                for k in *min_k..=m {
                    acc.record(&[b, m, k], general_bound_with(table, &(m as i64), &(k as i64)));
                }
            })
            .into_report(id, spec.clone())
        }
        SweepSpec::TimesB { bases, max_n, max_k } => {
            let tables: Vec<SumTable> = bases
                .iter()
                .map(|&b| SumTable::new(b, max_n + b.get() as u64 * max_k))
                .collect();
            let units: Vec<(usize, u64)> = (0..bases.len())
                .flat_map(|i| (0..=*max_n).map(move |n| (i, n)))
                .collect();
            run_units(opts, &units, |&(i, n), acc: &mut Accumulator<i64>| {
                let (table, b) = (&tables[i], tables[i].base().get() as u64);
                for k in 0..=*max_k {
                    acc.record(&[b, n, k], times_b_with(table, &(n as i64), &(k as i64)));
                }
            })
            .into_report(id, spec.clone())
        }
        SweepSpec::ApproxConvexityH { bases, max_level } => {
            let units: Vec<(Base, u32, u64)> = bases
                .iter()
                .flat_map(|&b| {
                    (0..=*max_level).flat_map(move |n| (0..=(b.get() as u64).pow(n)).map(move |m| (b, n, m)))
                })
                .collect();
            run_units(opts, &units, |&(b, n, m), acc: &mut Accumulator<Ratio<i64>>| {
                let scale = (b.get() as u64).pow(n);
                for k in 0..=m.min(scale - m) {
                    let slack = approx_convexity_h_slack(&(m as i64), &(k as i64), n, b)
                        .expect("tuple inside the grid");
                    acc.record(&[b.get() as u64, n as u64, m, k], slack);
                }
            })
            .into_report(id, spec.clone())
        }
        SweepSpec::Lev { max_level } => {
            let units: Vec<(u32, u64)> = (0..=*max_level)
                .flat_map(|n| (0..=3u64.pow(n)).map(move |m| (n, m)))
                .collect();
            run_units(opts, &units, |&(n, m), acc: &mut Accumulator<Ratio<i64>>| {
                let scale = 3u64.pow(n);
                for k in 0..=m {
                    for l in 0..=k {
                        if m + k + l > scale {
                            break;
                        }
                        let slack = lev_slack(&(m as i64), &(k as i64), &(l as i64), n)
                            .expect("tuple inside the grid");
                        acc.record(&[n as u64, m, k, l], slack);
                    }
                }
            })
            .into_report(id, spec.clone())
        }
    };
    Ok(report)
}
