use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::sweep::{SweepSpec, TheoremId};
use crate::ExactRational;

/// Exact slack types a sweep can aggregate.
pub(crate) trait SlackValue: Clone + Ord + Send + Sync {
    fn is_zero_slack(&self) -> bool;
    fn is_negative_slack(&self) -> bool;
    fn to_exact(&self) -> ExactRational;
}

impl SlackValue for i64 {
    fn is_zero_slack(&self) -> bool {
        *self == 0
    }

    fn is_negative_slack(&self) -> bool {
        *self < 0
    }

    fn to_exact(&self) -> ExactRational {
        ExactRational::from_integer(BigInt::from(*self))
    }
}

impl SlackValue for Ratio<i64> {
    fn is_zero_slack(&self) -> bool {
        self.is_zero()
    }

    fn is_negative_slack(&self) -> bool {
        self.is_negative()
    }

    fn to_exact(&self) -> ExactRational {
        ExactRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Running aggregate over a set of tuples.
///
/// Merging is associative and commutative: the minimum is taken over
/// `(slack, tuple)` pairs and the witness lists are sorted before capping,
/// so any partition of the range yields the same final state.
#[derive(Clone, Debug)]
pub(crate) struct Accumulator<S> {
    cap: usize,
    checked: u64,
    min: Option<(S, Vec<u64>)>,
    equality_count: u64,
    equalities: Vec<Vec<u64>>,
    counterexample_count: u64,
    counterexamples: Vec<(Vec<u64>, S)>,
}

impl<S: SlackValue> Accumulator<S> {
    pub(crate) fn new(cap: usize) -> Self {
        Accumulator {
            cap,
            checked: 0,
            min: None,
            equality_count: 0,
            equalities: Vec::new(),
            counterexample_count: 0,
            counterexamples: Vec::new(),
        }
    }

    /// Records one tuple. Within one accumulator, tuples must arrive in
    /// increasing lexicographic order so capping keeps the smallest.
    pub(crate) fn record(&mut self, tuple: &[u64], slack: S) {
        self.checked += 1;
        if slack.is_zero_slack() {
            self.equality_count += 1;
            if self.equalities.len() < self.cap {
                self.equalities.push(tuple.to_vec());
            }
        } else if slack.is_negative_slack() {
            self.counterexample_count += 1;
            if self.counterexamples.len() < self.cap {
                self.counterexamples.push((tuple.to_vec(), slack.clone()));
            }
        }
        let better = match &self.min {
            None => true,
            Some((s, t)) => slack < *s || (slack == *s && tuple < t.as_slice()),
        };
        if better {
            self.min = Some((slack, tuple.to_vec()));
        }
    }

    pub(crate) fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.min = match (self.min.take(), other.min) {
            (None, m) | (m, None) => m,
            (Some(a), Some(b)) => Some(if (&b.0, &b.1) < (&a.0, &a.1) { b } else { a }),
        };
        self.equality_count += other.equality_count;
        self.equalities.extend(other.equalities);
        self.equalities.sort_unstable();
        self.equalities.truncate(self.cap);
        self.counterexample_count += other.counterexample_count;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        self.counterexamples.truncate(self.cap);
        self
    }

    pub(crate) fn into_report(self, theorem_id: TheoremId, range: SweepSpec) -> VerificationReport {
        VerificationReport {
            theorem_id,
            parameters: theorem_id.parameters().iter().map(|s| s.to_string()).collect(),
            range,
            checked: self.checked,
            min_slack: self.min.map(|(slack, at)| MinSlack {
                slack: slack.to_exact(),
                at,
            }),
            equality_count: self.equality_count,
            witnesses: self.equalities,
            counterexample_count: self.counterexample_count,
            counterexamples: self
                .counterexamples
                .into_iter()
                .map(|(at, slack)| Counterexample {
                    at,
                    slack: slack.to_exact(),
                })
                .collect(),
            witness_cap: self.cap,
        }
    }
}

fn rational_str<S: Serializer>(q: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinSlack {
    #[serde(serialize_with = "rational_str")]
    pub slack: ExactRational,
    pub at: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub at: Vec<u64>,
    #[serde(serialize_with = "rational_str")]
    pub slack: ExactRational,
}

/// Outcome of a sweep. Tuples list values in the order of `parameters`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem_id: TheoremId,
    pub range: SweepSpec,
    pub parameters: Vec<String>,
    pub checked: u64,
    pub min_slack: Option<MinSlack>,
    pub equality_count: u64,
    /// Smallest equality witnesses, at most `witness_cap` of them.
    pub witnesses: Vec<Vec<u64>>,
    pub counterexample_count: u64,
    pub counterexamples: Vec<Counterexample>,
    pub witness_cap: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexample_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn has_witness(&self, tuple: &[u64]) -> bool {
        self.witnesses.binary_search_by(|w| w.as_slice().cmp(tuple)).is_ok()
    }

    fn fmt_tuple(&self, tuple: &[u64]) -> String {
        let parts: Vec<String> = self
            .parameters
            .iter()
            .zip(tuple)
            .map(|(p, v)| format!("{p}={v}"))
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem: {}", self.theorem_id)?;
        writeln!(f, "range: {}", self.range)?;
        writeln!(f, "checked: {}", self.checked)?;
        match &self.min_slack {
            Some(m) => writeln!(f, "min slack: {} at {}", m.slack, self.fmt_tuple(&m.at))?,
            None => writeln!(f, "min slack: none")?,
        }
        writeln!(
            f,
            "equality witnesses: {} (listing {})",
            self.equality_count,
            self.witnesses.len()
        )?;
        for w in self.witnesses.iter().take(10) {
            writeln!(f, "  {}", self.fmt_tuple(w))?;
        }
        if self.witnesses.len() > 10 {
            writeln!(f, "  ...")?;
        }
        writeln!(f, "counterexamples: {}", self.counterexample_count)?;
        for c in &self.counterexamples {
            writeln!(f, "  {} slack {}", self.fmt_tuple(&c.at), c.slack)?;
        }
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc_from(tuples: &[(u64, i64)], cap: usize) -> Accumulator<i64> {
        let mut acc = Accumulator::new(cap);
        for &(t, s) in tuples {
            acc.record(&[t], s);
        }
        acc
    }

    #[test]
    fn merge_is_partition_independent() {
        let data: Vec<(u64, i64)> = (0..40).map(|t| (t, ((t * 7) % 5) as i64 - 1)).collect();
        let whole = acc_from(&data, 3);
        let spec = SweepSpec::Ternary { max_m: 0 };
        let expected = whole.into_report(TheoremId::Ternary, spec.clone());
        for split in [1usize, 7, 13, 39] {
            let (a, b) = data.split_at(split);
            let merged = acc_from(b, 3).merge(acc_from(a, 3));
            assert_eq!(merged.into_report(TheoremId::Ternary, spec.clone()), expected);
        }
        assert_eq!(expected.min_slack.as_ref().unwrap().slack, ExactRational::from_integer((-1).into()));
        assert_eq!(expected.witnesses.len(), 3);
        assert!(!expected.passed());
    }
}
