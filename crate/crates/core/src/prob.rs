//! Outcome sets, raw counts and probability vectors.
//!
//! Probabilities built from counts keep their exact rational value next to
//! the `f64` materialization, so product tests on count data can be decided
//! without rounding.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Tolerance on `Σ probs = 1` for float-only vectors.
pub const SUM_TOLERANCE: f64 = 1e-12;

pub fn rational(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rounds half away from zero to `decimals` places, the way tabulated
/// probabilities are usually printed.
pub fn round_to(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}

/// Ordered, duplicate-free outcome labels. Position `j` is basis index `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct OutcomeSet {
    labels: Vec<String>,
}

impl OutcomeSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidOutcomes("at least one outcome is required".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidOutcomes(format!("duplicate label {label:?}")));
            }
        }
        Ok(Self { labels })
    }

    /// Outcomes named `0`, `1`, ... `n-1`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|j| j.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Nonnegative counts per outcome with a strictly positive total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    outcomes: OutcomeSet,
    counts: Vec<u64>,
    total: u64,
}

impl CountTable {
    pub fn new(outcomes: OutcomeSet, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != outcomes.len() {
            return Err(Error::InvalidCounts(format!(
                "{} counts for {} outcomes",
                counts.len(),
                outcomes.len()
            )));
        }
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::InvalidCounts("total overflows u64".into()))?;
        if total == 0 {
            return Err(Error::InvalidCounts("counts sum to zero".into()));
        }
        Ok(Self {
            outcomes,
            counts,
            total,
        })
    }

    /// Builds a table from `(label, count)` pairs in the given order.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let (labels, counts): (Vec<String>, Vec<u64>) =
            pairs.into_iter().map(|(l, c)| (l.into(), c)).unzip();
        Self::new(OutcomeSet::new(labels)?, counts)
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let counts = self
            .counts
            .iter()
            .map(|&c| c.checked_mul(factor))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidCounts("scaled counts overflow u64".into()))?;
        Self::new(self.outcomes.clone(), counts)
    }
}

/// A point of the outcome simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    outcomes: OutcomeSet,
    probs: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

impl ProbabilityVector {
    /// Float-only vector; entries must lie in `[0, 1]` and sum to one within
    /// [`SUM_TOLERANCE`].
    pub fn from_floats(outcomes: OutcomeSet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != outcomes.len() {
            return Err(Error::InvalidProbabilities(format!(
                "{} probabilities for {} outcomes",
                probs.len(),
                outcomes.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbabilities(format!("{bad} is not in [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        Ok(Self {
            outcomes,
            probs,
            exact: None,
        })
    }

    /// Exact vector; entries must lie in `[0, 1]` and sum to exactly one.
    pub fn from_exact(outcomes: OutcomeSet, exact: Vec<Rational>) -> Result<Self> {
        if exact.len() != outcomes.len() {
            return Err(Error::InvalidProbabilities(format!(
                "{} probabilities for {} outcomes",
                exact.len(),
                outcomes.len()
            )));
        }
        let one = Rational::one();
        if let Some(bad) = exact.iter().find(|p| p.is_negative() || **p > one) {
            return Err(Error::InvalidProbabilities(format!("{bad} is not in [0, 1]")));
        }
        let sum: Rational = exact.iter().sum();
        if sum != one {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        let probs = exact.iter().map(rational_to_f64).collect();
        Ok(Self {
            outcomes,
            probs,
            exact: Some(exact),
        })
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, j: usize) -> f64 {
        self.probs[j]
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn rounded(&self, decimals: u32) -> Vec<f64> {
        self.probs.iter().map(|&p| round_to(p, decimals)).collect()
    }

    /// Drops the exact representation, keeping the floats.
    pub fn to_float(&self) -> Self {
        Self {
            outcomes: self.outcomes.clone(),
            probs: self.probs.clone(),
            exact: None,
        }
    }
}

/// `probs[j] = counts[j] / total`, held exactly.
pub fn probabilities_from_counts(counts: &CountTable) -> ProbabilityVector {
    let exact: Vec<Rational> = counts
        .counts()
        .iter()
        .map(|&c| rational(c, counts.total()))
        .collect();
    ProbabilityVector::from_exact(counts.outcomes().clone(), exact)
        .expect("count ratios always form a valid distribution")
}

/// Opaque labels for the entity, its state and the measurement performed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ContextId {
    pub entity: String,
    pub state: String,
    pub measurement: String,
}

impl ContextId {
    pub fn new(
        entity: impl Into<String>,
        state: impl Into<String>,
        measurement: impl Into<String>,
    ) -> Result<Self> {
        let id = Self {
            entity: entity.into(),
            state: state.into(),
            measurement: measurement.into(),
        };
        for (name, value) in [
            ("entity", &id.entity),
            ("state", &id.state),
            ("measurement", &id.measurement),
        ] {
            if value.is_empty() {
                return Err(Error::InvalidContext(format!("{name} must be nonempty")));
            }
        }
        Ok(id)
    }
}

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.entity, self.state, self.measurement)
    }
}
