//! Real-simplex representation and the hidden-measurement micro-dynamics.
//!
//! The state is the point `v` of the outcome simplex whose barycentric
//! coordinates are the outcome probabilities. Region `A_j` is the simplex
//! with vertex `h_j` replaced by `v`. A hidden variable `λ` in the interior
//! of `A_j` produces outcome `j` with certainty.
//!
//! Writing `λ = t·v + Σ_{k≠j} c_k h_k` gives `t = λ_j / v_j` and
//! `c_k = λ_k - t·v_k`, so `λ ∈ A_j` iff `λ_j / v_j ≤ λ_k / v_k` for all `k`.
//! Classification is therefore an argmin over coordinate ratios.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{ContextId, OutcomeSet, ProbabilityVector, Rational, SUM_TOLERANCE};
use crate::sampling::{chunks, fill_uniform_simplex, substream};

/// Default tie tolerance between coordinate ratios.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-12;

/// Point `v(e,p)` of the outcome simplex for one measurement context.
#[derive(Debug, Clone, PartialEq)]
pub struct RealContextVector {
    probs: ProbabilityVector,
    context: ContextId,
}

impl RealContextVector {
    pub fn coords(&self) -> &[f64] {
        self.probs.probs()
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.probs
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        self.probs.outcomes()
    }

    pub fn context(&self) -> &ContextId {
        &self.context
    }
}

pub fn build_real_context(p: &ProbabilityVector, ctx: ContextId) -> RealContextVector {
    RealContextVector {
        probs: p.clone(),
        context: ctx,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenVariable {
    lambda: Vec<f64>,
}

impl HiddenVariable {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidHiddenVariable("empty vector".into()));
        }
        if let Some(bad) = lambda.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidHiddenVariable(format!("component {bad} is not in [0, 1]")));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidHiddenVariable(format!("components sum to {sum}")));
        }
        Ok(Self { lambda })
    }

    pub(crate) fn new_unchecked(lambda: Vec<f64>) -> Self {
        Self { lambda }
    }

    pub fn components(&self) -> &[f64] {
        &self.lambda
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeResolution {
    Deterministic(usize),
    /// `λ` lies on a face shared by the regions of these outcomes.
    Boundary(Vec<usize>),
}

pub fn classify_hidden_variable(
    v: &RealContextVector,
    lambda: &HiddenVariable,
    tol: f64,
) -> Result<OutcomeResolution> {
    if lambda.components().len() != v.dim() {
        return Err(Error::InvalidHiddenVariable(format!(
            "dimension {} does not match context dimension {}",
            lambda.components().len(),
            v.dim()
        )));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance {tol} must be nonnegative")));
    }
    Ok(classify_coords(v.coords(), lambda.components(), tol))
}

/// Ratio-argmin rule on raw slices. Outcomes with `v_k = 0` have ratio `+∞`
/// when `λ_k > 0`; when `λ_k = 0` the ratio is indeterminate and the outcome
/// joins the tied set.
pub fn classify_coords(v: &[f64], lambda: &[f64], tol: f64) -> OutcomeResolution {
    let mut best = f64::INFINITY;
    let mut best_k = usize::MAX;
    let mut indeterminate = false;
    for (k, (&vk, &lk)) in v.iter().zip(lambda).enumerate() {
        if vk > 0.0 {
            let r = lk / vk;
            if r < best {
                best = r;
                best_k = k;
            }
        } else if lk == 0.0 {
            indeterminate = true;
        }
    }
    if !indeterminate {
        let unique = v.iter().zip(lambda).enumerate().all(|(k, (&vk, &lk))| {
            k == best_k || vk <= 0.0 || lk / vk - best > tol
        });
        if unique {
            return OutcomeResolution::Deterministic(best_k);
        }
    }
    let tied: Vec<usize> = v
        .iter()
        .zip(lambda)
        .enumerate()
        .filter(|&(_, (&vk, &lk))| {
            if vk > 0.0 {
                lk / vk - best <= tol
            } else {
                lk == 0.0
            }
        })
        .map(|(k, _)| k)
        .collect();
    OutcomeResolution::Boundary(tied)
}

/// `m(A_j) / m(S_n)`.
///
/// The simplex volume is proportional to the determinant of its vertex
/// matrix. Replacing column `h_j` of the identity by `v` leaves a matrix whose
/// determinant is `v_j`, so the ratio is the `j`-th barycentric coordinate.
pub fn region_measure_ratio(v: &RealContextVector, j: usize) -> Result<f64> {
    v.coords().get(j).copied().ok_or(Error::IndexOutOfRange {
        index: j,
        len: v.dim(),
    })
}

/// Exact region ratio when `v` was built from rational probabilities.
pub fn region_measure_ratio_exact(v: &RealContextVector, j: usize) -> Result<Option<Rational>> {
    if j >= v.dim() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: v.dim(),
        });
    }
    Ok(v.probabilities().exact().map(|e| e[j].clone()))
}

/// Outcome frequencies of the micro-dynamics over uniformly sampled `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloOutcome {
    pub trials: u64,
    pub seed: u64,
    /// Deterministic resolutions per outcome.
    pub counts: Vec<u64>,
    pub boundary_hits: u64,
    /// `counts / (trials - boundary_hits)`.
    pub frequencies: Vec<f64>,
}

impl MonteCarloOutcome {
    pub fn resolved(&self) -> u64 {
        self.trials - self.boundary_hits
    }

    pub fn max_abs_deviation(&self, target: &[f64]) -> f64 {
        self.frequencies
            .iter()
            .zip(target)
            .map(|(f, t)| (f - t).abs())
            .fold(0.0, f64::max)
    }

    /// Per-outcome 3σ binomial bound `3·√(p(1-p)/N)` around `target`.
    pub fn three_sigma_bounds(&self, target: &[f64]) -> Vec<f64> {
        let n = self.resolved().max(1) as f64;
        target
            .iter()
            .map(|&p| 3.0 * (p * (1.0 - p) / n).sqrt())
            .collect()
    }

    pub fn within_three_sigma(&self, target: &[f64]) -> bool {
        self.frequencies
            .iter()
            .zip(target)
            .zip(self.three_sigma_bounds(target))
            .all(|((f, t), b)| (f - t).abs() <= b)
    }
}

pub fn monte_carlo_measurement(
    v: &RealContextVector,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloOutcome> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let n = v.dim();
    let coords = v.coords();
    let (counts, boundary_hits) = chunks(trials)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(stream, len)| {
            let mut rng = substream(seed, stream);
            let mut lambda = vec![0.0; n];
            let mut counts = vec![0u64; n];
            let mut boundary = 0u64;
            for _ in 0..len {
                fill_uniform_simplex(&mut rng, &mut lambda);
                match classify_coords(coords, &lambda, DEFAULT_TIE_TOLERANCE) {
                    OutcomeResolution::Deterministic(j) => counts[j] += 1,
                    OutcomeResolution::Boundary(_) => boundary += 1,
                }
            }
            (counts, boundary)
        })
        .reduce(
            || (vec![0u64; n], 0),
            |(mut a, ba), (b, bb)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (a, ba + bb)
            },
        );
    let resolved = trials - boundary_hits;
    if resolved == 0 {
        return Err(Error::InvalidConfig("every trial fell on a region boundary".into()));
    }
    let frequencies = counts.iter().map(|&c| c as f64 / resolved as f64).collect();
    Ok(MonteCarloOutcome {
        trials,
        seed,
        counts,
        boundary_hits,
        frequencies,
    })
}

/// Labelled view of a frequency vector.
pub fn labelled(outcomes: &OutcomeSet, values: &[f64]) -> IndexMap<String, f64> {
    outcomes
        .labels()
        .iter()
        .cloned()
        .zip(values.iter().copied())
        .collect()
}
