//! Complex Hilbert representation with diagonal block projectors.
//!
//! A spectral family is stored as a partition of the ambient indices
//! `0..m` into `n` blocks; projector `M_k` keeps the amplitudes in block `k`
//! and zeroes the rest.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::prob::{ContextId, OutcomeSet, ProbabilityVector};

/// Partition of `0..m` into `n` nonempty blocks, `n ≤ m ≤ n²`, each block
/// of size at most `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpectralFamily {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockSpectralFamily {
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = blocks.len();
        if n == 0 {
            return Err(Error::InvalidFamily("at least one block is required".into()));
        }
        if m < n || m > n * n {
            return Err(Error::InvalidFamily(format!(
                "ambient dimension {m} outside [{n}, {}]",
                n * n
            )));
        }
        let mut seen = vec![false; m];
        for (k, block) in blocks.iter().enumerate() {
            if block.is_empty() || block.len() > n {
                return Err(Error::InvalidFamily(format!(
                    "block {k} has size {}, expected 1..={n}",
                    block.len()
                )));
            }
            for &j in block {
                if j >= m {
                    return Err(Error::InvalidFamily(format!("index {j} outside 0..{m}")));
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::InvalidFamily(format!("index {j} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidFamily(format!("index {missing} is not covered")));
        }
        Ok(Self { m, blocks })
    }

    /// `m = n`, block `k = {k}`.
    pub fn rank_one(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|k| vec![k]).collect())
    }

    /// Consecutive blocks with the given sizes.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&b| {
                let block: Vec<usize> = (start..start + b).collect();
                start += b;
                block
            })
            .collect();
        Self::new(start, blocks)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> Result<&[usize]> {
        self.blocks.get(k).map(Vec::as_slice).ok_or(Error::IndexOutOfRange {
            index: k,
            len: self.blocks.len(),
        })
    }

    pub fn is_rank_one(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Block index owning each ambient index.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.m];
        for (k, block) in self.blocks.iter().enumerate() {
            for &j in block {
                owner[j] = k;
            }
        }
        owner
    }
}

/// Phase angle per ambient index, reduced to `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment {
    alpha: Vec<f64>,
}

impl PhaseAssignment {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if let Some(bad) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidPhases(format!("phase {bad} is not finite")));
        }
        Ok(Self {
            alpha: alpha.into_iter().map(|a| a.rem_euclid(TAU)).collect(),
        })
    }

    pub fn zeros(m: usize) -> Self {
        Self { alpha: vec![0.0; m] }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.alpha
    }
}

/// State vector `w(e,p)` in `C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexContextVector {
    amplitudes: Vec<Complex64>,
    family: BlockSpectralFamily,
    phases: PhaseAssignment,
    outcomes: OutcomeSet,
    context: ContextId,
}

impl ComplexContextVector {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm()).collect()
    }

    pub fn family(&self) -> &BlockSpectralFamily {
        &self.family
    }

    pub fn phases(&self) -> &PhaseAssignment {
        &self.phases
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn context(&self) -> &ContextId {
        &self.context
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities of every outcome, in outcome order.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.family.n_blocks())
            .map(|k| block_weight(&self.amplitudes, &self.family.blocks[k]))
            .collect()
    }
}

fn block_weight(amplitudes: &[Complex64], block: &[usize]) -> f64 {
    block.iter().map(|&j| amplitudes[j].norm_sqr()).sum()
}

/// `a_j = √(μ_k / b_k)·e^{iα_j}` for every index `j` of block `k`, so each
/// block carries weight `μ_k`.
pub fn build_complex_context(
    p: &ProbabilityVector,
    family: BlockSpectralFamily,
    phases: PhaseAssignment,
    ctx: ContextId,
) -> Result<ComplexContextVector> {
    if family.n_blocks() != p.len() {
        return Err(Error::FamilyMismatch {
            family: family.n_blocks(),
            outcomes: p.len(),
        });
    }
    if phases.len() != family.dim() {
        return Err(Error::InvalidPhases(format!(
            "{} phases for ambient dimension {}",
            phases.len(),
            family.dim()
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); family.dim()];
    for (k, block) in family.blocks().iter().enumerate() {
        let modulus = (p.get(k) / block.len() as f64).sqrt();
        for &j in block {
            amplitudes[j] = Complex64::from_polar(modulus, phases.angles()[j]);
        }
    }
    Ok(ComplexContextVector {
        amplitudes,
        family,
        phases,
        outcomes: p.outcomes().clone(),
        context: ctx,
    })
}

/// Rank-1 family with zero phases.
pub fn build_complex_context_default(
    p: &ProbabilityVector,
    ctx: ContextId,
) -> Result<ComplexContextVector> {
    let family = BlockSpectralFamily::rank_one(p.len())?;
    build_complex_context(p, family, PhaseAssignment::zeros(p.len()), ctx)
}

/// `⟨w|M_k|w⟩`.
pub fn born_probability(w: &ComplexContextVector, k: usize) -> Result<f64> {
    Ok(block_weight(&w.amplitudes, w.family.block(k)?))
}

/// `M_k w`.
pub fn apply_projector(w: &ComplexContextVector, k: usize) -> Result<Vec<Complex64>> {
    project(&w.amplitudes, &w.family, k)
}

/// `M_k x` for an arbitrary ambient vector.
pub fn project(
    amplitudes: &[Complex64],
    family: &BlockSpectralFamily,
    k: usize,
) -> Result<Vec<Complex64>> {
    let block = family.block(k)?;
    let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
    for &j in block {
        out[j] = amplitudes[j];
    }
    Ok(out)
}
