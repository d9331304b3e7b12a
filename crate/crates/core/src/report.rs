//! JSON views of the representation and decision results.
//!
//! Every probability is emitted at full precision next to its two-decimal
//! display value; rational values are added as `"p/q"` strings when known.

use indexmap::IndexMap;
use serde::Serialize;

use crate::complex::ComplexContextVector;
use crate::joint::{Arithmetic, EntanglementReport, JointComplexVector, JointTable, Verdict};
use crate::prob::{round_to, ContextId, ProbabilityVector, Rational};
use crate::real::{labelled, MonteCarloOutcome, RealContextVector};

pub const DISPLAY_DECIMALS: u32 = 2;

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn rounded(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&x| round_to(x, DISPLAY_DECIMALS)).collect()
}

fn exact_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityJson {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub rounded: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
}

impl From<&ProbabilityVector> for ProbabilityJson {
    fn from(p: &ProbabilityVector) -> Self {
        Self {
            labels: p.outcomes().labels().to_vec(),
            values: p.probs().to_vec(),
            rounded: p.rounded(DISPLAY_DECIMALS),
            exact: p.exact().map(exact_strings),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealContextJson {
    pub context: ContextId,
    pub v: Vec<f64>,
    pub v_rounded: Vec<f64>,
}

impl From<&RealContextVector> for RealContextJson {
    fn from(v: &RealContextVector) -> Self {
        Self {
            context: v.context().clone(),
            v: v.coords().to_vec(),
            v_rounded: rounded(v.coords()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexContextJson {
    pub context: ContextId,
    pub m: usize,
    pub blocks: Vec<Vec<usize>>,
    pub amplitudes: Vec<ComplexJson>,
    pub probabilities: Vec<f64>,
    pub moduli: Vec<f64>,
    pub moduli_rounded: Vec<f64>,
    pub phases: Vec<f64>,
}

impl From<&ComplexContextVector> for ComplexContextJson {
    fn from(w: &ComplexContextVector) -> Self {
        let moduli = w.moduli();
        Self {
            context: w.context().clone(),
            m: w.family().dim(),
            blocks: w.family().blocks().to_vec(),
            amplitudes: w
                .amplitudes()
                .iter()
                .map(|a| ComplexJson {
                    re: sig12(a.re),
                    im: sig12(a.im),
                })
                .collect(),
            probabilities: w.probabilities(),
            moduli_rounded: rounded(&moduli),
            moduli,
            phases: w.phases().angles().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableJson {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub probabilities: Vec<Vec<f64>>,
    pub rounded: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<Vec<u64>>>,
}

impl From<&JointTable> for TableJson {
    fn from(t: &JointTable) -> Self {
        let matrix = t.matrix();
        Self {
            rows: t.rows().labels().to_vec(),
            cols: t.cols().labels().to_vec(),
            rounded: matrix.iter().map(|r| rounded(r)).collect(),
            probabilities: matrix,
            exact: t
                .exact()
                .map(|e| e.chunks(t.n_cols()).map(exact_strings).collect()),
            counts: t.count_matrix(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointVectorsJson {
    pub basis: Vec<String>,
    pub v: Vec<f64>,
    pub v_rounded: Vec<f64>,
    pub w_moduli: Vec<f64>,
    pub w_moduli_rounded: Vec<f64>,
    pub w_phases: Vec<f64>,
    pub w_amplitudes: Vec<ComplexJson>,
}

impl JointVectorsJson {
    pub fn new(v: &[f64], w: &JointComplexVector) -> Self {
        let moduli = w.moduli();
        Self {
            basis: w.basis_labels(),
            v: v.to_vec(),
            v_rounded: rounded(v),
            w_moduli_rounded: rounded(&moduli),
            w_moduli: moduli,
            w_phases: w.phases().angles().to_vec(),
            w_amplitudes: w
                .amplitudes()
                .iter()
                .map(|a| ComplexJson {
                    re: sig12(a.re),
                    im: sig12(a.im),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalsJson {
    pub row: ProbabilityJson,
    pub col: ProbabilityJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessJson {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    pub row_labels: [String; 2],
    pub col_labels: [String; 2],
    pub minor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minor_exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementJson {
    pub verdict: Verdict,
    pub arithmetic: Arithmetic,
    pub tolerance: f64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_exact: Option<String>,
    pub marginals: MarginalsJson,
    pub witness: Option<WitnessJson>,
}

impl EntanglementJson {
    pub fn new(t: &JointTable, r: &EntanglementReport) -> Self {
        Self {
            verdict: r.verdict,
            arithmetic: r.arithmetic,
            tolerance: r.tolerance,
            residual: r.residual,
            residual_exact: r.residual_exact.as_ref().map(ToString::to_string),
            marginals: MarginalsJson {
                row: (&r.marginals.row).into(),
                col: (&r.marginals.col).into(),
            },
            witness: r.witness.as_ref().map(|w| WitnessJson {
                rows: [w.rows.0, w.rows.1],
                cols: [w.cols.0, w.cols.1],
                row_labels: [t.rows().label(w.rows.0).into(), t.rows().label(w.rows.1).into()],
                col_labels: [t.cols().label(w.cols.0).into(), t.cols().label(w.cols.1).into()],
                minor: w.minor,
                minor_exact: w.minor_exact.as_ref().map(ToString::to_string),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloJson {
    pub context: ContextId,
    pub trials: u64,
    pub seed: u64,
    pub frequencies: IndexMap<String, f64>,
    pub boundary_hits: u64,
    pub target: IndexMap<String, f64>,
    pub max_abs_deviation: f64,
    pub three_sigma_bounds: IndexMap<String, f64>,
    pub pass: bool,
}

impl MonteCarloJson {
    pub fn new(v: &RealContextVector, mc: &MonteCarloOutcome) -> Self {
        let outcomes = v.outcomes();
        Self {
            context: v.context().clone(),
            trials: mc.trials,
            seed: mc.seed,
            frequencies: labelled(outcomes, &mc.frequencies),
            boundary_hits: mc.boundary_hits,
            target: labelled(outcomes, v.coords()),
            max_abs_deviation: mc.max_abs_deviation(v.coords()),
            three_sigma_bounds: labelled(outcomes, &mc.three_sigma_bounds(v.coords())),
            pass: mc.within_three_sigma(v.coords()),
        }
    }
}
