//! Joint outcome tables, tensor products and the product/entangled decision.
//!
//! A joint distribution over `n × n′` outcomes is a product state exactly
//! when its probability matrix has rank one. Any factorization `a ⊗ b` must
//! use the marginals (summing `a_j b_k` over `k` gives `a_j`), so the test
//! compares the table with the outer product of its marginals. When it
//! fails, the largest 2×2 minor is reported as an explicit obstruction.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::complex::{ComplexContextVector, PhaseAssignment};
use crate::error::{Error, Result};
use crate::prob::{rational, rational_to_f64, OutcomeSet, ProbabilityVector, Rational, SUM_TOLERANCE};
use crate::real::RealContextVector;

/// Tolerance used by [`is_product`] on float-only tables.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Joint probabilities `μ((x_j, y_k))`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    rows: OutcomeSet,
    cols: OutcomeSet,
    probs: Vec<f64>,
    exact: Option<Vec<Rational>>,
    counts: Option<Vec<u64>>,
}

fn check_shape<T>(rows: &OutcomeSet, cols: &OutcomeSet, data: &[Vec<T>]) -> Result<()> {
    if data.len() != rows.len() {
        return Err(Error::InvalidTable(format!(
            "{} rows of data for {} row outcomes",
            data.len(),
            rows.len()
        )));
    }
    if let Some((j, row)) = data.iter().enumerate().find(|(_, r)| r.len() != cols.len()) {
        return Err(Error::InvalidTable(format!(
            "row {j} has {} entries, expected {}",
            row.len(),
            cols.len()
        )));
    }
    Ok(())
}

impl JointTable {
    pub fn from_counts(rows: OutcomeSet, cols: OutcomeSet, counts: Vec<Vec<u64>>) -> Result<Self> {
        check_shape(&rows, &cols, &counts)?;
        let flat: Vec<u64> = counts.into_iter().flatten().collect();
        let total = flat
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::InvalidCounts("total overflows u64".into()))?;
        if total == 0 {
            return Err(Error::InvalidCounts("counts sum to zero".into()));
        }
        let exact: Vec<Rational> = flat.iter().map(|&c| rational(c, total)).collect();
        Ok(Self {
            probs: exact.iter().map(rational_to_f64).collect(),
            rows,
            cols,
            exact: Some(exact),
            counts: Some(flat),
        })
    }

    pub fn from_exact(rows: OutcomeSet, cols: OutcomeSet, probs: Vec<Vec<Rational>>) -> Result<Self> {
        check_shape(&rows, &cols, &probs)?;
        let flat: Vec<Rational> = probs.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|p| p.is_negative() || **p > Rational::from_integer(1.into())) {
            return Err(Error::InvalidTable(format!("entry {bad} is not in [0, 1]")));
        }
        let sum: Rational = flat.iter().sum();
        if sum != Rational::from_integer(1.into()) {
            return Err(Error::InvalidTable(format!("entries sum to {sum}")));
        }
        Ok(Self {
            probs: flat.iter().map(rational_to_f64).collect(),
            rows,
            cols,
            exact: Some(flat),
            counts: None,
        })
    }

    pub fn from_floats(rows: OutcomeSet, cols: OutcomeSet, probs: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&rows, &cols, &probs)?;
        let flat: Vec<f64> = probs.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidTable(format!("entry {bad} is not in [0, 1]")));
        }
        let sum: f64 = flat.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidTable(format!("entries sum to {sum}")));
        }
        Ok(Self {
            rows,
            cols,
            probs: flat,
            exact: None,
            counts: None,
        })
    }

    pub fn rows(&self) -> &OutcomeSet {
        &self.rows
    }

    pub fn cols(&self) -> &OutcomeSet {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn prob(&self, j: usize, k: usize) -> f64 {
        self.probs[j * self.n_cols() + k]
    }

    /// Row-major entries; index `j·n′ + k` is basis vector `h_jk`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.probs.chunks(self.n_cols()).map(<[f64]>::to_vec).collect()
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn exact_prob(&self, j: usize, k: usize) -> Option<&Rational> {
        self.exact.as_ref().map(|e| &e[j * self.n_cols() + k])
    }

    pub fn counts(&self) -> Option<&[u64]> {
        self.counts.as_deref()
    }

    pub fn count_matrix(&self) -> Option<Vec<Vec<u64>>> {
        self.counts
            .as_ref()
            .map(|c| c.chunks(self.n_cols()).map(<[u64]>::to_vec).collect())
    }

    pub fn total(&self) -> Option<u64> {
        self.counts.as_ref().map(|c| c.iter().sum())
    }

    pub fn arithmetic(&self) -> Arithmetic {
        if self.exact.is_some() {
            Arithmetic::Exact
        } else {
            Arithmetic::Float
        }
    }

    /// Labels of the tensor basis `h_jk`, row label followed by column label.
    pub fn basis_labels(&self) -> Vec<String> {
        basis_labels(&self.rows, &self.cols)
    }
}

pub fn basis_labels(rows: &OutcomeSet, cols: &OutcomeSet) -> Vec<String> {
    rows.labels()
        .iter()
        .flat_map(|r| cols.labels().iter().map(move |c| format!("{r}{c}")))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    pub row: ProbabilityVector,
    pub col: ProbabilityVector,
}

pub fn marginals(t: &JointTable) -> Marginals {
    let (n, m) = (t.n_rows(), t.n_cols());
    if let Some(exact) = t.exact() {
        let row: Vec<Rational> = (0..n).map(|j| exact[j * m..(j + 1) * m].iter().sum()).collect();
        let col: Vec<Rational> = (0..m).map(|k| (0..n).map(|j| &exact[j * m + k]).sum()).collect();
        return Marginals {
            row: ProbabilityVector::from_exact(t.rows.clone(), row).expect("row sums of a valid table"),
            col: ProbabilityVector::from_exact(t.cols.clone(), col).expect("column sums of a valid table"),
        };
    }
    let row: Vec<f64> = (0..n).map(|j| t.probs[j * m..(j + 1) * m].iter().sum()).collect();
    let col: Vec<f64> = (0..m).map(|k| (0..n).map(|j| t.probs[j * m + k]).sum()).collect();
    Marginals {
        row: float_vector(t.rows.clone(), row),
        col: float_vector(t.cols.clone(), col),
    }
}

// Sums of a validated table are in range up to rounding; clamp instead of
// re-validating.
fn float_vector(outcomes: OutcomeSet, values: Vec<f64>) -> ProbabilityVector {
    let values = values.into_iter().map(|x| x.clamp(0.0, 1.0)).collect();
    ProbabilityVector::from_floats(outcomes, values).expect("marginal of a valid table")
}

/// `probs[j][k] = v1[j]·v2[k]`, exact when both inputs are.
pub fn tensor_product_real(v1: &RealContextVector, v2: &RealContextVector) -> JointTable {
    outer_product(v1.probabilities(), v2.probabilities())
}

pub fn outer_product(a: &ProbabilityVector, b: &ProbabilityVector) -> JointTable {
    let probs = a
        .probs()
        .iter()
        .flat_map(|&x| b.probs().iter().map(move |&y| x * y))
        .collect();
    let exact = match (a.exact(), b.exact()) {
        (Some(ea), Some(eb)) => Some(ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect()),
        _ => None,
    };
    JointTable {
        rows: a.outcomes().clone(),
        cols: b.outcomes().clone(),
        probs,
        exact,
        counts: None,
    }
}

/// One 2×2 minor `p[j][k]·p[j′][k′] − p[j][k′]·p[j′][k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorWitness {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub minor: f64,
    #[serde(skip)]
    pub minor_exact: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Product,
    Entangled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub verdict: Verdict,
    pub marginals: Marginals,
    /// `max |p[j][k] − row[j]·col[k]|`.
    pub residual: f64,
    pub residual_exact: Option<Rational>,
    pub witness: Option<MinorWitness>,
    pub tolerance: f64,
    pub arithmetic: Arithmetic,
}

impl EntanglementReport {
    pub fn is_product(&self) -> bool {
        self.verdict == Verdict::Product
    }
}

fn float_minor(t: &JointTable, (j, jj): (usize, usize), (k, kk): (usize, usize)) -> f64 {
    t.prob(j, k) * t.prob(jj, kk) - t.prob(j, kk) * t.prob(jj, k)
}

fn exact_minor(e: &[Rational], m: usize, (j, jj): (usize, usize), (k, kk): (usize, usize)) -> Rational {
    &e[j * m + k] * &e[jj * m + kk] - &e[j * m + kk] * &e[jj * m + k]
}

fn index_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Minor of largest magnitude; ties keep the first in `(j, j′, k, k′)`
/// lexicographic order.
pub fn largest_minor(t: &JointTable, arithmetic: Arithmetic) -> Option<MinorWitness> {
    let m = t.n_cols();
    let mut best: Option<MinorWitness> = None;
    for rows in index_pairs(t.n_rows()) {
        for cols in index_pairs(m) {
            let candidate = match (arithmetic, t.exact()) {
                (Arithmetic::Exact, Some(e)) => {
                    let exact = exact_minor(e, m, rows, cols);
                    MinorWitness {
                        rows,
                        cols,
                        minor: rational_to_f64(&exact),
                        minor_exact: Some(exact),
                    }
                }
                _ => MinorWitness {
                    rows,
                    cols,
                    minor: float_minor(t, rows, cols),
                    minor_exact: None,
                },
            };
            let better = match (&best, &candidate.minor_exact) {
                (None, _) => true,
                (Some(b), Some(ce)) => ce.abs() > b.minor_exact.as_ref().expect("exact witness").abs(),
                (Some(b), None) => candidate.minor.abs() > b.minor.abs(),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best
}

/// Product test with the default regime: exact zero tolerance when the
/// table carries rational entries, [`DEFAULT_FLOAT_TOLERANCE`] otherwise.
pub fn is_product_default(t: &JointTable) -> EntanglementReport {
    match t.arithmetic() {
        Arithmetic::Exact => is_product(t, 0.0),
        Arithmetic::Float => is_product(t, DEFAULT_FLOAT_TOLERANCE),
    }
}

/// Product test in the table's own arithmetic.
pub fn is_product(t: &JointTable, tol: f64) -> EntanglementReport {
    is_product_with(t, tol, t.arithmetic()).expect("table supports its own arithmetic")
}

pub fn is_product_with(t: &JointTable, tol: f64, arithmetic: Arithmetic) -> Result<EntanglementReport> {
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::InvalidConfig(format!("tolerance {tol} must be finite and nonnegative")));
    }
    let m = t.n_cols();
    let (verdict, residual, residual_exact, marg) = match (arithmetic, t.exact()) {
        (Arithmetic::Exact, Some(e)) => {
            let marg = marginals(t);
            let (a, b) = (marg.row.exact().expect("exact"), marg.col.exact().expect("exact"));
            let residual = (0..t.n_rows())
                .flat_map(|j| (0..m).map(move |k| (j, k)))
                .map(|(j, k)| (&e[j * m + k] - &a[j] * &b[k]).abs())
                .max()
                .unwrap_or_else(Rational::zero);
            let tol_exact = BigRational::from_float(tol).expect("finite tolerance");
            let verdict = if residual <= tol_exact {
                Verdict::Product
            } else {
                Verdict::Entangled
            };
            (verdict, rational_to_f64(&residual), Some(residual), marg)
        }
        (Arithmetic::Exact, None) => {
            return Err(Error::InvalidConfig(
                "exact arithmetic requested for a table without rational entries".into(),
            ))
        }
        (Arithmetic::Float, _) => {
            let float_table = JointTable {
                exact: None,
                counts: None,
                ..t.clone()
            };
            let marg = marginals(&float_table);
            let (a, b) = (marg.row.probs(), marg.col.probs());
            let residual = (0..t.n_rows())
                .flat_map(|j| (0..m).map(move |k| (j, k)))
                .map(|(j, k)| (t.prob(j, k) - a[j] * b[k]).abs())
                .fold(0.0, f64::max);
            let verdict = if residual <= tol {
                Verdict::Product
            } else {
                Verdict::Entangled
            };
            (verdict, residual, None, marg)
        }
    };
    let witness = match verdict {
        Verdict::Product => None,
        Verdict::Entangled => largest_minor(t, arithmetic),
    };
    Ok(EntanglementReport {
        verdict,
        marginals: marg,
        residual,
        residual_exact,
        witness,
        tolerance: tol,
        arithmetic,
    })
}

/// Returns the factor pair `(row marginals, column marginals)` when the
/// table is a product state.
///
/// Rational tables are decided exactly by requiring every 2×2 minor to
/// vanish. Float tables use [`DEFAULT_FLOAT_TOLERANCE`] on the residual.
pub fn factorization_certificate(t: &JointTable) -> Option<(ProbabilityVector, ProbabilityVector)> {
    let product = match t.exact() {
        Some(e) => {
            let m = t.n_cols();
            index_pairs(t.n_rows())
                .all(|rows| index_pairs(m).all(|cols| exact_minor(e, m, rows, cols).is_zero()))
        }
        None => is_product(t, DEFAULT_FLOAT_TOLERANCE).is_product(),
    };
    product.then(|| {
        let Marginals { row, col } = marginals(t);
        (row, col)
    })
}

/// Amplitudes over the tensor basis `h_jk`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointComplexVector {
    amplitudes: Vec<Complex64>,
    phases: PhaseAssignment,
    rows: OutcomeSet,
    cols: OutcomeSet,
}

impl JointComplexVector {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm()).collect()
    }

    pub fn phases(&self) -> &PhaseAssignment {
        &self.phases
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        basis_labels(&self.rows, &self.cols)
    }

    pub fn rows(&self) -> &OutcomeSet {
        &self.rows
    }

    pub fn cols(&self) -> &OutcomeSet {
        &self.cols
    }
}

/// `a_jk = a_j·a′_k`; phases add. Both factors must use rank-1 families.
pub fn tensor_product_complex(
    w1: &ComplexContextVector,
    w2: &ComplexContextVector,
) -> Result<JointComplexVector> {
    if !w1.family().is_rank_one() || !w2.family().is_rank_one() {
        return Err(Error::UnsupportedFamily);
    }
    let amplitudes = w1
        .amplitudes()
        .iter()
        .flat_map(|a| w2.amplitudes().iter().map(move |b| a * b))
        .collect();
    let alpha = w1
        .phases()
        .angles()
        .iter()
        .flat_map(|a| w2.phases().angles().iter().map(move |b| a + b))
        .collect();
    Ok(JointComplexVector {
        amplitudes,
        phases: PhaseAssignment::new(alpha)?,
        rows: w1.outcomes().clone(),
        cols: w2.outcomes().clone(),
    })
}

/// Real vector `Σ p_jk h_jk` and complex vector `Σ √p_jk e^{iα_jk} h_jk`.
pub fn build_joint_vectors(
    t: &JointTable,
    phases: &PhaseAssignment,
) -> Result<(Vec<f64>, JointComplexVector)> {
    if phases.len() != t.probs().len() {
        return Err(Error::InvalidPhases(format!(
            "{} phases for {} basis vectors",
            phases.len(),
            t.probs().len()
        )));
    }
    let amplitudes = t
        .probs()
        .iter()
        .zip(phases.angles())
        .map(|(&p, &a)| Complex64::from_polar(p.sqrt(), a))
        .collect();
    Ok((
        t.probs().to_vec(),
        JointComplexVector {
            amplitudes,
            phases: phases.clone(),
            rows: t.rows.clone(),
            cols: t.cols.clone(),
        },
    ))
}
