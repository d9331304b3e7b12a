//! Python bindings for the representation and entanglement toolkit.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ctxrep_core::complex as cx;
use ctxrep_core::io;
use ctxrep_core::joint::{self, Arithmetic, Verdict};
use ctxrep_core::prob::{self, OutcomeSet};
use ctxrep_core::real::{self, OutcomeResolution};
use ctxrep_core::report::{EntanglementJson, TableJson};
use ctxrep_core::scenarios;

fn err(e: ctxrep_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn context(entity: &str, state: &str, measurement: &str) -> PyResult<prob::ContextId> {
    prob::ContextId::new(entity, state, measurement).map_err(err)
}

fn arithmetic(name: Option<&str>) -> PyResult<Option<Arithmetic>> {
    match name {
        None => Ok(None),
        Some("exact") => Ok(Some(Arithmetic::Exact)),
        Some("float") => Ok(Some(Arithmetic::Float)),
        Some(other) => Err(PyValueError::new_err(format!(
            "arithmetic must be 'exact' or 'float', got {other:?}"
        ))),
    }
}

/// Outcome probabilities, exact when built from counts.
#[pyclass(name = "ProbabilityVector", module = "ctxrep", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProbabilityVector {
    inner: prob::ProbabilityVector,
}

#[pymethods]
impl PyProbabilityVector {
    #[staticmethod]
    fn from_floats(labels: Vec<String>, probs: Vec<f64>) -> PyResult<Self> {
        let outcomes = OutcomeSet::new(labels).map_err(err)?;
        let inner = prob::ProbabilityVector::from_floats(outcomes, probs).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.outcomes().labels().to_vec()
    }

    #[getter]
    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    /// Exact values as `"p/q"` strings, or `None` for float-only vectors.
    #[getter]
    fn exact(&self) -> Option<Vec<String>> {
        self.inner.exact().map(|e| e.iter().map(ToString::to_string).collect())
    }

    #[pyo3(signature = (decimals = 2))]
    fn rounded(&self, decimals: u32) -> Vec<f64> {
        self.inner.rounded(decimals)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("ProbabilityVector({:?}, {:?})", self.labels(), self.probs())
    }
}

/// Counts given as a dict `{label: count}` (insertion order kept) or a list
/// of `(label, count)` pairs.
#[pyfunction]
fn probabilities_from_counts(counts: &Bound<'_, PyAny>) -> PyResult<PyProbabilityVector> {
    let pairs: Vec<(String, u64)> = match counts.cast::<PyDict>() {
        Ok(d) => d
            .iter()
            .map(|(k, v)| Ok((k.extract::<String>()?, v.extract::<u64>()?)))
            .collect::<PyResult<_>>()?,
        Err(_) => counts.extract()?,
    };
    let table = prob::CountTable::from_pairs(pairs).map_err(err)?;
    Ok(PyProbabilityVector {
        inner: prob::probabilities_from_counts(&table),
    })
}

#[pyclass(name = "RealContext", module = "ctxrep", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRealContext {
    inner: real::RealContextVector,
}

#[pymethods]
impl PyRealContext {
    #[getter]
    fn v(&self) -> Vec<f64> {
        self.inner.coords().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.outcomes().labels().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("RealContext({}, v={:?})", self.inner.context(), self.inner.coords())
    }
}

#[pyfunction]
#[pyo3(signature = (p, entity = "entity", state = "p", measurement = "e"))]
fn build_real_context(
    p: &PyProbabilityVector,
    entity: &str,
    state: &str,
    measurement: &str,
) -> PyResult<PyRealContext> {
    Ok(PyRealContext {
        inner: real::build_real_context(&p.inner, context(entity, state, measurement)?),
    })
}

/// `("deterministic", j)` or `("boundary", [tied indices])`.
#[pyfunction]
#[pyo3(signature = (v, lam, tol = real::DEFAULT_TIE_TOLERANCE))]
fn classify_hidden_variable<'py>(
    py: Python<'py>,
    v: &PyRealContext,
    lam: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let lambda = real::HiddenVariable::new(lam).map_err(err)?;
    let out = match real::classify_hidden_variable(&v.inner, &lambda, tol).map_err(err)? {
        OutcomeResolution::Deterministic(j) => ("deterministic", j).into_pyobject(py)?.into_any(),
        OutcomeResolution::Boundary(tied) => ("boundary", tied).into_pyobject(py)?.into_any(),
    };
    Ok(out)
}

#[pyfunction]
fn region_measure_ratio(v: &PyRealContext, j: usize) -> PyResult<f64> {
    real::region_measure_ratio(&v.inner, j).map_err(err)
}

#[pyfunction]
fn sample_hidden_variables(n: usize, count: u64, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    Ok(ctxrep_core::sample_hidden_variables(n, count, seed)
        .map_err(err)?
        .map(|l| l.components().to_vec())
        .collect())
}

#[pyfunction]
fn monte_carlo_measurement<'py>(
    py: Python<'py>,
    v: &PyRealContext,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let mc = real::monte_carlo_measurement(&v.inner, trials, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("trials", mc.trials)?;
    d.set_item("seed", mc.seed)?;
    d.set_item("counts", mc.counts.clone())?;
    d.set_item("frequencies", mc.frequencies.clone())?;
    d.set_item("boundary_hits", mc.boundary_hits)?;
    d.set_item("max_abs_deviation", mc.max_abs_deviation(v.inner.coords()))?;
    d.set_item("pass", mc.within_three_sigma(v.inner.coords()))?;
    Ok(d)
}

#[pyclass(name = "ComplexContext", module = "ctxrep", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyComplexContext {
    inner: cx::ComplexContextVector,
}

#[pymethods]
impl PyComplexContext {
    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    #[getter]
    fn moduli(&self) -> Vec<f64> {
        self.inner.moduli()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner.family().blocks().to_vec()
    }

    #[getter]
    fn phases(&self) -> Vec<f64> {
        self.inner.phases().angles().to_vec()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn __repr__(&self) -> String {
        format!("ComplexContext({}, m={})", self.inner.context(), self.inner.family().dim())
    }
}

/// Blocks default to rank one; `block_sizes` gives consecutive blocks and
/// `blocks` an explicit partition of `0..m`. Phases default to zero.
#[pyfunction]
#[pyo3(signature = (p, block_sizes = None, blocks = None, phases = None, entity = "entity", state = "p", measurement = "e"))]
#[allow(clippy::too_many_arguments)]
fn build_complex_context(
    p: &PyProbabilityVector,
    block_sizes: Option<Vec<usize>>,
    blocks: Option<Vec<Vec<usize>>>,
    phases: Option<Vec<f64>>,
    entity: &str,
    state: &str,
    measurement: &str,
) -> PyResult<PyComplexContext> {
    let family = match (block_sizes, blocks) {
        (Some(_), Some(_)) => {
            return Err(PyValueError::new_err("give either block_sizes or blocks, not both"))
        }
        (Some(sizes), None) => cx::BlockSpectralFamily::contiguous(&sizes),
        (None, Some(blocks)) => {
            let m = blocks.iter().map(Vec::len).sum();
            cx::BlockSpectralFamily::new(m, blocks)
        }
        (None, None) => cx::BlockSpectralFamily::rank_one(p.inner.len()),
    }
    .map_err(err)?;
    let phases = match phases {
        Some(a) => cx::PhaseAssignment::new(a).map_err(err)?,
        None => cx::PhaseAssignment::zeros(family.dim()),
    };
    let inner = cx::build_complex_context(&p.inner, family, phases, context(entity, state, measurement)?)
        .map_err(err)?;
    Ok(PyComplexContext { inner })
}

#[pyfunction]
fn born_probability(w: &PyComplexContext, k: usize) -> PyResult<f64> {
    cx::born_probability(&w.inner, k).map_err(err)
}

#[pyfunction]
fn apply_projector(w: &PyComplexContext, k: usize) -> PyResult<Vec<Complex64>> {
    cx::apply_projector(&w.inner, k).map_err(err)
}

#[pyclass(name = "JointTable", module = "ctxrep", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyJointTable {
    inner: joint::JointTable,
}

#[pymethods]
impl PyJointTable {
    #[staticmethod]
    fn from_counts(rows: Vec<String>, cols: Vec<String>, counts: Vec<Vec<u64>>) -> PyResult<Self> {
        let rows = OutcomeSet::new(rows).map_err(err)?;
        let cols = OutcomeSet::new(cols).map_err(err)?;
        Ok(Self {
            inner: joint::JointTable::from_counts(rows, cols, counts).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_floats(rows: Vec<String>, cols: Vec<String>, probs: Vec<Vec<f64>>) -> PyResult<Self> {
        let rows = OutcomeSet::new(rows).map_err(err)?;
        let cols = OutcomeSet::new(cols).map_err(err)?;
        Ok(Self {
            inner: joint::JointTable::from_floats(rows, cols, probs).map_err(err)?,
        })
    }

    /// Parses `row_label,col_label,count` CSV or `{rows, cols, counts}` JSON.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_joint_counts(text).map_err(err)?,
        })
    }

    #[getter]
    fn rows(&self) -> Vec<String> {
        self.inner.rows().labels().to_vec()
    }

    #[getter]
    fn cols(&self) -> Vec<String> {
        self.inner.cols().labels().to_vec()
    }

    #[getter]
    fn probs(&self) -> Vec<Vec<f64>> {
        self.inner.matrix()
    }

    fn basis_labels(&self) -> Vec<String> {
        self.inner.basis_labels()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&TableJson::from(&self.inner)).expect("table serializes")
    }

    fn __repr__(&self) -> String {
        format!("JointTable(rows={:?}, cols={:?}, probs={:?})", self.rows(), self.cols(), self.probs())
    }
}

#[pyclass(name = "EntanglementReport", module = "ctxrep", frozen)]
struct PyEntanglementReport {
    table: joint::JointTable,
    inner: joint::EntanglementReport,
}

#[pymethods]
impl PyEntanglementReport {
    /// `"Product"` or `"Entangled"`.
    #[getter]
    fn verdict(&self) -> &'static str {
        match self.inner.verdict {
            Verdict::Product => "Product",
            Verdict::Entangled => "Entangled",
        }
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }

    #[getter]
    fn arithmetic(&self) -> &'static str {
        match self.inner.arithmetic {
            Arithmetic::Exact => "exact",
            Arithmetic::Float => "float",
        }
    }

    #[getter]
    fn marginals(&self) -> (PyProbabilityVector, PyProbabilityVector) {
        (
            PyProbabilityVector {
                inner: self.inner.marginals.row.clone(),
            },
            PyProbabilityVector {
                inner: self.inner.marginals.col.clone(),
            },
        )
    }

    /// `((j, j'), (k, k'), minor)` or `None` for product states.
    #[getter]
    fn witness(&self) -> Option<((usize, usize), (usize, usize), f64)> {
        self.inner.witness.as_ref().map(|w| (w.rows, w.cols, w.minor))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&EntanglementJson::new(&self.table, &self.inner)).expect("report serializes")
    }

    fn __repr__(&self) -> String {
        format!("EntanglementReport({}, residual={})", self.verdict(), self.inner.residual)
    }
}

/// Defaults: exact arithmetic with zero tolerance on rational tables,
/// float arithmetic with 1e-9 otherwise.
#[pyfunction]
#[pyo3(signature = (t, tol = None, arithmetic = None))]
fn is_product(t: &PyJointTable, tol: Option<f64>, arithmetic: Option<&str>) -> PyResult<PyEntanglementReport> {
    let mode = self::arithmetic(arithmetic)?.unwrap_or(t.inner.arithmetic());
    let tol = tol.unwrap_or(match mode {
        Arithmetic::Exact => 0.0,
        Arithmetic::Float => joint::DEFAULT_FLOAT_TOLERANCE,
    });
    let inner = joint::is_product_with(&t.inner, tol, mode).map_err(err)?;
    Ok(PyEntanglementReport {
        table: t.inner.clone(),
        inner,
    })
}

#[pyfunction]
fn marginals(t: &PyJointTable) -> (PyProbabilityVector, PyProbabilityVector) {
    let m = joint::marginals(&t.inner);
    (PyProbabilityVector { inner: m.row }, PyProbabilityVector { inner: m.col })
}

#[pyfunction]
fn factorization_certificate(t: &PyJointTable) -> Option<(PyProbabilityVector, PyProbabilityVector)> {
    joint::factorization_certificate(&t.inner)
        .map(|(a, b)| (PyProbabilityVector { inner: a }, PyProbabilityVector { inner: b }))
}

#[pyfunction]
fn tensor_product_real(v1: &PyRealContext, v2: &PyRealContext) -> PyJointTable {
    PyJointTable {
        inner: joint::tensor_product_real(&v1.inner, &v2.inner),
    }
}

/// Amplitudes over the tensor basis, row-major.
#[pyfunction]
fn tensor_product_complex(w1: &PyComplexContext, w2: &PyComplexContext) -> PyResult<Vec<Complex64>> {
    Ok(joint::tensor_product_complex(&w1.inner, &w2.inner)
        .map_err(err)?
        .amplitudes()
        .to_vec())
}

/// `(v, w)`: real coordinates and complex amplitudes over the tensor basis.
#[pyfunction]
#[pyo3(signature = (t, phases = None))]
fn build_joint_vectors(t: &PyJointTable, phases: Option<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<Complex64>)> {
    let phases = match phases {
        Some(a) => cx::PhaseAssignment::new(a).map_err(err)?,
        None => cx::PhaseAssignment::zeros(t.inner.probs().len()),
    };
    let (v, w) = joint::build_joint_vectors(&t.inner, &phases).map_err(err)?;
    Ok((v, w.amplitudes().to_vec()))
}

#[pyfunction]
fn animal_acts_tables() -> (PyProbabilityVector, PyProbabilityVector, PyJointTable) {
    let (e, f, g) = scenarios::animal_acts_tables();
    (
        PyProbabilityVector { inner: e },
        PyProbabilityVector { inner: f },
        PyJointTable { inner: g },
    )
}

/// Outcome counts keyed `"MM"`, `"ML"`, `"LM"`, `"LL"` (left vessel first).
#[pyfunction]
#[pyo3(signature = (mode, trials, seed, capacity = 20.0, threshold = 10.0))]
fn simulate_vessels<'py>(
    py: Python<'py>,
    mode: &str,
    trials: u64,
    seed: u64,
    capacity: f64,
    threshold: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = scenarios::VesselsConfig {
        capacity,
        threshold,
        mode: mode.parse().map_err(err)?,
        trials,
        seed,
    };
    let c = scenarios::simulate_vessels(&cfg).map_err(err)?;
    let d = PyDict::new(py);
    for (k, v) in [("MM", c.mm), ("ML", c.ml), ("LM", c.lm), ("LL", c.ll)] {
        d.set_item(k, v)?;
    }
    Ok(d)
}

#[pyfunction]
fn vessels_joint_table(counts: &Bound<'_, PyDict>) -> PyResult<PyJointTable> {
    let get = |k: &str| -> PyResult<u64> {
        counts
            .get_item(k)?
            .map(|v| v.extract::<u64>())
            .transpose()
            .map(|v| v.unwrap_or(0))
    };
    let c = scenarios::VesselsOutcomeCounts {
        mm: get("MM")?,
        ml: get("ML")?,
        lm: get("LM")?,
        ll: get("LL")?,
    };
    Ok(PyJointTable {
        inner: scenarios::vessels_joint_table(&c).map_err(err)?,
    })
}

/// Contextual real/complex representations, hidden-measurement simulation
/// and product/entangled decisions for joint outcome tables.
#[pymodule]
fn ctxrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProbabilityVector>()?;
    m.add_class::<PyRealContext>()?;
    m.add_class::<PyComplexContext>()?;
    m.add_class::<PyJointTable>()?;
    m.add_class::<PyEntanglementReport>()?;
    m.add_function(wrap_pyfunction!(probabilities_from_counts, m)?)?;
    m.add_function(wrap_pyfunction!(build_real_context, m)?)?;
    m.add_function(wrap_pyfunction!(classify_hidden_variable, m)?)?;
    m.add_function(wrap_pyfunction!(region_measure_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sample_hidden_variables, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_measurement, m)?)?;
    m.add_function(wrap_pyfunction!(build_complex_context, m)?)?;
    m.add_function(wrap_pyfunction!(born_probability, m)?)?;
    m.add_function(wrap_pyfunction!(apply_projector, m)?)?;
    m.add_function(wrap_pyfunction!(is_product, m)?)?;
    m.add_function(wrap_pyfunction!(marginals, m)?)?;
    m.add_function(wrap_pyfunction!(factorization_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_product_real, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_product_complex, m)?)?;
    m.add_function(wrap_pyfunction!(build_joint_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(animal_acts_tables, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_vessels, m)?)?;
    m.add_function(wrap_pyfunction!(vessels_joint_table, m)?)?;
    Ok(())
}
