//! Contextual representations of measurement situations.
//!
//! Given the outcome probabilities of one measurement on one state, the crate
//! builds the real-simplex representation (with its hidden-variable
//! micro-dynamics) and the complex Hilbert representation (with block
//! projectors and Born-rule recovery). For two measurements performed
//! jointly it builds tensor-product representations and decides whether a
//! joint distribution is a product state or an entangled one, returning a
//! 2×2-minor witness in the latter case.

pub mod complex;
pub mod error;
pub mod io;
pub mod joint;
pub mod prob;
pub mod real;
pub mod report;
pub mod sampling;
pub mod scenarios;

pub use complex::{
    apply_projector, born_probability, build_complex_context, build_complex_context_default,
    BlockSpectralFamily, ComplexContextVector, PhaseAssignment,
};
pub use error::{Error, Result};
pub use joint::{
    build_joint_vectors, factorization_certificate, is_product, is_product_default, is_product_with,
    marginals, tensor_product_complex, tensor_product_real, Arithmetic, EntanglementReport,
    JointComplexVector, JointTable, Marginals, MinorWitness, Verdict,
};
pub use prob::{probabilities_from_counts, ContextId, CountTable, OutcomeSet, ProbabilityVector, Rational};
pub use real::{
    build_real_context, classify_hidden_variable, monte_carlo_measurement, region_measure_ratio,
    HiddenVariable, MonteCarloOutcome, OutcomeResolution, RealContextVector,
};
pub use sampling::sample_hidden_variables;
pub use scenarios::{
    animal_acts_tables, simulate_vessels, vessels_joint_table, AnimalActsDataset, VesselsConfig,
    VesselsMode, VesselsOutcomeCounts,
};
