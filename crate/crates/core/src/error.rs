use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the representation and entanglement routines.
///
/// `Parse` is the only variant that describes malformed input text; every
/// other variant is a semantic violation of a value invariant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid counts: {0}")]
    InvalidCounts(String),

    #[error("invalid outcome set: {0}")]
    InvalidOutcomes(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid hidden variable: {0}")]
    InvalidHiddenVariable(String),

    #[error("spectral family has {family} blocks but the distribution has {outcomes} outcomes")]
    FamilyMismatch { family: usize, outcomes: usize },

    #[error("invalid spectral family: {0}")]
    InvalidFamily(String),

    #[error("invalid phase assignment: {0}")]
    InvalidPhases(String),

    #[error("tensor product requires rank-1 spectral families")]
    UnsupportedFamily,

    #[error("outcome index {index} out of range for {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid joint table: {0}")]
    InvalidTable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
