//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by construction, decomposition, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension {dim} is not a power of {base}")]
    NotPowerOf { base: usize, dim: usize },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("expectation value has imaginary residue {residue:.3e} exceeding 1e-10")]
    ImaginaryResidue { residue: f64 },

    #[error("eigensolver failed to converge after {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("basis index {index} outside 1..=9")]
    BasisIndexOutOfRange { index: u8 },

    #[error("outcome basis for party {party}, setting {setting} is not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal {
        party: usize,
        setting: usize,
        deviation: f64,
    },

    #[error("deterministic strategy enumeration needs {required:.3e} strategies, budget is {budget:.3e}")]
    EnumerationBudget { required: f64, budget: f64 },

    #[error("no embedding satisfies the matrix-element equalities within {tolerance:.0e} (residual {residual:.3e})")]
    NoEmbedding { residual: f64, tolerance: f64 },

    #[error("no pairwise anticommuting representatives exist for the set {{{set}}}")]
    NoWitness { set: String },

    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("functional and settings disagree: {detail}")]
    ArityMismatch { detail: String },

    #[error("a Bell functional cannot mix probability and correlation terms")]
    MixedTermKinds,

    #[error("invalid Bell functional: {detail}")]
    InvalidFunctional { detail: String },

    #[error("{count} Pauli terms do not fit the CHSH/Mermin block structure (first: {first})")]
    UnclassifiedTerms { count: usize, first: String },

    #[error("invalid serialized value: {detail}")]
    InvalidData { detail: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
