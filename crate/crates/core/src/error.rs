//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong when constructing or analysing states,
/// measurements and assemblages.
#[derive(Debug, Clone, Error)]
pub enum SteerError {
    /// An entry fed to a public constructor was NaN or infinite.
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    /// Entry buffer length does not match the declared dimension.
    #[error("entry count {got} does not match dimension {dim} (expected {expected})")]
    EntryCount { dim: usize, expected: usize, got: usize },

    /// Two operands (or an operator and a state) live on different spaces.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A tensor product would exceed the configured dimension cap.
    #[error("dimension {requested} exceeds the maximum supported dimension {max}")]
    DimensionOverflow { requested: usize, max: usize },

    /// A subsystem factorization is inconsistent with the matrix it describes.
    #[error("factorization {dims:?} has total {total}, expected {expected}")]
    InconsistentFactorization { dims: Vec<usize>, total: usize, expected: usize },

    /// A subsystem index is out of range for the factorization.
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemIndex { index: usize, count: usize },

    /// Hermiticity check failed.
    #[error("matrix is not Hermitian: max |M_ij - conj(M_ji)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// Positive semi-definiteness check failed.
    #[error("matrix is not positive semi-definite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Unit-trace check failed.
    #[error("trace is {trace:.12}, expected 1 within tolerance")]
    TraceNotOne { trace: f64 },

    /// Normalisation check failed.
    #[error("vector norm is {norm:.12}, expected 1 within tolerance")]
    NotNormalized { norm: f64 },

    /// The zero vector was supplied where a state vector is required.
    #[error("zero vector cannot be normalised")]
    ZeroVector,

    /// Unitarity check failed.
    #[error("matrix is not unitary: max |(U\u{2020}U - I)_ij| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    /// A parameter is outside its admissible range.
    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    /// An effect has a negative eigenvalue.
    #[error("effect {index} is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    EffectNotPsd { index: usize, min_eigenvalue: f64 },

    /// An effect exceeds the identity.
    #[error("effect {index} exceeds the identity (max eigenvalue {max_eigenvalue:.12})")]
    EffectExceedsIdentity { index: usize, max_eigenvalue: f64 },

    /// POVM completeness failed: the effects do not sum to the identity.
    #[error(
        "effects do not sum to identity: Frobenius deviation {deviation:.3e}, \
         worst direction eigenvalue {worst_eigenvalue:.3e}"
    )]
    IncompleteMeasurement { deviation: f64, worst_eigenvalue: f64 },

    /// PVM vectors are not orthonormal.
    #[error("PVM vectors {i} and {j} are not orthonormal: |<a_i|a_j> - d_ij| = {deviation:.3e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },

    /// A PVM does not contain exactly `dim` vectors.
    #[error("non-degenerate PVM needs {dim} vectors, got {got}")]
    PvmSize { dim: usize, got: usize },

    /// A steered outcome that was required to be pure is mixed.
    #[error("outcome {index} steers to a mixed state: purity deficit {deficit:.3e} exceeds tolerance")]
    NonPureOutcome { index: usize, deficit: f64 },

    /// A premise of an orthogonal-complete family check is violated.
    #[error("family premise violated: {detail}")]
    PremiseViolation { detail: String },

    /// A conclusion guaranteed by the theory failed numerically; this
    /// indicates a bug (or a counterexample) and is never expected.
    #[error("internal consistency check failed: {detail}")]
    InternalInconsistency { detail: String },

    /// A steering target is not reachable as a pure steered state.
    #[error("target state is not reachable as a pure steered state (p_max = {p_max:.3e})")]
    UnreachableTarget { p_max: f64 },

    /// LHS ensemble weights do not form a probability distribution.
    #[error("ensemble weights sum to {total:.12}, expected 1")]
    EnsembleWeights { total: f64 },

    /// A response-function row is empty or does not sum to one.
    #[error("response row (x={x}, xi={xi}) invalid: {detail}")]
    ResponseRow { x: usize, xi: usize, detail: String },

    /// Response function shape does not match the assemblage it should explain.
    #[error("response shape mismatch: {detail}")]
    ResponseShape { detail: String },

    /// The deterministic strategy expansion would be too large.
    #[error("deterministic model needs {requested} hidden labels, cap is {max}")]
    ModelTooLarge { requested: usize, max: usize },

    /// A JSON document violates the interchange schema. The detail names the
    /// offending entry.
    #[error("schema violation: {detail}")]
    Schema { detail: String },
}

impl SteerError {
    /// True for errors raised while decoding JSON documents, as opposed to
    /// analysis preconditions.
    pub fn is_schema_violation(&self) -> bool {
        matches!(self, SteerError::Schema { .. })
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SteerError>;
