//! Error types for dataset ingestion, numeric primitives, and evaluation.

use thiserror::Error;

/// Errors raised while loading or assembling the datasets.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {path}:{row}: {message}")]
    Parse {
        path: String,
        row: usize,
        message: String,
    },
    #[error("{path}:{row}: food '{food_id}' has {kind} vector of length {found}, expected {expected}")]
    DimensionMismatch {
        path: String,
        row: usize,
        food_id: String,
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{row}: non-finite value in {kind} vector of food '{food_id}'")]
    NonFiniteValue {
        path: String,
        row: usize,
        food_id: String,
        kind: &'static str,
    },
    #[error("{path}:{row}: duplicate food id '{food_id}'")]
    DuplicateFoodId {
        path: String,
        row: usize,
        food_id: String,
    },
    #[error("{path}:{row}: duplicate interaction for worker '{worker_id}' and food '{food_id}'")]
    DuplicateInteraction {
        path: String,
        row: usize,
        worker_id: String,
        food_id: String,
    },
    #[error("{path}:{row}: unknown evaluation option code {code}, expected 1-4")]
    UnknownOptionCode { path: String, row: usize, code: String },
    #[error("{path}:{row}: food id '{food_id}' does not resolve to any known food")]
    UnresolvableFoodId {
        path: String,
        row: usize,
        food_id: String,
    },
    #[error("worker '{worker_id}' not present in the interaction data")]
    UnknownWorker { worker_id: String },
    #[error("worker '{worker_id}' has only {found} history foods, scoring requires at least 3")]
    InsufficientHistory { worker_id: String, found: usize },
    #[error("worker '{worker_id}' has no interaction record for candidate food '{food_id}'")]
    MissingInteraction { worker_id: String, food_id: String },
}

/// Errors raised by the dimensionality-reduction and density primitives.
#[derive(Debug, Error)]
pub enum NumericError {
    #[error("{context}: got {found} points, need at least {needed}")]
    TooFewPoints {
        context: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("degenerate input: all points are identical, no principal directions exist")]
    DegenerateInput,
    #[error("non-finite value in input vectors")]
    NonFiniteInput,
    #[error("input vectors must share one dimension: found {found}, expected {expected}")]
    MixedDimensions { expected: usize, found: usize },
    #[error("fixed bandwidth must be positive, got {0}")]
    NonpositiveBandwidth(f64),
    #[error("degenerate history: mean internal distance is zero (all history points coincide)")]
    DegenerateHistory,
}

/// Errors raised by the metric and statistics layer.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("K={k} out of range for a ranking of {len} items")]
    KOutOfRange { k: usize, len: usize },
    #[error("recall and NDCG need at least one relevant item")]
    NoRelevantItems,
    #[error("invalid counts: N={n}, R={r}, K={k}")]
    InvalidCounts { n: usize, r: usize, k: usize },
    #[error("ROC needs at least one positive and one negative label")]
    SingleClassInput,
    #[error("ROC averaging needs at least one curve")]
    NoCurves,
    #[error("fewer than 5 usable pairs: {found} nonzero differences")]
    TooFewPairs { found: usize },
    #[error("region {region} has no evaluable users")]
    NoEvaluableUsers { region: String },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
