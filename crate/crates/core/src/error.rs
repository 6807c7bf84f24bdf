use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must contain at least one token")]
    EmptyAlphabet,

    #[error("invalid alphabet token {token:?}: {reason}")]
    BadToken { token: String, reason: String },

    #[error("duplicate alphabet token {0:?}")]
    DuplicateToken(String),

    #[error("sequences must contain at least one symbol")]
    EmptySequence,

    #[error("substitution matrix is invalid: {0}")]
    BadCostMatrix(String),

    #[error("deletion cost must be nonnegative, got {0}")]
    NegativeDeletionCost(f64),

    #[error("source sequence (len {source_len}) must be at least as long as the target (len {target_len})")]
    SourceShorterThanTarget { source_len: usize, target_len: usize },

    #[error("aligned rows must have equal length ({alpha} vs {beta})")]
    RowLengthMismatch { alpha: usize, beta: usize },

    #[error("partial-distance matrix is inconsistent at cell ({e}, {s})")]
    InconsistentMatrix { e: usize, s: usize },

    #[error("cannot pick {k} centroids from {m} sequences")]
    TooFewSequences { k: usize, m: usize },

    #[error("cluster count must be at least 1")]
    ZeroClusters,

    #[error("cluster is empty; cannot build a centroid")]
    EmptyCluster,

    #[error("invalid generator spec: {0}")]
    BadGenSpec(String),

    #[error("dataset generation failed: {0}")]
    GenerationFailed(String),

    #[error("label matching supports at most {max} clusters, got {k}")]
    TooManyClusters { k: usize, max: usize },

    #[error("evaluation inputs are inconsistent: {0}")]
    BadEvalInput(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
