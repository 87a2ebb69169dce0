use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the monitoring-design library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter or structure violates a precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A file could not be parsed. `line` is 1-based.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("flow {flow} ({source_node} -> {dest_node}) has no route: endpoints are disconnected")]
    Route {
        flow: usize,
        source_node: usize,
        dest_node: usize,
    },

    /// Projection along a direction whose squared norm is at or below the degeneracy threshold.
    #[error("degenerate projection direction (squared norm {norm_sq:e})")]
    DegenerateDirection { norm_sq: f64 },

    /// The Gram matrix of the observed rows is numerically singular.
    #[error("observed links {observed:?} are linearly dependent (redundant selection)")]
    RedundantSelection { observed: Vec<usize> },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An audited error fell below its PCA lower bound; this signals a defect, not a data problem.
    #[error("step {k}: error {error:e} is below the PCA lower bound {bound:e}")]
    BoundViolation { k: usize, error: f64, bound: f64 },

    #[error("{algorithm} does not support the {criterion} criterion")]
    UnsupportedCriterion {
        algorithm: &'static str,
        criterion: &'static str,
    },

    /// Exhaustive search refused because the subset count exceeds the guard.
    #[error("exhaustive search over {count} subsets exceeds the limit of {limit}")]
    TooManySubsets { count: u128, limit: u128 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
