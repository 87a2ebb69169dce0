//! Monitoring-link selection for network kriging.
//!
//! Given a routing matrix `A` (links x flows), choose `K` links to observe so
//! that loads on the remaining links are predicted with minimal error, under
//! either the trace or the spectral criterion.

pub mod bounds;
pub mod design;
pub mod error;
pub mod heuristics;
pub mod linalg;
pub mod topology;

pub use bounds::{certify, pca_spectral_bound, pca_trace_bound, BoundCurve, CertificateReport};
pub use design::{
    effective_matrix, error_covariance_direct, kriging_predict, objective, simulate_traffic,
    unweight_prediction, weight_loads, Criterion, ErrorCovariance, KrigingPrediction,
    MonitoringProblem, TrafficSample,
};
pub use error::{Error, Result};
pub use heuristics::{
    ensemble, exhaustive, fge, fgp, fgr, naive_greedy, pcaph, run, AlgorithmKind, AlgorithmSpec,
    EnsembleResult, EnsembleSpec, SelectionResult,
};
pub use linalg::DenseMatrix;
pub use topology::{RoutingMatrix, Topology};
