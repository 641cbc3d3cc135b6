//! Variance-based sensitivity analysis: Sobol sequences, paired sample
//! matrices, first-order and total-effect estimators, and the pipeline that
//! runs them over a fitted surrogate.

mod direction_numbers;
mod estimators;
mod matrices;
mod pipeline;
mod report;
mod sobol;

use thiserror::Error;

use crate::surrogate::SurrogateError;

pub use estimators::{first_order_indices, noise_floor, total_effect_indices, Estimator, EvalSet, MIN_VARIANCE};
pub use matrices::{build_sample_matrices, SampleMatrices};
pub use pipeline::{factor_matrix, run_sa, run_sa_pipeline, SaConfig, FACTOR_LABELS, MAX_SAMPLES};
pub use report::{render_table, FactorIndices, ReportStatus, SensitivityReport};
pub use sobol::{sobol_sequence, SobolSequence, MAX_DIMS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("{requested} dimensions requested, at most {supported} are supported")]
    DimensionUnsupported { requested: usize, supported: usize },
    #[error("sequence index {requested} exceeds the 2^32 point period")]
    TooManyPoints { requested: u64 },
    #[error("invalid sensitivity configuration: {0}")]
    InvalidConfig(String),
    #[error("evaluation vectors have inconsistent lengths")]
    LengthMismatch,
    #[error("model produced a non-finite output")]
    NonFiniteOutput,
    #[error("output variance {variance:e} is zero; indices are undefined")]
    ZeroVariance { variance: f64 },
    #[error(transparent)]
    Surrogate(#[from] SurrogateError),
}
