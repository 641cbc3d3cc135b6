//! Surrogate regressors over min-max normalized inputs: global polynomial
//! least squares (linear, quadratic with or without mixed terms) and moving
//! least squares.

mod basis;
mod metrics;
mod mls;
mod ols;
mod scaler;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use basis::{build_basis, fill_basis, term_names, BasisKind};
pub use metrics::{adjusted_r_squared, r_squared, FitMetrics};
pub use mls::{fit_mls, mls_weight, predict_mls, MlsEvalStats, MlsModel, MlsOptions, MlsPrediction, DEFAULT_RIDGE};
pub use ols::{design_matrix, fit_ols, predict_poly, PolyModel};
pub use scaler::{fit_scaler, Scaler};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurrogateError {
    #[error("{n} samples cannot determine {k_r} regression coefficients")]
    Underdetermined { n: usize, k_r: usize },
    #[error("design matrix is rank deficient; linearly dependent columns: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("response is constant; R² is undefined")]
    ConstantResponse,
    #[error("only {found} supports available, need {required}")]
    NoSupport { found: usize, required: usize },
    #[error("weighted normal matrix is singular even after regularization")]
    Singular,
    #[error("{0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SurrogateModel {
    Polynomial(PolyModel),
    Mls(MlsModel),
}

/// A regressor on raw inputs: scaler, fitted model and training metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedSurrogate {
    pub kind: BasisKind,
    pub scaler: Scaler,
    /// Input dimensions the model sees. Dimensions with a single observed
    /// value carry no information and are left out.
    pub active: Vec<usize>,
    pub model: SurrogateModel,
    pub metrics: FitMetrics,
    /// MLS evaluation counters over the training points.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub training_stats: Option<MlsEvalStats>,
}

pub fn fit_surrogate(
    x: &DMatrix<f64>,
    y: &[f64],
    kind: BasisKind,
    mls_options: &MlsOptions,
) -> Result<FittedSurrogate, SurrogateError> {
    let scaler = fit_scaler(x)?;
    let active: Vec<usize> = (0..scaler.dim()).filter(|&d| !scaler.is_degenerate(d)).collect();
    let xn = scaler.apply_matrix(x)?.select_columns(&active);
    let k_r = kind.n_terms(active.len());
    let (model, metrics, training_stats) = match kind {
        BasisKind::MlsQuadratic => {
            if y.len() < k_r {
                return Err(SurrogateError::Underdetermined { n: y.len(), k_r });
            }
            let model = fit_mls(&xn, y, mls_options)?;
            let (yhat, stats) = model.predict_rows(&xn)?;
            (SurrogateModel::Mls(model), FitMetrics::compute(y, &yhat, k_r), Some(stats))
        }
        _ => {
            let (model, metrics) = fit_ols(&xn, y, kind)?;
            (SurrogateModel::Polynomial(model), metrics, None)
        }
    };
    Ok(FittedSurrogate { kind, scaler, active, model, metrics, training_stats })
}

impl FittedSurrogate {
    pub fn dim(&self) -> usize {
        self.scaler.dim()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64, SurrogateError> {
        let xn = self.scaler.apply(x)?;
        let local: Vec<f64> = self.active.iter().map(|&d| xn[d]).collect();
        match &self.model {
            SurrogateModel::Polynomial(m) => m.predict(&local),
            SurrogateModel::Mls(m) => m.predict(&local),
        }
    }

    /// Predict every row of the raw input matrix `x`.
    pub fn predict_rows(&self, x: &DMatrix<f64>) -> Result<(Vec<f64>, MlsEvalStats), SurrogateError> {
        let xn = self.scaler.apply_matrix(x)?.select_columns(&self.active);
        match &self.model {
            SurrogateModel::Polynomial(m) => {
                let values = m.predict_rows(&xn)?;
                let stats = MlsEvalStats { evaluations: values.len(), ..MlsEvalStats::default() };
                Ok((values, stats))
            }
            SurrogateModel::Mls(m) => m.predict_rows(&xn),
        }
    }
}
