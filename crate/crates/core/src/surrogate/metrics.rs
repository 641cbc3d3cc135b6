use serde::{Deserialize, Serialize};

use super::SurrogateError;

/// Goodness of fit on the training data. The R² fields are absent when the
/// response is constant (or, for the adjusted value, when `n <= k_r`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitMetrics {
    pub r2: Option<f64>,
    pub r2_adj: Option<f64>,
    pub n: usize,
    pub k_r: usize,
}

impl FitMetrics {
    pub fn compute(y: &[f64], yhat: &[f64], k_r: usize) -> Self {
        let r2 = r_squared(y, yhat).ok();
        let r2_adj = r2.and_then(|r2| adjusted_r_squared(r2, y.len(), k_r).ok());
        Self { r2, r2_adj, n: y.len(), k_r }
    }
}

pub(crate) fn is_constant(y: &[f64]) -> bool {
    let first = y.first().copied().unwrap_or(0.0);
    y.iter().all(|&v| v == first)
}

/// `1 - SS_res / SS_tot`.
pub fn r_squared(y: &[f64], yhat: &[f64]) -> Result<f64, SurrogateError> {
    if y.len() != yhat.len() {
        return Err(SurrogateError::DimensionMismatch { expected: y.len(), got: yhat.len() });
    }
    if y.len() < 2 {
        return Err(SurrogateError::InvalidInput("R² needs at least two observations".into()));
    }
    if is_constant(y) {
        return Err(SurrogateError::ConstantResponse);
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = y.iter().zip(yhat).map(|(v, p)| (v - p).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// `1 - (n - 1) / (n - k_r) * (1 - r2)`.
pub fn adjusted_r_squared(r2: f64, n: usize, k_r: usize) -> Result<f64, SurrogateError> {
    if n <= k_r {
        return Err(SurrogateError::Underdetermined { n, k_r });
    }
    Ok(1.0 - (n - 1) as f64 / (n - k_r) as f64 * (1.0 - r2))
}
