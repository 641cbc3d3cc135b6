use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::SurrogateError;

/// Per-dimension min-max normalization onto `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Scaler {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self, SurrogateError> {
        if min.len() != max.len() {
            return Err(SurrogateError::DimensionMismatch { expected: min.len(), got: max.len() });
        }
        if min.iter().zip(&max).any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && hi >= lo)) {
            return Err(SurrogateError::InvalidInput("scaler bounds must be finite with max >= min".into()));
        }
        Ok(Self { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Dimensions whose observed range is a single value.
    pub fn is_degenerate(&self, dim: usize) -> bool {
        self.max[dim] == self.min[dim]
    }

    pub fn degenerate_dims(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&d| self.is_degenerate(d)).collect()
    }

    pub fn normalize_value(&self, dim: usize, v: f64) -> f64 {
        let span = self.max[dim] - self.min[dim];
        if span == 0.0 {
            0.0
        } else {
            (v - self.min[dim]) / span
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, SurrogateError> {
        if x.len() != self.dim() {
            return Err(SurrogateError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(x.iter().enumerate().map(|(d, &v)| self.normalize_value(d, v)).collect())
    }

    pub fn apply_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>, SurrogateError> {
        if x.ncols() != self.dim() {
            return Err(SurrogateError::DimensionMismatch { expected: self.dim(), got: x.ncols() });
        }
        let mut out = x.clone();
        for (d, mut col) in out.column_iter_mut().enumerate() {
            col.apply(|v| *v = self.normalize_value(d, *v));
        }
        Ok(out)
    }
}

/// Observed per-column range of `samples` (rows are samples).
pub fn fit_scaler(samples: &DMatrix<f64>) -> Result<Scaler, SurrogateError> {
    if samples.nrows() == 0 {
        return Err(SurrogateError::InvalidInput("cannot fit a scaler to zero samples".into()));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(SurrogateError::InvalidInput("samples must be finite".into()));
    }
    let min = samples.column_iter().map(|c| c.min()).collect();
    let max = samples.column_iter().map(|c| c.max()).collect();
    Scaler::new(min, max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = Scaler::new(vec![0.0, 3.0], vec![10.0, 3.0]).unwrap();
        assert_eq!(s.apply(&[5.0, 3.0]).unwrap(), [0.5, 0.0]);
        assert_eq!(s.apply(&[0.0, 3.0]).unwrap(), [0.0, 0.0]);
        assert_eq!(s.apply(&[10.0, 3.0]).unwrap(), [1.0, 0.0]);
        assert!(s.is_degenerate(1) && !s.is_degenerate(0));
        assert_eq!(s.degenerate_dims(), [1]);
        assert!(s.apply(&[1.0]).is_err());
    }

    #[test]
    fn fitted_range_maps_to_unit_box() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, -5.0, 3.0, 5.0, 2.0, 0.0]);
        let s = fit_scaler(&x).unwrap();
        assert_eq!((s.min.clone(), s.max.clone()), (vec![1.0, -5.0], vec![3.0, 5.0]));
        let n = s.apply_matrix(&x).unwrap();
        assert_eq!(n, DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 1.0, 0.5, 0.5]));
        assert!(fit_scaler(&DMatrix::zeros(0, 2)).is_err());
    }
}
