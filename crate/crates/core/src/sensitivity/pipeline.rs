use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::estimators::{first_order_indices, noise_floor, total_effect_indices, Estimator, EvalSet};
use super::matrices::{build_sample_matrices, validate_bounds};
use super::report::{FactorIndices, ReportStatus, SensitivityReport};
use super::SensitivityError;
use crate::datastore::RecordSet;
use crate::surrogate::{fit_surrogate, BasisKind, FitMetrics, MlsOptions};

/// Factor columns extracted from a record set, in order.
pub const FACTOR_LABELS: [&str; 5] = ["year", "families", "area", "energy", "location"];

/// Upper limit on samples per run; memory grows as `(k + 2) * n`.
pub const MAX_SAMPLES: usize = 1_000_000;

/// Below this noise floor the report carries no warning.
const WIDE_NOISE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaConfig {
    pub n_samples: usize,
    pub estimator: Estimator,
    pub surrogates: Vec<BasisKind>,
    /// Index of the first sequence point used.
    pub skip: u64,
    /// Sampling box per factor; defaults to the observed range.
    pub bounds: Option<Vec<(f64, f64)>>,
    pub mls: MlsOptions,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            n_samples: 100_000,
            estimator: Estimator::Jansen,
            surrogates: vec![BasisKind::QuadraticNoMixed, BasisKind::FullQuadratic, BasisKind::MlsQuadratic],
            skip: 0,
            bounds: None,
            mls: MlsOptions::default(),
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), SensitivityError> {
        let bad = |msg: String| Err(SensitivityError::InvalidConfig(msg));
        if !(2..=MAX_SAMPLES).contains(&self.n_samples) {
            return bad(format!("n_samples must be between 2 and {MAX_SAMPLES}, got {}", self.n_samples));
        }
        if self.surrogates.is_empty() {
            return bad("at least one surrogate is required".into());
        }
        for (i, s) in self.surrogates.iter().enumerate() {
            if self.surrogates[..i].contains(s) {
                return bad(format!("surrogate `{s}` listed twice"));
            }
        }
        if let Some(bounds) = &self.bounds {
            validate_bounds(bounds)?;
        }
        if let Some(r) = self.mls.radius {
            if !(r.is_finite() && r > 0.0) {
                return bad(format!("mls.radius must be positive, got {r}"));
            }
        }
        if !(self.mls.ridge.is_finite() && self.mls.ridge >= 0.0) {
            return bad(format!("mls.ridge must be non-negative, got {}", self.mls.ridge));
        }
        Ok(())
    }
}

/// Factor matrix (one row per record, columns as [`FACTOR_LABELS`]) and the EUI response.
pub fn factor_matrix(dataset: &RecordSet) -> (DMatrix<f64>, Vec<f64>) {
    let records = dataset.records();
    let x = DMatrix::from_fn(records.len(), FACTOR_LABELS.len(), |i, d| {
        let r = &records[i];
        match d {
            0 => f64::from(r.construction_year),
            1 => f64::from(r.families),
            2 => r.floor_area_m2,
            3 => r.annual_energy_kwh,
            _ => r.latitude,
        }
    });
    (x, dataset.eui().to_vec())
}

pub fn run_sa_pipeline(dataset: &RecordSet, config: &SaConfig) -> Result<Vec<SensitivityReport>, SensitivityError> {
    let (x, y) = factor_matrix(dataset);
    run_sa(&x, &y, &FACTOR_LABELS, config)
}

/// Fit each configured surrogate to `(x, y)` and estimate its indices over
/// the sampling box.
pub fn run_sa(
    x: &DMatrix<f64>,
    y: &[f64],
    labels: &[&str],
    config: &SaConfig,
) -> Result<Vec<SensitivityReport>, SensitivityError> {
    config.validate()?;
    let (rows, k) = x.shape();
    if labels.len() != k {
        return Err(SensitivityError::InvalidConfig(format!("{} labels for {k} factors", labels.len())));
    }
    if y.len() != rows {
        return Err(SensitivityError::LengthMismatch);
    }
    if rows == 0 {
        return Err(SensitivityError::InvalidConfig("the dataset is empty".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(SensitivityError::InvalidConfig("factor values and responses must be finite".into()));
    }

    let observed: Vec<(f64, f64)> = x.column_iter().map(|c| (c.min(), c.max())).collect();
    let active: Vec<usize> = (0..k).filter(|&d| observed[d].1 > observed[d].0).collect();
    let bounds = match &config.bounds {
        Some(b) if b.len() != k => {
            return Err(SensitivityError::InvalidConfig(format!("{} bounds for {k} factors", b.len())));
        }
        Some(b) => b.clone(),
        None => observed.clone(),
    };

    let n = config.n_samples;
    let active_bounds: Vec<(f64, f64)> = active.iter().map(|&d| bounds[d]).collect();
    let matrices = build_sample_matrices(n, &active_bounds, config.skip)?;
    let sampled = matrices.stacked();
    let mut points = DMatrix::zeros(sampled.nrows(), k);
    for d in 0..k {
        points.column_mut(d).fill(observed[d].0);
    }
    for (j, &d) in active.iter().enumerate() {
        points.set_column(d, &sampled.column(j));
    }

    let floor = noise_floor(n);
    let note = (floor > WIDE_NOISE)
        .then(|| format!("only {n} samples: each index carries Monte Carlo noise of about ±{floor:.2}"));

    let zero_variance = || -> Vec<FactorIndices> {
        labels
            .iter()
            .enumerate()
            .map(|(d, l)| FactorIndices {
                factor: l.to_string(),
                first_order: None,
                total_effect: None,
                below_noise_floor: false,
                degenerate: !active.contains(&d),
            })
            .collect()
    };
    let report = |kind, status, factors: Vec<FactorIndices>, mean, variance, fit, mls| {
        let sum = |f: fn(&FactorIndices) -> Option<f64>| factors.iter().map(f).sum::<Option<f64>>();
        SensitivityReport {
            surrogate: kind,
            estimator: config.estimator,
            n_samples: n,
            status,
            sum_first_order: sum(|f| f.first_order),
            sum_total_effect: sum(|f| f.total_effect),
            factors,
            mean,
            variance,
            noise_floor: floor,
            note: note.clone(),
            fit,
            mls,
            bounds: bounds.clone(),
            config: config.clone(),
        }
    };

    // A constant response has nothing to apportion, and its design matrix is
    // frequently collinear as well, so no surrogate is fitted.
    if y.iter().all(|&v| v == y[0]) {
        return Ok(config
            .surrogates
            .iter()
            .map(|&kind| {
                let fit = FitMetrics { r2: None, r2_adj: None, n: rows, k_r: kind.n_terms(active.len()) };
                report(kind, ReportStatus::ZeroVariance, zero_variance(), y[0], 0.0, fit, None)
            })
            .collect());
    }

    config
        .surrogates
        .iter()
        .map(|&kind| {
            let fit = fit_surrogate(x, y, kind, &config.mls)?;
            let (values, stats) = fit.predict_rows(&points)?;
            let evals = EvalSet::from_stacked(&values, n, active.len())?;
            let indices = first_order_indices(&evals, config.estimator)
                .and_then(|s| Ok((s, total_effect_indices(&evals, config.estimator)?)));
            let (status, factors) = match indices {
                Ok((s, st)) => {
                    let mut factors: Vec<FactorIndices> = labels
                        .iter()
                        .map(|l| FactorIndices {
                            factor: l.to_string(),
                            first_order: Some(0.0),
                            total_effect: Some(0.0),
                            below_noise_floor: true,
                            degenerate: true,
                        })
                        .collect();
                    for (j, &d) in active.iter().enumerate() {
                        factors[d] = FactorIndices {
                            factor: labels[d].to_string(),
                            first_order: Some(s[j]),
                            total_effect: Some(st[j]),
                            below_noise_floor: s[j].abs() < floor && st[j].abs() < floor,
                            degenerate: false,
                        };
                    }
                    (ReportStatus::Ok, factors)
                }
                Err(SensitivityError::ZeroVariance { .. }) => (ReportStatus::ZeroVariance, zero_variance()),
                Err(e) => return Err(e),
            };
            let mls = (kind == BasisKind::MlsQuadratic).then_some(stats);
            Ok(report(kind, status, factors, evals.mean(), evals.variance(), fit.metrics, mls))
        })
        .collect()
}
