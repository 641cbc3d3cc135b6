use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::estimators::Estimator;
use super::pipeline::SaConfig;
use crate::surrogate::{BasisKind, FitMetrics, MlsEvalStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Ok,
    /// The surrogate output is constant over the sampling box; indices are undefined.
    ZeroVariance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorIndices {
    pub factor: String,
    pub first_order: Option<f64>,
    pub total_effect: Option<f64>,
    /// Both estimates lie within the Monte Carlo noise floor.
    pub below_noise_floor: bool,
    /// The factor took a single value in the data; its indices are zero by construction.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub surrogate: BasisKind,
    pub estimator: Estimator,
    pub n_samples: usize,
    pub status: ReportStatus,
    pub factors: Vec<FactorIndices>,
    pub sum_first_order: Option<f64>,
    pub sum_total_effect: Option<f64>,
    pub mean: f64,
    pub variance: f64,
    pub noise_floor: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    pub fit: FitMetrics,
    /// MLS evaluation counters over the sample matrices.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mls: Option<MlsEvalStats>,
    pub bounds: Vec<(f64, f64)>,
    pub config: SaConfig,
}

impl SensitivityReport {
    pub fn first_order(&self) -> Vec<Option<f64>> {
        self.factors.iter().map(|f| f.first_order).collect()
    }

    pub fn total_effect(&self) -> Vec<Option<f64>> {
        self.factors.iter().map(|f| f.total_effect).collect()
    }

    pub fn index_of(&self, factor: &str) -> Option<&FactorIndices> {
        self.factors.iter().find(|f| f.factor == factor)
    }

    /// `factor,S,ST` rows; undefined values are left empty.
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("factor,S,ST\n");
        for f in &self.factors {
            let _ = writeln!(out, "{},{},{}", f.factor, cell(f.first_order), cell(f.total_effect));
        }
        out
    }
}

/// Factors down, one `S`/`ST` column pair per surrogate, sums in the last row.
pub fn render_table(reports: &[SensitivityReport]) -> String {
    let Some(first) = reports.first() else {
        return String::new();
    };
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:>8.4}")).unwrap_or_else(|| format!("{:>8}", "-"));
    let name_width = first.factors.iter().map(|f| f.factor.len()).max().unwrap_or(0).max(6);
    let mut out = String::new();
    let _ = write!(out, "{:name_width$}", "");
    for r in reports {
        let _ = write!(out, " | {:^17}", r.surrogate.label());
    }
    out.push('\n');
    let _ = write!(out, "{:name_width$}", "factor");
    for _ in reports {
        let _ = write!(out, " | {:>8} {:>8}", "S", "ST");
    }
    out.push('\n');
    for (i, f) in first.factors.iter().enumerate() {
        let _ = write!(out, "{:name_width$}", f.factor);
        for r in reports {
            let fi = &r.factors[i];
            let _ = write!(out, " | {} {}", fmt(fi.first_order), fmt(fi.total_effect));
        }
        out.push('\n');
    }
    let _ = write!(out, "{:name_width$}", "sum");
    for r in reports {
        let _ = write!(out, " | {} {}", fmt(r.sum_first_order), fmt(r.sum_total_effect));
    }
    out.push('\n');
    for r in reports {
        if let Some(note) = &r.note {
            let _ = writeln!(out, "{}: {note}", r.surrogate.short_name());
        }
    }
    out
}
