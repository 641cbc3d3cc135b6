//! Request-level operations shared by the CLI and the HTTP service.
//!
//! Both front ends parse requests with the same types, call the same
//! [`Engine`] and serialize with [`to_json`], so identical logical requests
//! produce identical bytes.

use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchmark::{
    advise, classify_eui, compute_group_stats, peer_comparison, select_reference_group, Advice, BenchmarkError,
    ComparisonReport, EnergyTargetTable, GroupKey, GroupScope, GroupSelector, GroupStats, Rating,
};
use crate::datastore::{DataError, FamilyBand, Municipality, RecordSet, YearBand};
use crate::energy::{
    compute_eui, total_annual_kwh, BillBreakdown, ConversionTable, EnergyError, EnergyTotal, FuelEntry,
};
use crate::sensitivity::{run_sa_pipeline, SaConfig, SensitivityError, SensitivityReport};

pub const DEFAULT_TARGET_YEAR: i32 = 2022;

/// Pretty JSON with a trailing newline; the one serializer for every response.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("response types serialize");
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldIssue {
    pub field: String,
    pub message: String,
}

impl FieldIssue {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

/// How a failure should be reported: bad input, a well-formed request the
/// data cannot answer, or a bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Domain,
    Internal,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid request: {}", describe(.0))]
    Invalid(Vec<FieldIssue>),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error(transparent)]
    Sensitivity(#[from] SensitivityError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("internal error: {0}")]
    Internal(String),
}

fn describe(issues: &[FieldIssue]) -> String {
    issues.iter().map(|i| format!("{}: {}", i.field, i.message)).collect::<Vec<_>>().join("; ")
}

/// Wire shape of every error response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
    pub fields: Vec<FieldIssue>,
}

impl EngineError {
    pub fn class(&self) -> ErrorClass {
        use SensitivityError as S;
        match self {
            EngineError::Invalid(_) | EngineError::Energy(_) | EngineError::Data(_) => ErrorClass::Input,
            EngineError::Benchmark(BenchmarkError::EmptyGroup { .. }) => ErrorClass::Domain,
            EngineError::Benchmark(_) => ErrorClass::Input,
            EngineError::Sensitivity(
                S::InvalidConfig(_) | S::DimensionUnsupported { .. } | S::TooManyPoints { .. } | S::LengthMismatch,
            ) => ErrorClass::Input,
            EngineError::Sensitivity(_) => ErrorClass::Domain,
            EngineError::Internal(_) => ErrorClass::Internal,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        use SensitivityError as S;
        match self {
            EngineError::Invalid(_) => "invalid_request",
            EngineError::Energy(_) => "invalid_energy_input",
            EngineError::Benchmark(BenchmarkError::EmptyGroup { .. }) => "empty_group",
            EngineError::Benchmark(BenchmarkError::UnknownYear { .. }) => "unknown_year",
            EngineError::Benchmark(_) => "invalid_benchmark_input",
            EngineError::Sensitivity(S::ZeroVariance { .. }) => "zero_variance",
            EngineError::Sensitivity(S::Surrogate(_)) => "surrogate_failed",
            EngineError::Sensitivity(S::NonFiniteOutput) => "non_finite_output",
            EngineError::Sensitivity(_) => "invalid_config",
            EngineError::Data(_) => "invalid_data",
            EngineError::Internal(_) => "internal",
        }
    }

    /// The request fields the error refers to.
    pub fn fields(&self) -> Vec<FieldIssue> {
        let one = |field: &str| vec![FieldIssue::new(field, self.to_string())];
        match self {
            EngineError::Invalid(issues) => issues.clone(),
            EngineError::Energy(e) => match e {
                EnergyError::InvalidBill { field, .. } => one(&format!("bill.{field}")),
                EnergyError::NegativeNetBill(_) | EnergyError::ZeroDenominator => one("bill"),
                EnergyError::UnknownFuelUnit { .. } | EnergyError::InvalidQuantity(_) => one("fuels"),
                EnergyError::InvalidElectricity(_) => one("kwh_last_12_months"),
                EnergyError::NonPositiveArea(_) => one("area_m2"),
                EnergyError::InvalidTable(_) => vec![],
            },
            EngineError::Benchmark(BenchmarkError::UnknownYear { .. }) => one("target_year"),
            _ => vec![],
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { error: self.code().to_string(), detail: self.to_string(), fields: self.fields() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyInputMethod {
    /// Metered electricity for the last twelve months.
    Kwh,
    /// An itemised bill in SEK.
    Sek,
}

/// One questionnaire submission: the house, its energy use and the target year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkRequest {
    pub municipality: Municipality,
    pub year_band: YearBand,
    pub family_band: FamilyBand,
    /// Floor area excluding basement.
    pub area_m2: f64,
    pub energy_input_method: EnergyInputMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kwh_last_12_months: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bill: Option<BillBreakdown>,
    #[serde(default)]
    pub fuels: Vec<FuelEntry>,
    #[serde(default = "default_target_year")]
    pub target_year: i32,
}

fn default_target_year() -> i32 {
    DEFAULT_TARGET_YEAR
}

/// Deserialize `T`, turning serde errors into field-level issues.
pub fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T, EngineError> {
    let body_issue = |message: String| EngineError::Invalid(vec![FieldIssue::new("body", message)]);
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().to_string();
        let field = if path == "." { missing_field(&message).unwrap_or("body").to_string() } else { path };
        EngineError::Invalid(vec![FieldIssue::new(field, message)])
    })?;
    de.end().map_err(|e| body_issue(e.to_string()))?;
    Ok(value)
}

fn missing_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

impl BenchmarkRequest {
    pub fn from_json(bytes: &[u8]) -> Result<Self, EngineError> {
        let request: Self = parse_json(bytes)?;
        request.validate()?;
        Ok(request)
    }

    /// Shape rules that serde cannot express: exactly one energy branch,
    /// matching the declared input method.
    pub fn validate(&self) -> Result<(), EngineError> {
        let mut issues = Vec::new();
        if !(self.area_m2.is_finite() && self.area_m2 > 0.0) {
            issues.push(FieldIssue::new("area_m2", format!("must be positive, got {}", self.area_m2)));
        }
        match (self.kwh_last_12_months, &self.bill) {
            (Some(_), Some(_)) => {
                let msg = "give either kwh_last_12_months or bill, not both";
                issues.push(FieldIssue::new("kwh_last_12_months", msg));
                issues.push(FieldIssue::new("bill", msg));
            }
            (None, None) => {
                let field = match self.energy_input_method {
                    EnergyInputMethod::Kwh => "kwh_last_12_months",
                    EnergyInputMethod::Sek => "bill",
                };
                issues.push(FieldIssue::new(field, "required by energy_input_method"));
            }
            (Some(_), None) if self.energy_input_method == EnergyInputMethod::Sek => {
                issues
                    .push(FieldIssue::new("bill", "energy_input_method is sek but only kwh_last_12_months was given"));
            }
            (None, Some(_)) if self.energy_input_method == EnergyInputMethod::Kwh => {
                issues.push(FieldIssue::new(
                    "kwh_last_12_months",
                    "energy_input_method is kwh but only a bill was given",
                ));
            }
            _ => {}
        }
        if let Some(kwh) = self.kwh_last_12_months {
            if !(kwh.is_finite() && kwh >= 0.0) {
                issues.push(FieldIssue::new("kwh_last_12_months", format!("must be non-negative, got {kwh}")));
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(EngineError::Invalid(issues))
        }
    }

    pub fn group_key(&self) -> GroupKey {
        GroupKey { municipality: self.municipality, year_band: self.year_band, family_band: self.family_band }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub key: GroupKey,
    pub scope: GroupScope,
    pub widened: bool,
    pub count: usize,
    pub stats: GroupStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResponse {
    pub user_eui: f64,
    pub area_m2: f64,
    pub energy: EnergyTotal,
    pub rating: Rating,
    pub rating_label: String,
    pub advice: Advice,
    pub comparison: ComparisonReport,
    pub reference_group: GroupSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuelOption {
    pub kind: String,
    pub unit: String,
    pub kwh_per_unit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetEntry {
    pub year: i32,
    pub allowed_eui: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingOption {
    pub value: Rating,
    pub label: String,
}

/// Everything a client needs to build the questionnaire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicConfig {
    pub municipalities: Vec<String>,
    pub year_bands: Vec<String>,
    pub family_bands: Vec<String>,
    pub energy_input_methods: Vec<EnergyInputMethod>,
    pub fuels: Vec<FuelOption>,
    /// Sorted by year.
    pub targets: Vec<TargetEntry>,
    pub default_target_year: i32,
    /// Worst to best.
    pub ratings: Vec<RatingOption>,
    pub min_group_size: usize,
    pub dataset_records: usize,
}

/// The operations the front ends are allowed to call.
pub trait Engine: Send + Sync + 'static {
    fn benchmark(&self, request: &BenchmarkRequest) -> Result<BenchmarkResponse, EngineError>;
    fn reference_group(&self, key: &GroupKey) -> Result<GroupSummary, EngineError>;
    fn sensitivity(&self, config: &SaConfig) -> Result<Vec<SensitivityReport>, EngineError>;
    fn public_config(&self) -> PublicConfig;
}

/// [`Engine`] over an in-memory record set.
pub struct DatasetEngine {
    dataset: RwLock<Arc<RecordSet>>,
    targets: EnergyTargetTable,
    conversions: ConversionTable,
    selector: GroupSelector,
}

impl DatasetEngine {
    pub fn new(dataset: RecordSet) -> Self {
        Self::with_tables(dataset, EnergyTargetTable::default(), ConversionTable::default(), GroupSelector::default())
    }

    pub fn with_tables(
        dataset: RecordSet,
        targets: EnergyTargetTable,
        conversions: ConversionTable,
        selector: GroupSelector,
    ) -> Self {
        Self { dataset: RwLock::new(Arc::new(dataset)), targets, conversions, selector }
    }

    /// The current snapshot; requests in flight keep the one they started with.
    pub fn dataset(&self) -> Arc<RecordSet> {
        Arc::clone(&self.dataset.read().unwrap_or_else(|e| e.into_inner()))
    }

    pub fn replace_dataset(&self, dataset: RecordSet) {
        *self.dataset.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(dataset);
    }

    fn group(
        &self,
        dataset: &RecordSet,
        key: &GroupKey,
    ) -> Result<(crate::benchmark::ReferenceGroup, GroupStats), EngineError> {
        let group = select_reference_group(key, dataset, &self.selector)?;
        let stats = compute_group_stats(&group)?;
        Ok((group, stats))
    }
}

fn summary(group: &crate::benchmark::ReferenceGroup, stats: GroupStats) -> GroupSummary {
    GroupSummary { key: group.key, scope: group.scope, widened: group.widened, count: stats.count, stats }
}

impl Engine for DatasetEngine {
    fn benchmark(&self, request: &BenchmarkRequest) -> Result<BenchmarkResponse, EngineError> {
        request.validate()?;
        let electricity = match (&request.bill, request.kwh_last_12_months) {
            (Some(bill), _) => bill.annual_kwh()?,
            (None, Some(kwh)) => kwh,
            (None, None) => unreachable!("validated"),
        };
        let energy = total_annual_kwh(electricity, &request.fuels, &self.conversions)?;
        let eui = compute_eui(energy.total_kwh, request.area_m2)?;
        let dataset = self.dataset();
        let (group, stats) = self.group(&dataset, &request.group_key())?;
        let rating = classify_eui(eui.eui, &stats);
        let advice = advise(eui.eui, rating, &self.targets, request.target_year)?;
        Ok(BenchmarkResponse {
            user_eui: eui.eui,
            area_m2: eui.area_m2,
            energy,
            rating,
            rating_label: rating.label().to_string(),
            advice,
            comparison: peer_comparison(eui.eui, &group, &stats),
            reference_group: summary(&group, stats),
        })
    }

    fn reference_group(&self, key: &GroupKey) -> Result<GroupSummary, EngineError> {
        let dataset = self.dataset();
        let (group, stats) = self.group(&dataset, key)?;
        Ok(summary(&group, stats))
    }

    fn sensitivity(&self, config: &SaConfig) -> Result<Vec<SensitivityReport>, EngineError> {
        Ok(run_sa_pipeline(&self.dataset(), config)?)
    }

    fn public_config(&self) -> PublicConfig {
        PublicConfig {
            municipalities: Municipality::ALL.iter().map(|m| m.name().to_string()).collect(),
            year_bands: YearBand::ALL.iter().map(|b| b.as_str().to_string()).collect(),
            family_bands: FamilyBand::ALL.iter().map(|b| b.as_str().to_string()).collect(),
            energy_input_methods: vec![EnergyInputMethod::Kwh, EnergyInputMethod::Sek],
            fuels: self
                .conversions
                .entries()
                .map(|(k, u, f)| FuelOption { kind: k.to_string(), unit: u.to_string(), kwh_per_unit: f })
                .collect(),
            targets: self.targets.years().map(|(year, allowed_eui)| TargetEntry { year, allowed_eui }).collect(),
            default_target_year: DEFAULT_TARGET_YEAR,
            ratings: Rating::SCALE.iter().map(|&r| RatingOption { value: r, label: r.label().to_string() }).collect(),
            min_group_size: self.selector.min_group_size,
            dataset_records: self.dataset().len(),
        }
    }
}
