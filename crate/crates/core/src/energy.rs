//! Conversion of household energy inputs into annual kWh and Energy Use
//! Intensity (EUI).
//!
//! Electricity arrives either as metered kWh or as an itemised bill in SEK.
//! Auxiliary fuels are physical quantities converted through a configurable
//! [`ConversionTable`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("net bill is negative: sek_month - sek_vat - sek_fee = {0}")]
    NegativeNetBill(f64),
    #[error("effective per-kWh price is zero")]
    ZeroDenominator,
    #[error("invalid bill field `{field}`: {reason}")]
    InvalidBill { field: &'static str, reason: String },
    #[error("no conversion factor for {kind} measured in {unit}")]
    UnknownFuelUnit { kind: FuelKind, unit: FuelUnit },
    #[error("fuel quantity must be finite and non-negative, got {0}")]
    InvalidQuantity(f64),
    #[error("electricity use must be finite and non-negative, got {0}")]
    InvalidElectricity(f64),
    #[error("floor area must be positive, got {0}")]
    NonPositiveArea(f64),
    #[error("invalid conversion table: {0}")]
    InvalidTable(String),
}

/// An itemised electricity bill covering one or more months.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BillBreakdown {
    /// Amount billed for the period.
    pub sek_month: f64,
    /// Energy tax and VAT portion of the amount.
    #[serde(default)]
    pub sek_vat: f64,
    /// Fuse connection charge.
    #[serde(default)]
    pub sek_fee: f64,
    /// Pure electricity price per kWh.
    pub sek_price: f64,
    /// Energy tax per kWh.
    #[serde(default)]
    pub sek_tax: f64,
    /// Network charge per kWh.
    #[serde(default)]
    pub sek_network: f64,
    #[serde(default = "one_month")]
    pub months_covered: u32,
    /// When the supplier and the grid operator bill separately, the fee, tax
    /// and network terms are not part of this bill.
    #[serde(default)]
    pub separate_supplier_and_grid: bool,
}

fn one_month() -> u32 {
    1
}

impl BillBreakdown {
    fn validate(&self) -> Result<(), EnergyError> {
        let money = [
            ("sek_month", self.sek_month),
            ("sek_vat", self.sek_vat),
            ("sek_fee", self.sek_fee),
            ("sek_price", self.sek_price),
            ("sek_tax", self.sek_tax),
            ("sek_network", self.sek_network),
        ];
        for (field, value) in money {
            if !value.is_finite() || value < 0.0 {
                return Err(EnergyError::InvalidBill {
                    field,
                    reason: format!("must be finite and non-negative, got {value}"),
                });
            }
        }
        if !(1..=12).contains(&self.months_covered) {
            return Err(EnergyError::InvalidBill {
                field: "months_covered",
                reason: format!("must be within 1..=12, got {}", self.months_covered),
            });
        }
        Ok(())
    }

    /// Electricity consumed during the billed period, in kWh.
    pub fn period_kwh(&self) -> Result<f64, EnergyError> {
        self.validate()?;
        let (net, per_kwh) = if self.separate_supplier_and_grid {
            (self.sek_month - self.sek_vat, self.sek_price)
        } else {
            (self.sek_month - self.sek_vat - self.sek_fee, self.sek_price + self.sek_tax + self.sek_network)
        };
        if per_kwh == 0.0 {
            return Err(EnergyError::ZeroDenominator);
        }
        if net < 0.0 {
            return Err(EnergyError::NegativeNetBill(net));
        }
        Ok(net / per_kwh)
    }

    /// Period consumption scaled to a full year by `12 / months_covered`.
    pub fn annual_kwh(&self) -> Result<f64, EnergyError> {
        let period = self.period_kwh()?;
        Ok(period * 12.0 / f64::from(self.months_covered))
    }
}

/// kWh for the billed period of `bill`.
pub fn convert_bill_to_kwh(bill: &BillBreakdown) -> Result<f64, EnergyError> {
    bill.period_kwh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuelKind {
    FuelOil,
    NaturalGas,
    Firewood,
    LigniteBriquette,
}

impl FuelKind {
    pub const ALL: [FuelKind; 4] =
        [FuelKind::FuelOil, FuelKind::NaturalGas, FuelKind::Firewood, FuelKind::LigniteBriquette];

    pub fn as_str(self) -> &'static str {
        match self {
            FuelKind::FuelOil => "fuel_oil",
            FuelKind::NaturalGas => "natural_gas",
            FuelKind::Firewood => "firewood",
            FuelKind::LigniteBriquette => "lignite_briquette",
        }
    }
}

impl fmt::Display for FuelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FuelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FuelKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown fuel kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuelUnit {
    Liter,
    CubicMeter,
    Kilogram,
}

impl FuelUnit {
    pub const ALL: [FuelUnit; 3] = [FuelUnit::Liter, FuelUnit::CubicMeter, FuelUnit::Kilogram];

    pub fn as_str(self) -> &'static str {
        match self {
            FuelUnit::Liter => "liter",
            FuelUnit::CubicMeter => "cubic_meter",
            FuelUnit::Kilogram => "kilogram",
        }
    }
}

impl fmt::Display for FuelUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FuelUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FuelUnit::ALL.into_iter().find(|u| u.as_str() == s).ok_or_else(|| format!("unknown fuel unit `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelEntry {
    pub kind: FuelKind,
    pub quantity: f64,
    pub unit: FuelUnit,
}

/// kWh per physical unit, keyed by fuel kind and unit.
///
/// Serialized as nested objects: `{"fuel_oil": {"liter": 9.96}, ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<FuelKind, BTreeMap<FuelUnit, f64>>")]
#[serde(into = "BTreeMap<FuelKind, BTreeMap<FuelUnit, f64>>")]
pub struct ConversionTable {
    factors: BTreeMap<(FuelKind, FuelUnit), f64>,
}

impl ConversionTable {
    pub fn new(factors: impl IntoIterator<Item = ((FuelKind, FuelUnit), f64)>) -> Result<Self, EnergyError> {
        let factors: BTreeMap<_, _> = factors.into_iter().collect();
        if let Some(((kind, unit), f)) = factors.iter().find(|(_, f)| !(f.is_finite() && **f > 0.0)) {
            return Err(EnergyError::InvalidTable(format!("factor for {kind}/{unit} must be positive, got {f}")));
        }
        Ok(Self { factors })
    }

    pub fn factor(&self, kind: FuelKind, unit: FuelUnit) -> Option<f64> {
        self.factors.get(&(kind, unit)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (FuelKind, FuelUnit, f64)> + '_ {
        self.factors.iter().map(|(&(k, u), &f)| (k, u, f))
    }

    pub fn from_json(text: &str) -> Result<Self, EnergyError> {
        serde_json::from_str(text).map_err(|e| EnergyError::InvalidTable(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, EnergyError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| EnergyError::InvalidTable(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

impl Default for ConversionTable {
    /// Typical Swedish heating values: fuel oil 9.96 kWh/l, natural gas
    /// 11.0 kWh/m³, stacked firewood 1300 kWh/m³, lignite briquettes 5.6 kWh/kg.
    fn default() -> Self {
        Self::new([
            ((FuelKind::FuelOil, FuelUnit::Liter), 9.96),
            ((FuelKind::NaturalGas, FuelUnit::CubicMeter), 11.0),
            ((FuelKind::Firewood, FuelUnit::CubicMeter), 1300.0),
            ((FuelKind::LigniteBriquette, FuelUnit::Kilogram), 5.6),
        ])
        .expect("default factors are positive")
    }
}

impl TryFrom<BTreeMap<FuelKind, BTreeMap<FuelUnit, f64>>> for ConversionTable {
    type Error = EnergyError;

    fn try_from(nested: BTreeMap<FuelKind, BTreeMap<FuelUnit, f64>>) -> Result<Self, Self::Error> {
        Self::new(nested.into_iter().flat_map(|(k, units)| units.into_iter().map(move |(u, f)| ((k, u), f))))
    }
}

impl From<ConversionTable> for BTreeMap<FuelKind, BTreeMap<FuelUnit, f64>> {
    fn from(table: ConversionTable) -> Self {
        let mut nested: Self = BTreeMap::new();
        for ((k, u), f) in table.factors {
            nested.entry(k).or_default().insert(u, f);
        }
        nested
    }
}

pub fn convert_fuel_to_kwh(entry: &FuelEntry, table: &ConversionTable) -> Result<f64, EnergyError> {
    if !entry.quantity.is_finite() || entry.quantity < 0.0 {
        return Err(EnergyError::InvalidQuantity(entry.quantity));
    }
    let factor = table
        .factor(entry.kind, entry.unit)
        .ok_or(EnergyError::UnknownFuelUnit { kind: entry.kind, unit: entry.unit })?;
    Ok(entry.quantity * factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyTotal {
    pub electricity_kwh: f64,
    pub fuel_kwh: f64,
    pub total_kwh: f64,
}

pub fn total_annual_kwh(
    electricity_kwh: f64,
    fuels: &[FuelEntry],
    table: &ConversionTable,
) -> Result<EnergyTotal, EnergyError> {
    if !electricity_kwh.is_finite() || electricity_kwh < 0.0 {
        return Err(EnergyError::InvalidElectricity(electricity_kwh));
    }
    let mut fuel_kwh = 0.0;
    for entry in fuels {
        fuel_kwh += convert_fuel_to_kwh(entry, table)?;
    }
    Ok(EnergyTotal { electricity_kwh, fuel_kwh, total_kwh: electricity_kwh + fuel_kwh })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuiValue {
    /// kWh per m² and year.
    pub eui: f64,
    /// Floor area excluding basement.
    pub area_m2: f64,
}

pub fn compute_eui(total_kwh: f64, area_m2: f64) -> Result<EuiValue, EnergyError> {
    if !(area_m2.is_finite() && area_m2 > 0.0) {
        return Err(EnergyError::NonPositiveArea(area_m2));
    }
    if !total_kwh.is_finite() || total_kwh < 0.0 {
        return Err(EnergyError::InvalidElectricity(total_kwh));
    }
    Ok(EuiValue { eui: total_kwh / area_m2, area_m2 })
}
