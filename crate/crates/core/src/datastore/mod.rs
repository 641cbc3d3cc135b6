//! Reference dataset of EPC-style building records.
//!
//! A [`RecordSet`] is immutable once built and every record in it satisfies
//! the [`EpcRecord`] invariants. Sets come from CSV ingestion, the synthetic
//! generator, or the on-disk store.

mod anonymize;
mod ingest;
mod store;
mod synth;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use anonymize::{anonymize, is_anonymized_id};
pub use ingest::{ingest_epc_csv, IngestReport, RowRejection, CSV_HEADER};
pub use store::{load_store, save_store, StoreMeta};
pub use synth::{generate_synthetic, SynthConfig};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("CSV header does not match the record schema: {0}")]
    SchemaMismatch(String),
    #[error("input file is empty")]
    EmptyFile,
    #[error("record {record_id}: {reason}")]
    InvalidRecord { record_id: String, reason: String },
    #[error("store is corrupt: {0}")]
    CorruptStore(String),
    #[error("I/O failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid synthetic generator config: {0}")]
    InvalidSynthConfig(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// The fifteen municipalities of Västerbotten County.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Municipality {
    Asele,
    Bjurholm,
    Dorotea,
    Lycksele,
    Mala,
    Nordmaling,
    Norsjo,
    Robertsfors,
    Skelleftea,
    Sorsele,
    Storuman,
    Umea,
    Vannas,
    Vilhelmina,
    Vindeln,
}

impl Municipality {
    pub const ALL: [Municipality; 15] = [
        Municipality::Asele,
        Municipality::Bjurholm,
        Municipality::Dorotea,
        Municipality::Lycksele,
        Municipality::Mala,
        Municipality::Nordmaling,
        Municipality::Norsjo,
        Municipality::Robertsfors,
        Municipality::Skelleftea,
        Municipality::Sorsele,
        Municipality::Storuman,
        Municipality::Umea,
        Municipality::Vannas,
        Municipality::Vilhelmina,
        Municipality::Vindeln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Municipality::Asele => "Åsele",
            Municipality::Bjurholm => "Bjurholm",
            Municipality::Dorotea => "Dorotea",
            Municipality::Lycksele => "Lycksele",
            Municipality::Mala => "Malå",
            Municipality::Nordmaling => "Nordmaling",
            Municipality::Norsjo => "Norsjö",
            Municipality::Robertsfors => "Robertsfors",
            Municipality::Skelleftea => "Skellefteå",
            Municipality::Sorsele => "Sorsele",
            Municipality::Storuman => "Storuman",
            Municipality::Umea => "Umeå",
            Municipality::Vannas => "Vännäs",
            Municipality::Vilhelmina => "Vilhelmina",
            Municipality::Vindeln => "Vindeln",
        }
    }

    /// Approximate (latitude, longitude) of the municipal seat.
    pub fn seat(self) -> (f64, f64) {
        match self {
            Municipality::Asele => (64.161, 17.354),
            Municipality::Bjurholm => (63.932, 19.216),
            Municipality::Dorotea => (64.262, 16.411),
            Municipality::Lycksele => (64.596, 18.675),
            Municipality::Mala => (65.183, 18.741),
            Municipality::Nordmaling => (63.569, 19.501),
            Municipality::Norsjo => (64.913, 19.483),
            Municipality::Robertsfors => (64.192, 20.848),
            Municipality::Skelleftea => (64.750, 20.950),
            Municipality::Sorsele => (65.533, 17.533),
            Municipality::Storuman => (65.097, 17.113),
            Municipality::Umea => (63.826, 20.263),
            Municipality::Vannas => (63.907, 19.751),
            Municipality::Vilhelmina => (64.624, 16.656),
            Municipality::Vindeln => (64.202, 19.716),
        }
    }
}

fn fold_ascii(s: &str) -> String {
    s.trim()
        .chars()
        .map(|c| match c {
            'å' | 'ä' | 'Å' | 'Ä' => 'a',
            'ö' | 'Ö' => 'o',
            c => c.to_ascii_lowercase(),
        })
        .collect()
}

impl FromStr for Municipality {
    type Err = String;

    /// Accepts the canonical Swedish name or its ASCII-folded, case-insensitive form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded = fold_ascii(s);
        Municipality::ALL
            .into_iter()
            .find(|m| m.name() == s || fold_ascii(m.name()) == folded)
            .ok_or_else(|| format!("unknown municipality `{s}`"))
    }
}

impl fmt::Display for Municipality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Municipality {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Municipality {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum YearBand {
    #[serde(rename = "until_1960")]
    Until1960,
    #[serde(rename = "1961_1980")]
    Y1961to1980,
    #[serde(rename = "after_1980")]
    After1980,
}

impl YearBand {
    pub const ALL: [YearBand; 3] = [YearBand::Until1960, YearBand::Y1961to1980, YearBand::After1980];

    pub fn from_year(year: i32) -> Self {
        match year {
            ..=1960 => YearBand::Until1960,
            1961..=1980 => YearBand::Y1961to1980,
            _ => YearBand::After1980,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            YearBand::Until1960 => "until_1960",
            YearBand::Y1961to1980 => "1961_1980",
            YearBand::After1980 => "after_1980",
        }
    }
}

impl FromStr for YearBand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        YearBand::ALL.into_iter().find(|b| b.as_str() == s).ok_or_else(|| format!("unknown year band `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyBand {
    OneOrTwo,
    MoreThanTwo,
}

impl FamilyBand {
    pub const ALL: [FamilyBand; 2] = [FamilyBand::OneOrTwo, FamilyBand::MoreThanTwo];

    pub fn from_count(families: u32) -> Self {
        if families <= 2 {
            FamilyBand::OneOrTwo
        } else {
            FamilyBand::MoreThanTwo
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyBand::OneOrTwo => "one_or_two",
            FamilyBand::MoreThanTwo => "more_than_two",
        }
    }
}

impl FromStr for FamilyBand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyBand::ALL.into_iter().find(|b| b.as_str() == s).ok_or_else(|| format!("unknown family band `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpcRecord {
    pub record_id: String,
    pub municipality: Municipality,
    pub construction_year: i32,
    /// Number of household members.
    pub families: u32,
    pub floor_area_m2: f64,
    pub annual_energy_kwh: f64,
    pub latitude: f64,
    pub longitude: f64,
}

pub const MIN_CONSTRUCTION_YEAR: i32 = 1800;
pub const LATITUDE_RANGE: (f64, f64) = (55.0, 70.0);

fn current_year() -> i32 {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    1970 + (secs as f64 / (365.2425 * 86_400.0)) as i32
}

impl EpcRecord {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.floor_area_m2.is_finite() && self.floor_area_m2 > 0.0) {
            return Err(format!("floor_area_m2 must be positive, got {}", self.floor_area_m2));
        }
        if !(self.annual_energy_kwh.is_finite() && self.annual_energy_kwh >= 0.0) {
            return Err(format!("annual_energy_kwh must be non-negative, got {}", self.annual_energy_kwh));
        }
        let now = current_year();
        if !(MIN_CONSTRUCTION_YEAR..=now).contains(&self.construction_year) {
            return Err(format!(
                "construction_year must be within {MIN_CONSTRUCTION_YEAR}..={now}, got {}",
                self.construction_year
            ));
        }
        if self.families == 0 {
            return Err("families must be at least 1".into());
        }
        let (lo, hi) = LATITUDE_RANGE;
        if !(self.latitude.is_finite() && (lo..=hi).contains(&self.latitude)) {
            return Err(format!("latitude must be within [{lo}, {hi}], got {}", self.latitude));
        }
        if !(self.longitude.is_finite() && (-180.0..=180.0).contains(&self.longitude)) {
            return Err(format!("longitude out of range: {}", self.longitude));
        }
        Ok(())
    }

    pub fn eui(&self) -> f64 {
        self.annual_energy_kwh / self.floor_area_m2
    }

    pub fn year_band(&self) -> YearBand {
        YearBand::from_year(self.construction_year)
    }

    pub fn family_band(&self) -> FamilyBand {
        FamilyBand::from_count(self.families)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Ingested,
    Synthetic,
}

/// Immutable, validated collection of records with their derived EUI.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSet {
    records: Vec<EpcRecord>,
    eui: Vec<f64>,
    provenance: Provenance,
    anonymized: bool,
}

impl RecordSet {
    pub fn new(records: Vec<EpcRecord>, provenance: Provenance) -> Result<Self, DataError> {
        for r in &records {
            r.validate().map_err(|reason| DataError::InvalidRecord { record_id: r.record_id.clone(), reason })?;
        }
        let eui = records.iter().map(EpcRecord::eui).collect();
        Ok(Self { records, eui, provenance, anonymized: false })
    }

    pub(crate) fn with_anonymized(mut self, anonymized: bool) -> Self {
        self.anonymized = anonymized;
        self
    }

    pub fn records(&self) -> &[EpcRecord] {
        &self.records
    }

    pub fn eui(&self) -> &[f64] {
        &self.eui
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_anonymized(&self) -> bool {
        self.anonymized
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EpcRecord, f64)> + '_ {
        self.records.iter().zip(self.eui.iter().copied())
    }
}

#[cfg(test)]
pub(crate) fn test_record(id: &str, m: Municipality, year: i32, families: u32, area: f64, kwh: f64) -> EpcRecord {
    let (lat, lon) = m.seat();
    EpcRecord {
        record_id: id.to_string(),
        municipality: m,
        construction_year: year,
        families,
        floor_area_m2: area,
        annual_energy_kwh: kwh,
        latitude: lat,
        longitude: lon,
    }
}
