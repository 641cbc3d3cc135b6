use std::collections::HashMap;
use std::io::Read;

use serde::Serialize;

use super::{DataError, EpcRecord, Provenance, RecordSet};

/// Column names of the record CSV, in the order the store writes them.
pub const CSV_HEADER: [&str; 8] = [
    "record_id",
    "municipality",
    "construction_year",
    "families",
    "floor_area_m2",
    "annual_energy_kwh",
    "latitude",
    "longitude",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowRejection {
    /// 1-based line number in the input, the header being line 1.
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestReport {
    pub rows_in: usize,
    pub rows_kept: usize,
    pub rejected: Vec<RowRejection>,
}

/// Parse and validate a record CSV. Columns are addressed by name, so any
/// column order is accepted as long as the header holds exactly the schema
/// names. Invalid rows are dropped and reported; valid rows keep input order.
pub fn ingest_epc_csv<R: Read>(input: R) -> Result<(RecordSet, IngestReport), DataError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].trim().is_empty()) {
        return Err(DataError::EmptyFile);
    }
    let columns = column_map(&headers)?;

    let mut records = Vec::new();
    let mut rejected = Vec::new();
    let mut rows_in = 0;
    for row in reader.records() {
        rows_in += 1;
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                rejected.push(RowRejection { line, reason: e.to_string() });
                continue;
            }
        };
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        match parse_row(&row, &columns).and_then(|r| r.validate().map(|_| r)) {
            Ok(record) => records.push(record),
            Err(reason) => rejected.push(RowRejection { line, reason }),
        }
    }
    let report = IngestReport { rows_in, rows_kept: records.len(), rejected };
    let set = RecordSet::new(records, Provenance::Ingested)?;
    Ok((set, report))
}

fn column_map(headers: &csv::StringRecord) -> Result<HashMap<&'static str, usize>, DataError> {
    let mut map = HashMap::new();
    for (idx, name) in headers.iter().enumerate() {
        let name = name.trim().trim_start_matches('\u{feff}');
        let Some(&known) = CSV_HEADER.iter().find(|&&c| c == name) else {
            return Err(DataError::SchemaMismatch(format!("unexpected column `{name}`")));
        };
        if map.insert(known, idx).is_some() {
            return Err(DataError::SchemaMismatch(format!("duplicate column `{name}`")));
        }
    }
    let missing: Vec<_> = CSV_HEADER.iter().filter(|c| !map.contains_key(*c)).collect();
    if !missing.is_empty() {
        return Err(DataError::SchemaMismatch(format!("missing columns {missing:?}")));
    }
    Ok(map)
}

fn parse_row(row: &csv::StringRecord, columns: &HashMap<&'static str, usize>) -> Result<EpcRecord, String> {
    let field = |name: &str| -> Result<&str, String> {
        row.get(columns[name]).map(str::trim).ok_or_else(|| format!("missing value for `{name}`"))
    };
    fn num<T: std::str::FromStr>(name: &str, raw: &str) -> Result<T, String> {
        raw.parse().map_err(|_| format!("`{name}` is not a valid number: `{raw}`"))
    }
    Ok(EpcRecord {
        record_id: field("record_id")?.to_string(),
        municipality: field("municipality")?.parse()?,
        construction_year: num("construction_year", field("construction_year")?)?,
        families: num("families", field("families")?)?,
        floor_area_m2: num("floor_area_m2", field("floor_area_m2")?)?,
        annual_energy_kwh: num("annual_energy_kwh", field("annual_energy_kwh")?)?,
        latitude: num("latitude", field("latitude")?)?,
        longitude: num("longitude", field("longitude")?)?,
    })
}
