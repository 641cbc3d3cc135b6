//! On-disk store: a CSV payload plus a JSON sidecar (`<path>.meta.json`)
//! carrying the payload checksum and provenance.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ingest::ingest_epc_csv, DataError, Provenance, RecordSet, CSV_HEADER};

const FORMAT: &str = "retrofit-store/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreMeta {
    pub format: String,
    pub provenance: Provenance,
    pub anonymized: bool,
    pub records: usize,
    pub sha256: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
    move |source| DataError::Io { path: path.display().to_string(), source }
}

fn encode_payload(set: &RecordSet) -> Result<Vec<u8>, DataError> {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    for r in set.records() {
        writer.write_record([
            r.record_id.clone(),
            r.municipality.name().to_string(),
            r.construction_year.to_string(),
            r.families.to_string(),
            r.floor_area_m2.to_string(),
            r.annual_energy_kwh.to_string(),
            r.latitude.to_string(),
            r.longitude.to_string(),
        ])?;
    }
    writer.into_inner().map_err(|e| DataError::Io { path: "<memory>".into(), source: e.into_error() })
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), DataError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Write `set` to `path` and its sidecar. Returns the sidecar contents.
pub fn save_store(set: &RecordSet, path: &Path) -> Result<StoreMeta, DataError> {
    let payload = encode_payload(set)?;
    let meta = StoreMeta {
        format: FORMAT.to_string(),
        provenance: set.provenance(),
        anonymized: set.is_anonymized(),
        records: set.len(),
        sha256: hex::encode(Sha256::digest(&payload)),
    };
    let mut meta_json = serde_json::to_vec_pretty(&meta).expect("store metadata serializes");
    meta_json.push(b'\n');
    write_atomically(path, &payload)?;
    write_atomically(&sidecar_path(path), &meta_json)?;
    Ok(meta)
}

pub fn load_store(path: &Path) -> Result<RecordSet, DataError> {
    let payload = fs::read(path).map_err(io_err(path))?;
    let meta_path = sidecar_path(path);
    let meta_bytes = fs::read(&meta_path).map_err(io_err(&meta_path))?;
    let meta: StoreMeta =
        serde_json::from_slice(&meta_bytes).map_err(|e| DataError::CorruptStore(format!("unreadable sidecar: {e}")))?;
    if meta.format != FORMAT {
        return Err(DataError::CorruptStore(format!("unsupported format `{}`", meta.format)));
    }
    let actual = hex::encode(Sha256::digest(&payload));
    if actual != meta.sha256 {
        return Err(DataError::CorruptStore(format!(
            "checksum mismatch: sidecar {} but payload {actual}",
            meta.sha256
        )));
    }
    let (set, report) = ingest_epc_csv(payload.as_slice()).map_err(|e| match e {
        DataError::Io { .. } => e,
        other => DataError::CorruptStore(other.to_string()),
    })?;
    if !report.rejected.is_empty() || set.len() != meta.records {
        return Err(DataError::CorruptStore(format!(
            "payload holds {} valid rows, sidecar declares {}",
            set.len(),
            meta.records
        )));
    }
    let records = set.records().to_vec();
    Ok(RecordSet::new(records, meta.provenance)?.with_anonymized(meta.anonymized))
}
