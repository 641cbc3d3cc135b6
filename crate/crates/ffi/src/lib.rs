//! C ABI over `retrofit-core`.
//!
//! Every function returns a [`RetrofitStatus`] (or a plain value when it
//! cannot fail). On failure the thread-local message returned by
//! [`retrofit_last_error_message`] describes the cause. Strings returned
//! through `char **` outputs are owned by the caller and released with
//! [`retrofit_string_free`]; datasets with [`retrofit_dataset_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use retrofit_core::datastore::{generate_synthetic, load_store, SynthConfig};
use retrofit_core::energy::{compute_eui, BillBreakdown};
use retrofit_core::engine::{parse_json, to_json, BenchmarkRequest, DatasetEngine, Engine, EngineError, ErrorClass};
use retrofit_core::sensitivity::{sobol_sequence, SaConfig};
use retrofit_core::surrogate::mls_weight;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetrofitStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed or out-of-range input.
    InvalidInput = 3,
    /// Well-formed input the data cannot answer, such as an empty reference group.
    DomainError = 4,
    Internal = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// An itemised electricity bill; mirrors the JSON `bill` object.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RetrofitBill {
    pub sek_month: f64,
    pub sek_vat: f64,
    pub sek_fee: f64,
    pub sek_price: f64,
    pub sek_tax: f64,
    pub sek_network: f64,
    pub months_covered: u32,
    pub separate_supplier_and_grid: bool,
}

/// A loaded or synthesized record set together with the default tables.
pub struct RetrofitDataset {
    engine: DatasetEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure {
    status: RetrofitStatus,
    message: String,
}

impl Failure {
    fn new(status: RetrofitStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let status = match e.class() {
            ErrorClass::Input => RetrofitStatus::InvalidInput,
            ErrorClass::Domain => RetrofitStatus::DomainError,
            ErrorClass::Internal => RetrofitStatus::Internal,
        };
        Self::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RetrofitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RetrofitStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {what}"));
            RetrofitStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(RetrofitStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn utf8<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(RetrofitStatus::InvalidUtf8, format!("`{name}`: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn retrofit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn retrofit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// kWh consumed during the billed period and, optionally, scaled to a year.
///
/// # Safety
/// `bill` must point to a valid `RetrofitBill`; `out_period_kwh` and
/// `out_annual_kwh` must each be null or writable.
#[no_mangle]
pub unsafe extern "C" fn retrofit_bill_to_kwh(
    bill: *const RetrofitBill,
    out_period_kwh: *mut f64,
    out_annual_kwh: *mut f64,
) -> RetrofitStatus {
    guard(|| {
        non_null(bill, "bill")?;
        let b = &*bill;
        let bill = BillBreakdown {
            sek_month: b.sek_month,
            sek_vat: b.sek_vat,
            sek_fee: b.sek_fee,
            sek_price: b.sek_price,
            sek_tax: b.sek_tax,
            sek_network: b.sek_network,
            months_covered: b.months_covered,
            separate_supplier_and_grid: b.separate_supplier_and_grid,
        };
        let period = bill.period_kwh().map_err(EngineError::from)?;
        let annual = bill.annual_kwh().map_err(EngineError::from)?;
        if !out_period_kwh.is_null() {
            *out_period_kwh = period;
        }
        if !out_annual_kwh.is_null() {
            *out_annual_kwh = annual;
        }
        Ok(())
    })
}

/// Energy use intensity in kWh per m² and year.
///
/// # Safety
/// `out_eui` must be writable.
#[no_mangle]
pub unsafe extern "C" fn retrofit_compute_eui(total_kwh: f64, area_m2: f64, out_eui: *mut f64) -> RetrofitStatus {
    guard(|| {
        non_null(out_eui, "out_eui")?;
        *out_eui = compute_eui(total_kwh, area_m2).map_err(EngineError::from)?.eui;
        Ok(())
    })
}

/// Compactly supported cubic weight of a normalized distance.
#[no_mangle]
pub extern "C" fn retrofit_mls_weight(s: f64) -> f64 {
    mls_weight(s)
}

/// Write `n` quasi-random points in `[0, 1)^dims`, starting at index `skip`,
/// row-major into `out`, which must hold `out_len >= n * dims` doubles.
///
/// # Safety
/// `out` must be writable for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn retrofit_sobol_sequence(
    n: usize,
    dims: usize,
    skip: u64,
    out: *mut f64,
    out_len: usize,
) -> RetrofitStatus {
    guard(|| {
        non_null(out, "out")?;
        let needed =
            n.checked_mul(dims).ok_or_else(|| Failure::new(RetrofitStatus::InvalidInput, "n * dims overflows"))?;
        if out_len < needed {
            return Err(Failure::new(
                RetrofitStatus::InvalidInput,
                format!("output holds {out_len} values, {needed} needed"),
            ));
        }
        let points = sobol_sequence(n, dims, skip).map_err(EngineError::from)?;
        let out = std::slice::from_raw_parts_mut(out, needed);
        for i in 0..n {
            for d in 0..dims {
                out[i * dims + d] = points[(i, d)];
            }
        }
        Ok(())
    })
}

fn hand_out(dataset: *mut *mut RetrofitDataset, engine: DatasetEngine) {
    // SAFETY: callers check `dataset` for null first.
    unsafe { *dataset = Box::into_raw(Box::new(RetrofitDataset { engine })) };
}

/// Load a store written by `retrofit synth` or `retrofit ingest`.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out_dataset` must be writable.
#[no_mangle]
pub unsafe extern "C" fn retrofit_dataset_load(
    path: *const c_char,
    out_dataset: *mut *mut RetrofitDataset,
) -> RetrofitStatus {
    guard(|| {
        non_null(out_dataset, "out_dataset")?;
        let path = utf8(path, "path")?;
        let set = load_store(Path::new(path)).map_err(EngineError::from)?;
        hand_out(out_dataset, DatasetEngine::new(set));
        Ok(())
    })
}

/// Generate `n` synthetic records from `seed` with the default generator settings.
///
/// # Safety
/// `out_dataset` must be writable.
#[no_mangle]
pub unsafe extern "C" fn retrofit_dataset_synthesize(
    n: usize,
    seed: u64,
    out_dataset: *mut *mut RetrofitDataset,
) -> RetrofitStatus {
    guard(|| {
        non_null(out_dataset, "out_dataset")?;
        let set = generate_synthetic(&SynthConfig { n, seed, ..SynthConfig::default() }).map_err(EngineError::from)?;
        hand_out(out_dataset, DatasetEngine::new(set));
        Ok(())
    })
}

/// Number of records, or 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn retrofit_dataset_len(dataset: *const RetrofitDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.engine.dataset().len())
}

/// Release a dataset. Null is ignored.
///
/// # Safety
/// `dataset` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn retrofit_dataset_free(dataset: *mut RetrofitDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Shared body of the JSON entry points: on engine errors the output holds
/// the error body so callers get the same detail as the HTTP service.
unsafe fn json_call(
    dataset: *const RetrofitDataset,
    out_json: *mut *mut c_char,
    run: impl FnOnce(&DatasetEngine) -> Result<String, EngineError>,
) -> RetrofitStatus {
    guard(|| {
        non_null(out_json, "out_json")?;
        *out_json = ptr::null_mut();
        non_null(dataset, "dataset")?;
        match run(&(*dataset).engine) {
            Ok(json) => {
                *out_json = into_c_string(json);
                Ok(())
            }
            Err(e) => {
                *out_json = into_c_string(to_json(&e.body()));
                Err(e.into())
            }
        }
    })
}

/// Benchmark one house. `request_json` is a benchmark request object; the
/// response (or error body) is written to `out_json`.
///
/// # Safety
/// `dataset` must be a live handle, `request_json` a NUL-terminated string
/// and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn retrofit_benchmark_json(
    dataset: *const RetrofitDataset,
    request_json: *const c_char,
    out_json: *mut *mut c_char,
) -> RetrofitStatus {
    let request = match utf8(request_json, "request_json") {
        Ok(s) => s,
        Err(f) => return guard(|| Err(f)),
    };
    json_call(dataset, out_json, |engine| {
        let request = BenchmarkRequest::from_json(request.as_bytes())?;
        Ok(to_json(&engine.benchmark(&request)?))
    })
}

/// Run the sensitivity analysis. `config_json` may be null for the defaults;
/// the report list (or error body) is written to `out_json`.
///
/// # Safety
/// `dataset` must be a live handle, `config_json` null or a NUL-terminated
/// string and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn retrofit_sensitivity_json(
    dataset: *const RetrofitDataset,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> RetrofitStatus {
    let config = if config_json.is_null() {
        None
    } else {
        match utf8(config_json, "config_json") {
            Ok(s) => Some(s),
            Err(f) => return guard(|| Err(f)),
        }
    };
    json_call(dataset, out_json, |engine| {
        let config: SaConfig = match config {
            Some(text) => parse_json(text.as_bytes())?,
            None => SaConfig::default(),
        };
        Ok(to_json(&engine.sensitivity(&config)?))
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn retrofit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
