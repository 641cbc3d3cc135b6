use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use retrofit_core::datastore::{
    anonymize, generate_synthetic, ingest_epc_csv, load_store, save_store, RecordSet, SynthConfig,
};
use retrofit_core::engine::{to_json, BenchmarkRequest, DatasetEngine, Engine, EngineError, ErrorClass};
use retrofit_core::sensitivity::{render_table, Estimator, ReportStatus, SaConfig};
use retrofit_core::surrogate::BasisKind;

#[derive(Parser)]
#[command(name = "retrofit", version, about = "Energy benchmarking, retrofit advice and sensitivity analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an EPC CSV file and save the kept rows as a store.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, env = "RETROFIT_STORE")]
        store: PathBuf,
        /// Hex-encoded HMAC key; record ids are replaced by keyed digests.
        #[arg(long, value_parser = parse_key)]
        anonymize_key: Option<HmacKey>,
    },
    /// Generate a synthetic store.
    Synth {
        #[arg(long, default_value_t = SynthConfig::default().n)]
        n: usize,
        #[arg(long, default_value_t = SynthConfig::default().seed)]
        seed: u64,
        #[arg(long, env = "RETROFIT_STORE")]
        store: PathBuf,
    },
    /// Benchmark one house and print the response JSON.
    Benchmark {
        #[arg(long, env = "RETROFIT_STORE")]
        store: PathBuf,
        /// House profile as inline JSON or a path to a JSON file.
        #[arg(long)]
        profile: String,
        /// Energy inputs as inline JSON or a path to a JSON file.
        #[arg(long)]
        energy: String,
    },
    /// Run the sensitivity analysis and write one report per surrogate.
    Sa {
        #[arg(long, env = "RETROFIT_STORE")]
        store: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value = "jansen")]
        estimator: Estimator,
        #[arg(long, value_delimiter = ',', default_value = "quad,full,mls")]
        surrogates: Vec<BasisKind>,
        /// Index of the first quasi-random point used.
        #[arg(long, default_value_t = 0)]
        skip: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the HTTP API until interrupted.
    Serve {
        #[arg(long, env = "RETROFIT_STORE")]
        store: PathBuf,
        #[arg(long, env = "RETROFIT_ADDR", default_value = "127.0.0.1:8080")]
        addr: String,
    },
}

#[derive(Clone)]
struct HmacKey(Vec<u8>);

fn parse_key(s: &str) -> Result<HmacKey, String> {
    let key = hex::decode(s).map_err(|e| format!("not a hex string: {e}"))?;
    if key.is_empty() {
        return Err("key must not be empty".into());
    }
    Ok(HmacKey(key))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e.class() {
            ErrorClass::Input => 2,
            ErrorClass::Domain => 3,
            ErrorClass::Internal => 4,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<retrofit_core::datastore::DataError> for Failure {
    fn from(e: retrofit_core::datastore::DataError) -> Self {
        EngineError::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Ingest { input, store, anonymize_key } => {
            ingest(&input, &store, anonymize_key.as_ref().map(|k| k.0.as_slice()))
        }
        Command::Synth { n, seed, store } => synth(n, seed, &store),
        Command::Benchmark { store, profile, energy } => benchmark(&store, &profile, &energy),
        Command::Sa { store, samples, estimator, surrogates, skip, out } => {
            let config = SaConfig { n_samples: samples, estimator, surrogates, skip, ..SaConfig::default() };
            sa(&store, &config, &out)
        }
        Command::Serve { store, addr } => serve(&store, &addr),
    }
}

fn ingest(input: &Path, store: &Path, key: Option<&[u8]>) -> Result<(), Failure> {
    let file = fs::File::open(input).map_err(|e| Failure::input(format!("{}: {e}", input.display())))?;
    let (set, report) = ingest_epc_csv(std::io::BufReader::new(file))?;
    for r in &report.rejected {
        eprintln!("line {}: {}", r.line, r.reason);
    }
    let set = match key {
        Some(key) => anonymize(&set, key),
        None => set,
    };
    let meta = save_store(&set, store)?;
    println!("rows read: {}", report.rows_in);
    println!("rows kept: {}", report.rows_kept);
    println!("rows rejected: {}", report.rejected.len());
    println!("anonymized: {}", meta.anonymized);
    println!("sha256: {}", meta.sha256);
    Ok(())
}

fn synth(n: usize, seed: u64, store: &Path) -> Result<(), Failure> {
    let set = generate_synthetic(&SynthConfig { n, seed, ..SynthConfig::default() })?;
    let meta = save_store(&set, store)?;
    println!("records: {}", meta.records);
    println!("sha256: {}", meta.sha256);
    Ok(())
}

fn load(store: &Path) -> Result<RecordSet, Failure> {
    Ok(load_store(store)?)
}

/// Inline JSON when the argument looks like an object, otherwise a file path.
fn json_object(arg: &str, flag: &str) -> Result<serde_json::Map<String, serde_json::Value>, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::input(format!("--{flag} {arg}: {e}")))?
    };
    match serde_json::from_str(&text) {
        Ok(serde_json::Value::Object(map)) => Ok(map),
        Ok(_) => Err(Failure::input(format!("--{flag} must be a JSON object"))),
        Err(e) => Err(Failure::input(format!("--{flag}: {e}"))),
    }
}

fn benchmark(store: &Path, profile: &str, energy: &str) -> Result<(), Failure> {
    let engine = DatasetEngine::new(load(store)?);
    let mut request = json_object(profile, "profile")?;
    for (k, v) in json_object(energy, "energy")? {
        if request.insert(k.clone(), v).is_some() {
            return Err(Failure::input(format!("`{k}` given in both --profile and --energy")));
        }
    }
    let bytes = serde_json::to_vec(&request).expect("a JSON map serializes");
    let request = BenchmarkRequest::from_json(&bytes)?;
    let response = engine.benchmark(&request)?;
    print!("{}", to_json(&response));
    Ok(())
}

fn sa(store: &Path, config: &SaConfig, out: &Path) -> Result<(), Failure> {
    config.validate().map_err(EngineError::from)?;
    let engine = DatasetEngine::new(load(store)?);
    let reports = engine.sensitivity(config)?;
    fs::create_dir_all(out).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    for report in &reports {
        let stem = report.surrogate.short_name();
        for (ext, body) in [("json", to_json(report)), ("csv", report.to_csv())] {
            let path = out.join(format!("{stem}.{ext}"));
            fs::write(&path, body).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        }
    }
    print!("{}", render_table(&reports));
    let flat: Vec<&str> =
        reports.iter().filter(|r| r.status == ReportStatus::ZeroVariance).map(|r| r.surrogate.short_name()).collect();
    if !flat.is_empty() {
        return Err(Failure {
            code: 3,
            message: format!("the response has zero variance under {}; no indices computed", flat.join(", ")),
        });
    }
    Ok(())
}

fn serve(store: &Path, addr: &str) -> Result<(), Failure> {
    let dataset = load(store)?;
    let ansi = std::io::IsTerminal::is_terminal(&std::io::stderr());
    tracing_subscriber::fmt().with_writer(std::io::stderr).with_target(false).with_ansi(ansi).init();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure { code: 4, message: format!("cannot start runtime: {e}") })?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::input(format!("cannot listen on {addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| Failure { code: 4, message: e.to_string() })?;
        tracing::info!(records = dataset.len(), "store loaded from {}", store.display());
        println!("listening on http://{local}");
        let _ = std::io::stdout().flush();
        let engine: Arc<dyn Engine> = Arc::new(DatasetEngine::new(dataset));
        retrofit_core::service::serve(listener, engine, shutdown_signal())
            .await
            .map_err(|e| Failure { code: 4, message: format!("server failed: {e}") })?;
        tracing::info!("shut down");
        Ok(())
    })
}

async fn shutdown_signal() {
    let interrupt = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    {
        let mut term = match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(s) => s,
            Err(_) => return interrupt.await,
        };
        tokio::select! {
            _ = interrupt => {}
            _ = term.recv() => {}
        }
    }
    #[cfg(not(unix))]
    interrupt.await;
}
