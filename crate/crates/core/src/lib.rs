//! Decision support for building energy retrofits.
//!
//! - [`energy`]: bills and fuels to annual kWh and EUI.
//! - [`datastore`]: EPC-style reference records (CSV ingest, anonymization,
//!   synthetic generation, persistence).
//! - [`benchmark`]: peer groups, 5-point rating and renovation advice.
//! - [`surrogate`]: polynomial OLS and moving least squares regressors.
//! - [`sensitivity`]: Sobol sequences and variance-based sensitivity indices.
//! - [`engine`] and [`service`]: the request-level API shared by the CLI and
//!   the HTTP server.

pub mod benchmark;
pub mod datastore;
pub mod energy;
pub mod engine;
pub mod sensitivity;
pub mod service;
pub mod surrogate;
