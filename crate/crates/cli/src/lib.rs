//! Library side of the `dioph` command line: each command returns an [`Output`], and
//! [`write_outputs`] prints the report and, with `--out`, writes it next to a
//! [`RunManifest`].

pub mod commands;
pub mod config;
pub mod parse;

use std::path::{Path, PathBuf};

use angles::AngleError;
use certified::CertError;
use construct::{ConstructError, Mode};
use exactlin::ExactError;
use exponents::ExpError;
use search::SearchError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use spectrum::SpectrumError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_TOLERANCE: u8 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Precision(_) => EXIT_PRECISION,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Validation(_) => "validation",
            CliError::Precision(_) => "precision",
            CliError::Io(_) => "io",
        }
    }

    /// Machine-readable form printed on failure.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "status": "error", "kind": self.kind(), "message": self.to_string() });
        if let CliError::Parse { line, column, .. } = self {
            v["line"] = (*line).into();
            v["column"] = (*column).into();
        }
        v
    }
}

fn cert(e: &CertError) -> CliError {
    match e {
        CertError::PrecisionExhausted { .. } => CliError::Precision(e.to_string()),
        _ => CliError::Validation(e.to_string()),
    }
}

impl From<CertError> for CliError {
    fn from(e: CertError) -> Self {
        cert(&e)
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ExpError> for CliError {
    fn from(e: ExpError) -> Self {
        match e {
            ExpError::Ambiguous(_) => CliError::Precision(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AngleError> for CliError {
    fn from(e: AngleError) -> Self {
        match &e {
            AngleError::Cert(c) => cert(c),
            AngleError::InsufficientTruncation { .. } => CliError::Precision(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Angle(a) => a.into(),
            ConstructError::Exponent(x) => x.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Cert(c) => c.into(),
            SearchError::Io(_) | SearchError::Csv(_) => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Flags shared by every command.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Globals {
    pub seed: Option<u64>,
    pub precision_bits: u32,
    pub mode: Option<Mode>,
    pub workers: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for Globals {
    fn default() -> Self {
        Globals { seed: None, precision_bits: 256, mode: None, workers: 1, out: None }
    }
}

impl Globals {
    pub fn precision(&self) -> Result<certified::PrecisionConfig, CliError> {
        Ok(certified::PrecisionConfig::new(self.precision_bits, 8)?)
    }
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Output {
    pub command: String,
    /// The effective configuration, after flag overrides.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub report: serde_json::Value,
    /// CSV table, for scans.
    pub csv: Option<Vec<u8>>,
    pub exit: u8,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<String>,
    pub versions: serde_json::Value,
    pub elapsed_ms: String,
    /// File name → SHA-256 of its bytes.
    pub digests: serde_json::Map<String, serde_json::Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The report as written: pretty JSON with a trailing newline.
pub fn report_bytes(o: &Output) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(&o.report).expect("report serializes");
    b.push(b'\n');
    b
}

pub fn manifest(o: &Output, elapsed: std::time::Duration) -> RunManifest {
    let mut digests = serde_json::Map::new();
    digests.insert("report.json".into(), sha256_hex(&report_bytes(o)).into());
    if let Some(csv) = &o.csv {
        digests.insert("records.csv".into(), sha256_hex(csv).into());
    }
    RunManifest {
        command: o.command.clone(),
        config: o.config.clone(),
        seed: o.seed.map(|s| s.to_string()),
        versions: serde_json::json!({ "dioph": env!("CARGO_PKG_VERSION") }),
        elapsed_ms: elapsed.as_millis().to_string(),
        digests,
    }
}

/// Writes `report.json`, `records.csv` (if any) and `manifest.json` into `dir`.
pub fn write_outputs(o: &Output, dir: &Path, elapsed: std::time::Duration) -> Result<RunManifest, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("report.json"), report_bytes(o)).map_err(io)?;
    if let Some(csv) = &o.csv {
        std::fs::write(dir.join("records.csv"), csv).map_err(io)?;
    }
    let m = manifest(o, elapsed);
    let mut b = serde_json::to_vec_pretty(&m).expect("manifest serializes");
    b.push(b'\n');
    std::fs::write(dir.join("manifest.json"), b).map_err(io)?;
    Ok(m)
}
