//! Artifact and manifest persistence.
//!
//! A run writes `{kind}-{hash}.json`, an optional `{kind}-{hash}.csv` and
//! `manifest-{hash}.json`, where `hash` is derived from the seed and the
//! experiment alone. Only the manifest carries timestamps and timings, so
//! repeated runs produce byte-identical artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::{Ctx, Output};
use crate::config::Experiment;
use crate::{CliError, RunRequest};

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub kind: String,
    pub key: String,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub operation: String,
    pub seconds: f64,
}

/// Rows of a CSV file with a header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut r = csv::Reader::from_path(path).map_err(err)?;
        let header = r.headers().map_err(err)?.iter().map(String::from).collect();
        let rows = r.records().map(|rec| rec.map(|rec| rec.iter().map(String::from).collect())).collect::<Result<_, _>>().map_err(err)?;
        Ok(Self { header, rows })
    }
}

/// Formats a number for CSV output: shortest round-trip digits, exponent form for tiny or huge values.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub artifact_kind: String,
    /// File name of the manifest describing the run that produced this artifact.
    pub manifest: String,
    pub config_hash: String,
    pub seed: u64,
    pub experiment: Experiment,
    /// File name of the CSV sibling, if any.
    pub csv: Option<String>,
    pub checks: Vec<Check>,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub library_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub experiment_kind: String,
    pub seed: u64,
    pub workers: Option<usize>,
    pub cache_dir: Option<String>,
    pub caches: Vec<CacheRecord>,
    pub timings: Vec<Timing>,
    pub artifacts: Vec<String>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub config_hash: String,
    pub paths: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

/// SHA-256 of the seed and the experiment, which fully determine the results.
pub fn config_hash(seed: u64, experiment: &Experiment) -> Result<String, CliError> {
    let text = serde_json::to_string(&(seed, experiment)).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(lflab::cache::sha256_hex(text.as_bytes()))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_run(req: &RunRequest, ctx: &Ctx, output: Output, started: f64) -> Result<RunSummary, CliError> {
    let kind = req.experiment.kind();
    let hash = config_hash(req.seed, &req.experiment)?;
    let short = &hash[..16];
    let manifest_name = format!("manifest-{short}.json");
    let json_name = format!("{kind}-{short}.json");
    let csv_name = output.table.as_ref().map(|_| format!("{kind}-{short}.csv"));

    let artifact = Artifact {
        artifact_kind: kind.to_string(),
        manifest: manifest_name.clone(),
        config_hash: hash.clone(),
        seed: req.seed,
        experiment: req.experiment.clone(),
        csv: csv_name.clone(),
        checks: output.checks.clone(),
        data: output.data,
    };
    let artifact_bytes = to_json(&artifact)?;
    let csv_bytes = output.table.as_ref().map(Table::to_csv).transpose()?;

    fs::create_dir_all(&req.out_dir).map_err(|e| CliError::Io(format!("{}: {e}", req.out_dir.display())))?;
    let mut paths = Vec::new();
    let mut names = Vec::new();
    if let (Some(name), Some(bytes)) = (&csv_name, &csv_bytes) {
        let p = req.out_dir.join(name);
        write_atomic(&p, bytes)?;
        paths.push(p);
        names.push(name.clone());
    }
    let p = req.out_dir.join(&json_name);
    write_atomic(&p, &artifact_bytes)?;
    paths.push(p);
    names.push(json_name);

    let manifest = RunManifest {
        config_hash: hash.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        library_version: lflab::VERSION.to_string(),
        started_unix: started,
        finished_unix: unix_now(),
        experiment_kind: kind.to_string(),
        seed: req.seed,
        workers: req.workers,
        cache_dir: ctx.cache_dir(),
        caches: ctx.caches.clone(),
        timings: ctx.timings.clone(),
        artifacts: names,
        checks: output.checks.clone(),
    };
    let p = req.out_dir.join(&manifest_name);
    write_atomic(&p, &to_json(&manifest)?)?;
    paths.push(p);
    Ok(RunSummary { config_hash: hash, paths, checks: output.checks })
}
