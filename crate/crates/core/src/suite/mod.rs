//! Check suites shared by the command-line tool and the acceptance tests, and
//! the JSON/CSV report they produce.

mod analytic;
mod exact;
mod kz;
mod qkz;
mod trace;

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, RunConfig, Suite};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// What a check measured: it passes when `residual ≤ tolerance`.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub residual: f64,
    pub tolerance: f64,
    pub note: Option<String>,
    pub skipped: bool,
}

impl Outcome {
    pub fn numeric(residual: f64, tolerance: f64) -> Self {
        Outcome { residual, tolerance, note: None, skipped: false }
    }

    /// Exact checks count failing items and tolerate none.
    pub fn exact(failures: usize) -> Self {
        Outcome::numeric(failures as f64, 0.0)
    }

    pub fn skip(reason: impl Into<String>) -> Self {
        Outcome { residual: 0.0, tolerance: 0.0, note: Some(reason.into()), skipped: true }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

type Runner = Box<dyn Fn() -> Result<Outcome, String> + Send + Sync>;

/// A named check waiting to be run.
pub struct CheckSpec {
    pub id: String,
    pub anchor: &'static str,
    pub suite: Suite,
    run: Runner,
}

impl CheckSpec {
    pub fn new<F>(suite: Suite, id: impl Into<String>, anchor: &'static str, run: F) -> Self
    where
        F: Fn() -> Result<Outcome, String> + Send + Sync + 'static,
    {
        CheckSpec { id: id.into(), anchor, suite, run: Box::new(run) }
    }
}

/// One line of the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub suite: Suite,
    pub status: Status,
    /// `null` when the check errored or produced a non-finite value.
    pub residual: Option<f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Wall time; kept out of the JSON so reports are byte-identical across runs.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: ToolInfo,
    pub config: serde_json::Value,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Records whose id starts with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.checks.iter().filter(move |c| c.id.starts_with(prefix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// CSV with columns `check_id,anchor,status,residual,tolerance,seconds`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check_id", "anchor", "status", "residual", "tolerance", "seconds"]).expect("in-memory write");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            let residual = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
            w.write_record([
                c.id.as_str(),
                c.anchor.as_str(),
                status,
                &residual,
                &format!("{:e}", c.tolerance),
                &format!("{:.3}", c.seconds),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Write `report.json` and `residuals.csv` into `dir`.
    pub fn emit(&self, dir: &Path) -> Result<(), SuiteError> {
        let io = |p: &Path, e: std::io::Error| SuiteError::Io { path: p.display().to_string(), reason: e.to_string() };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let json = dir.join("report.json");
        std::fs::write(&json, self.to_json()).map_err(|e| io(&json, e))?;
        let csv = dir.join("residuals.csv");
        std::fs::write(&csv, self.to_csv()).map_err(|e| io(&csv, e))?;
        Ok(())
    }
}

/// Every check of the selected suites, in report order.
pub fn collect_checks(cfg: &RunConfig) -> Result<Vec<CheckSpec>, SuiteError> {
    let instance = cfg.instance()?;
    let mut out = Vec::new();
    for &s in &cfg.suites {
        match s {
            Suite::Exact => out.extend(exact::checks(cfg)),
            Suite::Analytic => out.extend(analytic::checks(cfg)),
            Suite::Qkz => out.extend(qkz::checks(cfg, &instance)),
            Suite::Kz => out.extend(kz::checks(cfg)),
            Suite::Trace => out.extend(trace::checks(cfg)),
        }
    }
    Ok(out)
}

fn run_one(spec: &CheckSpec) -> CheckRecord {
    let start = Instant::now();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (spec.run)()))
        .unwrap_or_else(|_| Err("check panicked".to_string()));
    let seconds = start.elapsed().as_secs_f64();
    let (status, residual, tolerance, note) = match result {
        Ok(o) if o.skipped => (Status::Skip, None, o.tolerance, o.note),
        Ok(o) if o.residual.is_finite() => {
            let status = if o.residual <= o.tolerance { Status::Pass } else { Status::Fail };
            (status, Some(o.residual), o.tolerance, o.note)
        }
        Ok(o) => (Status::Fail, None, o.tolerance, Some(o.note.unwrap_or_else(|| "non-finite residual".into()))),
        Err(e) => (Status::Fail, None, 0.0, Some(e)),
    };
    CheckRecord { id: spec.id.clone(), anchor: spec.anchor.to_string(), suite: spec.suite, status, residual, tolerance, note, seconds }
}

/// Run the configured suites on `cfg.jobs` threads; records keep the check order.
pub fn run_suite(cfg: &RunConfig) -> Result<Report, SuiteError> {
    let specs = collect_checks(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().map_err(|e| SuiteError::Pool(e.to_string()))?;
    let checks: Vec<CheckRecord> = pool.install(|| specs.par_iter().map(run_one).collect());
    let mut summary = Summary { total: checks.len(), ..Default::default() };
    for c in &checks {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skip => summary.skip += 1,
        }
    }
    Ok(Report {
        schema: SCHEMA_VERSION,
        tool: ToolInfo { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() },
        config: serde_json::to_value(cfg).expect("config serializes"),
        summary,
        checks,
    })
}

/// Largest relative deviation `max|a−b| / max|b|` between two state vectors.
pub(crate) fn rel_diff(a: &crate::qkz::StateVector, b: &crate::qkz::StateVector) -> f64 {
    a.sub(b).sup_norm() / b.sup_norm()
}

pub(crate) fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}
