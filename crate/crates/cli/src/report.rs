//! Run reports and their CSV serialization.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every f64 bit-exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use greedylab_core::analysis::{CounterexampleReport, LowerBoundReport, RateEstimate};

/// One completed greedy iteration as reported to CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub k: usize,
    pub residual_norm: f64,
    pub correlation: f64,
    /// Cumulative packing sum; absent for schemes without orthogonal
    /// component norms.
    pub packing_cumsum: Option<f64>,
}

/// Outcome of a ridge2d or noise run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
    pub rate: Option<RateEstimate>,
    pub passed: bool,
    pub duration: Duration,
}

/// Outcome of the lower-bound sweep.
#[derive(Debug, Clone)]
pub struct LowerBoundSweep {
    pub reports: Vec<LowerBoundReport>,
    pub fit: Option<RateEstimate>,
    pub passed: bool,
    pub duration: Duration,
}

/// Outcome of the counterexample sweep.
#[derive(Debug, Clone)]
pub struct CounterexampleSweep {
    pub reports: Vec<CounterexampleReport>,
    /// Variation norms increase as epsilon decreases.
    pub monotone: bool,
    pub passed: bool,
    pub duration: Duration,
}

/// 17-significant-digit scientific notation; parses back bit-exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn run_csv(rows: &[RunRow]) -> String {
    let mut out = String::from("k,residual_norm,correlation,packing_cumsum\n");
    for row in rows {
        let packing = row.packing_cumsum.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.k,
            fmt_f64(row.residual_norm),
            fmt_f64(row.correlation),
            packing
        );
    }
    out
}

pub fn lower_bound_csv(reports: &[LowerBoundReport]) -> String {
    let mut out = String::from("n,residual_norm,bound,ratio\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n,
            fmt_f64(r.residual_norm),
            fmt_f64(r.bound),
            fmt_f64(r.residual_norm / r.bound)
        );
    }
    out
}

pub fn counterexample_csv(reports: &[CounterexampleReport]) -> String {
    let mut out = String::from("epsilon,variation_norm,bound\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(r.epsilon),
            fmt_f64(r.variation.value),
            fmt_f64(r.norm_lower_bound)
        );
    }
    out
}

/// Parses CSV produced by [`run_csv`].
pub fn parse_run_csv(text: &str) -> Result<Vec<RunRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("k,residual_norm,correlation,packing_cumsum") => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(format!("expected 4 fields, got {}: {line}", fields.len()));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("{e}: {s}"));
            Ok(RunRow {
                k: fields[0].parse().map_err(|e| format!("{e}: {}", fields[0]))?,
                residual_norm: parse(fields[1])?,
                correlation: parse(fields[2])?,
                packing_cumsum: if fields[3].is_empty() { None } else { Some(parse(fields[3])?) },
            })
        })
        .collect()
}

/// Errors mapped to the process exit codes: usage 2, I/O 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<greedylab_core::Error> for CliError {
    fn from(e: greedylab_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
