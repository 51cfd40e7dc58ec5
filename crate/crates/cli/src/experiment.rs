//! The experiment commands behind the CLI subcommands.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use greedylab_core::analysis::{
    fit_log_log, fit_rate, noise_robustness_check, verify_counterexample, verify_lower_bound,
    RateEstimate, DEFAULT_SKIP_PREFIX,
};
use greedylab_core::greedy::{run, Algorithm, DEFAULT_STOP_TOLERANCE};
use greedylab_core::dictionary::RidgeDictionary;
use greedylab_core::space::SampleSet;

use crate::report::{
    counterexample_csv, lower_bound_csv, run_csv, write_text, CliError, CounterexampleSweep,
    LowerBoundSweep, RunReport, RunRow,
};
use crate::svg::log_log_plot;

/// The target of the planar ridge experiment:
/// f(x, y) = sin²(π(x+y)) · sin(π(x − y²)).
pub fn oscillatory_target(x: f64, y: f64) -> f64 {
    let s = (PI * (x + y)).sin();
    s * s * (PI * (x - y * y)).sin()
}

/// Output format for experiment artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

/// Fully resolved experiment parameters (one struct shared by all
/// subcommands; each reads the fields it needs).
#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub num_samples: usize,
    pub iterations: usize,
    pub algorithm: Algorithm,
    pub alpha: f64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub noise_scale: f64,
    pub skip_prefix: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            num_samples: 5000,
            iterations: 100,
            algorithm: Algorithm::Oga,
            alpha: 0.25,
            epsilon: None,
            delta: None,
            noise_scale: 0.05,
            skip_prefix: DEFAULT_SKIP_PREFIX,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl Config {
    fn validate_common(&self) -> Result<(), CliError> {
        if self.num_samples == 0 {
            return Err(CliError::Usage("--num-samples must be at least 1".into()));
        }
        if self.iterations == 0 {
            return Err(CliError::Usage("--iterations must be at least 1".into()));
        }
        if self.alpha <= 0.0 || self.alpha.is_nan() {
            return Err(CliError::Usage(format!("--alpha must be positive, got {}", self.alpha)));
        }
        if self.noise_scale < 0.0 {
            return Err(CliError::Usage(format!(
                "--noise-scale must be nonnegative, got {}",
                self.noise_scale
            )));
        }
        self.algorithm.validate().map_err(CliError::from)
    }

    fn csv_path(&self) -> Option<PathBuf> {
        self.output.as_ref().map(|p| match self.format {
            OutputFormat::Csv => p.clone(),
            _ => p.with_extension("csv"),
        })
    }

    fn svg_path(&self) -> Option<PathBuf> {
        self.output.as_ref().map(|p| match self.format {
            OutputFormat::Svg => p.clone(),
            _ => p.with_extension("svg"),
        })
    }

    fn emit(
        &self,
        csv: &str,
        svg: impl FnOnce() -> String,
        out: &mut impl std::io::Write,
    ) -> Result<(), CliError> {
        match self.format {
            OutputFormat::Csv => {
                if let Some(path) = self.csv_path() {
                    write_text(&path, csv)?;
                    emit_note(out, "csv", &path);
                }
            }
            OutputFormat::Svg => {
                if let Some(path) = self.svg_path() {
                    write_text(&path, &svg())?;
                    emit_note(out, "svg", &path);
                }
            }
            OutputFormat::Both => {
                if let Some(path) = self.csv_path() {
                    write_text(&path, csv)?;
                    emit_note(out, "csv", &path);
                }
                if let Some(path) = self.svg_path() {
                    write_text(&path, &svg())?;
                    emit_note(out, "svg", &path);
                }
            }
        }
        Ok(())
    }
}

fn emit_note(out: &mut impl std::io::Write, kind: &str, path: &Path) {
    let _ = writeln!(out, "wrote {kind}: {}", path.display());
}

fn algorithm_name(algorithm: Algorithm) -> String {
    match algorithm {
        Algorithm::Oga => "oga".into(),
        Algorithm::Pga => "pga".into(),
        Algorithm::PgaShrink(s) => format!("pga-shrink({s})"),
        Algorithm::Rga => "rga".into(),
    }
}

fn rows_from_history(history: &[greedylab_core::greedy::StepRecord]) -> Vec<RunRow> {
    let mut packing = 0.0;
    history
        .iter()
        .map(|rec| RunRow {
            k: rec.k,
            residual_norm: rec.residual_norm,
            correlation: rec.correlation,
            packing_cumsum: rec.orth_component_norm.map(|norm| {
                packing += norm.powi(-2);
                packing
            }),
        })
        .collect()
}

fn fit_if_possible(
    rows: &[RunRow],
    skip_prefix: usize,
    out: &mut impl std::io::Write,
) -> Option<RateEstimate> {
    let errors: Vec<f64> = rows.iter().map(|r| r.residual_norm).collect();
    if errors.iter().any(|&e| e <= 0.0 || e.is_nan()) {
        let _ = writeln!(out, "warning: residual reached zero; no rate fit");
        return None;
    }
    match fit_rate(&errors, skip_prefix) {
        Ok(est) => Some(est),
        Err(_) => {
            let _ = writeln!(
                out,
                "warning: need at least {} iterations for a rate fit, have {}",
                skip_prefix + 3,
                errors.len()
            );
            None
        }
    }
}

/// Approximates the oscillatory target over a seeded sample set with
/// the configured greedy scheme and reports the error history, the
/// fitted convergence order, and the packing-sum diagnostic.
pub fn cmd_ridge2d(config: &Config, out: &mut impl std::io::Write) -> Result<RunReport, CliError> {
    config.validate_common()?;
    let started = Instant::now();
    let samples = SampleSet::generate(config.num_samples, config.seed);
    let target = samples.evaluate(oscillatory_target);
    let dictionary = RidgeDictionary::new(&samples);
    let state = run(
        config.algorithm,
        &dictionary,
        &target,
        config.iterations,
        DEFAULT_STOP_TOLERANCE,
    )?;
    let rows = rows_from_history(state.history());
    let duration = started.elapsed();

    let _ = writeln!(
        out,
        "ridge2d: algorithm={} seed={} samples={} iterations={}/{} ({:.1?})",
        algorithm_name(config.algorithm),
        config.seed,
        config.num_samples,
        rows.len(),
        config.iterations,
        duration
    );
    let _ = writeln!(out, "final residual norm: {:e}", state.residual_norm());
    let rate = fit_if_possible(&rows, config.skip_prefix, out);
    if let Some(est) = &rate {
        let _ = writeln!(
            out,
            "estimated convergence order: {:.3} (r²={:.4}, skipped first {})",
            est.order(),
            est.r_squared,
            est.skip_prefix
        );
    }

    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.k as f64, r.residual_norm)).collect();
    let annotation = rate.as_ref().map(|e| format!("order = {:.3}", e.order()));
    config.emit(
        &run_csv(&rows),
        || log_log_plot(&points, rate.as_ref(), "iteration", "residual norm", annotation.as_deref()),
        out,
    )?;

    Ok(RunReport { rows, rate, passed: true, duration })
}

/// Sharpness sweep: checks the closed-form residual and the
/// `2^{-(1+α)} n^{-1/2-α}` lower bound for n = 1, 2, 4, ... up to the
/// largest power of two within the iteration budget.
pub fn cmd_lower_bound(
    config: &Config,
    out: &mut impl std::io::Write,
) -> Result<LowerBoundSweep, CliError> {
    config.validate_common()?;
    let started = Instant::now();
    let mut reports = Vec::new();
    let mut n = 1usize;
    while n <= config.iterations {
        reports.push(verify_lower_bound(config.alpha, n)?);
        n *= 2;
    }

    let _ = writeln!(
        out,
        "lower-bound: alpha={} n = 1..{}",
        config.alpha,
        reports.last().map_or(1, |r| r.n)
    );
    let mut passed = true;
    for r in &reports {
        let ok = r.passed();
        passed &= ok;
        let _ = writeln!(
            out,
            "n={:<3} |r_n|={:.6e} bound={:.6e} ratio={:.4} {}",
            r.n,
            r.residual_norm,
            r.bound,
            r.residual_norm / r.bound,
            if ok { "PASS" } else { "FAIL" }
        );
    }

    let xs: Vec<f64> = reports.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.residual_norm).collect();
    let fit = fit_log_log(&xs, &ys).ok();
    if let Some(est) = &fit {
        let _ = writeln!(
            out,
            "fitted slope of |r_n|: {:.4} (asymptotic -(1/2+alpha) = {:.4})",
            est.slope,
            -(0.5 + config.alpha)
        );
    }

    let points: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    let annotation = fit.as_ref().map(|e| format!("slope = {:.3}", e.slope));
    config.emit(
        &lower_bound_csv(&reports),
        || log_log_plot(&points, fit.as_ref(), "n", "residual norm", annotation.as_deref()),
        out,
    )?;

    let _ = writeln!(out, "{}", if passed { "all checks passed" } else { "CHECKS FAILED" });
    Ok(LowerBoundSweep { reports, fit, passed, duration: started.elapsed() })
}

/// Default epsilon sweep for the counterexample command: inside the
/// range where the absolute-correlation selection follows the
/// (x₃, x₂, x₁) chain, the variation norm of the 3-step iterate grows
/// as epsilon decreases.
pub const COUNTEREXAMPLE_SWEEP: [f64; 4] = [0.49, 0.48, 0.47, 0.46];

/// Verifies the unbounded-iterate construction over an epsilon sweep.
pub fn cmd_counterexample(
    config: &Config,
    out: &mut impl std::io::Write,
) -> Result<CounterexampleSweep, CliError> {
    config.validate_common()?;
    let started = Instant::now();
    let epsilons: Vec<f64> = match config.epsilon {
        Some(e) => vec![e],
        None => {
            if config.delta.is_some() {
                return Err(CliError::Usage("--delta requires --epsilon".into()));
            }
            COUNTEREXAMPLE_SWEEP.to_vec()
        }
    };

    let mut reports = Vec::new();
    for &epsilon in &epsilons {
        let delta = config.delta.unwrap_or(epsilon / 4.0);
        reports.push(verify_counterexample(epsilon, delta)?);
    }

    let _ = writeln!(out, "counterexample: epsilon sweep {epsilons:?}");
    let mut passed = true;
    for r in &reports {
        let ok = r.passed();
        passed &= ok;
        let _ = writeln!(
            out,
            "eps={:<5} delta={:<6} variation_norm={:.6} bound={:.6} {}",
            r.epsilon,
            r.delta,
            r.variation.value,
            r.norm_lower_bound,
            if ok { "PASS" } else { "FAIL" }
        );
        for m in &r.mismatches {
            let _ = writeln!(out, "  mismatch: {m}");
        }
    }
    let monotone = reports.windows(2).all(|w| w[1].variation.value > w[0].variation.value);
    if reports.len() > 1 {
        let _ = writeln!(
            out,
            "variation norm grows as epsilon decreases: {}",
            if monotone { "yes" } else { "NO" }
        );
        passed &= monotone;
    }

    let points: Vec<(f64, f64)> =
        reports.iter().map(|r| (r.epsilon, r.variation.value)).collect();
    config.emit(
        &counterexample_csv(&reports),
        || log_log_plot(&points, None, "epsilon", "variation norm", None),
        out,
    )?;

    let _ = writeln!(out, "{}", if passed { "all checks passed" } else { "CHECKS FAILED" });
    Ok(CounterexampleSweep { reports, monotone, passed, duration: started.elapsed() })
}

/// Noise-robustness run on the ridge setup: perturbs the target with
/// seeded Gaussian noise of prescribed empirical norm, runs the
/// orthogonal greedy algorithm, and reports the decay of the excess
/// error above the noise floor.
pub fn cmd_noise(config: &Config, out: &mut impl std::io::Write) -> Result<RunReport, CliError> {
    config.validate_common()?;
    let started = Instant::now();
    let samples = SampleSet::generate(config.num_samples, config.seed);
    let clean = samples.evaluate(oscillatory_target);
    let dictionary = RidgeDictionary::new(&samples);
    let report = noise_robustness_check(
        &dictionary,
        &clean,
        config.noise_scale,
        config.iterations,
        config.seed,
    )?;
    let rows = rows_from_history(&report.history);
    let duration = started.elapsed();

    let _ = writeln!(
        out,
        "noise: seed={} samples={} iterations={} noise_scale={}",
        config.seed,
        config.num_samples,
        rows.len(),
        config.noise_scale
    );
    let _ = writeln!(out, "realized noise norm: {:e}", report.noise_norm);
    let _ = writeln!(out, "final error: {:e}", report.final_error);
    let _ = writeln!(
        out,
        "excess error: initial {:e}, final {:e}",
        report.initial_excess, report.final_excess
    );
    if let Some(est) = &report.decay {
        let _ = writeln!(out, "excess decay order (positive tail): {:.3}", est.order());
    }
    let passed = report.eventually_below_initial;
    if !passed {
        let _ = writeln!(out, "FAIL: excess error never dropped below its initial value");
    }

    let rate = fit_if_possible(&rows, config.skip_prefix, out);
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.k as f64, r.residual_norm)).collect();
    let annotation = rate.as_ref().map(|e| format!("order = {:.3}", e.order()));
    config.emit(
        &run_csv(&rows),
        || log_log_plot(&points, rate.as_ref(), "iteration", "residual norm", annotation.as_deref()),
        out,
    )?;

    Ok(RunReport { rows, rate, passed, duration })
}
