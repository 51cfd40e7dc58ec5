use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use greedylab::experiment::{
    cmd_counterexample, cmd_lower_bound, cmd_noise, cmd_ridge2d, Config, OutputFormat,
};
use greedylab::report::CliError;
use greedylab_core::greedy::Algorithm;

/// Greedy dictionary-approximation experiments.
#[derive(Parser)]
#[command(name = "greedylab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate an oscillatory 2-D target with closed-halfplane
    /// atoms and estimate the convergence order.
    Ridge2d(RunArgs),
    /// Check the residual closed form and lower bound of the decaying
    /// coordinate dictionary for n = 1, 2, 4, ... up to --iterations.
    LowerBound(RunArgs),
    /// Verify the five-atom construction whose greedy iterates have
    /// large variation norm (sweeps epsilon unless --epsilon is given).
    Counterexample(RunArgs),
    /// Ridge run against a noise-perturbed target; reports the decay
    /// of the excess error above the noise floor (always orthogonal).
    Noise(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmChoice {
    Oga,
    Pga,
    PgaShrink,
    Rga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatChoice {
    Csv,
    Svg,
    Both,
}

#[derive(Args)]
struct RunArgs {
    /// Seed for the sample-point and noise streams.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of sample points of the empirical L² space.
    #[arg(long, default_value_t = 5000)]
    num_samples: usize,
    /// Iteration budget (for lower-bound: the largest n, rounded down
    /// to a power of two).
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// Greedy scheme for ridge2d.
    #[arg(long, value_enum, default_value_t = AlgorithmChoice::Oga)]
    algorithm: AlgorithmChoice,
    /// Step shrinkage for --algorithm pga-shrink, in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    shrinkage: f64,
    /// Decay exponent of the coordinate dictionary (lower-bound).
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// Single epsilon for the counterexample (default: a sweep).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Delta for the counterexample (default: epsilon/4).
    #[arg(long)]
    delta: Option<f64>,
    /// Empirical norm of the added noise (noise subcommand).
    #[arg(long, default_value_t = 0.05)]
    noise_scale: f64,
    /// Initial errors excluded from rate fits.
    #[arg(long, default_value_t = 10)]
    skip_prefix: usize,
    /// Output path (directory must exist); extension is adjusted per
    /// format when writing both.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum, default_value_t = FormatChoice::Csv)]
    format: FormatChoice,
    /// Worker threads for the argmax sweep (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn config(&self) -> Config {
        let algorithm = match self.algorithm {
            AlgorithmChoice::Oga => Algorithm::Oga,
            AlgorithmChoice::Pga => Algorithm::Pga,
            AlgorithmChoice::PgaShrink => Algorithm::PgaShrink(self.shrinkage),
            AlgorithmChoice::Rga => Algorithm::Rga,
        };
        Config {
            seed: self.seed,
            num_samples: self.num_samples,
            iterations: self.iterations,
            algorithm,
            alpha: self.alpha,
            epsilon: self.epsilon,
            delta: self.delta,
            noise_scale: self.noise_scale,
            skip_prefix: self.skip_prefix,
            output: self.output.clone(),
            format: match self.format {
                FormatChoice::Csv => OutputFormat::Csv,
                FormatChoice::Svg => OutputFormat::Svg,
                FormatChoice::Both => OutputFormat::Both,
            },
        }
    }
}

fn dispatch(command: &Command) -> Result<bool, CliError> {
    let out = &mut std::io::stdout();
    match command {
        Command::Ridge2d(args) => Ok(cmd_ridge2d(&args.config(), out)?.passed),
        Command::LowerBound(args) => Ok(cmd_lower_bound(&args.config(), out)?.passed),
        Command::Counterexample(args) => Ok(cmd_counterexample(&args.config(), out)?.passed),
        Command::Noise(args) => Ok(cmd_noise(&args.config(), out)?.passed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match &cli.command {
        Command::Ridge2d(a)
        | Command::LowerBound(a)
        | Command::Counterexample(a)
        | Command::Noise(a) => a.threads,
    };

    let outcome = match threads {
        Some(t) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            pool.install(|| dispatch(&cli.command))
        }
        None => dispatch(&cli.command),
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Io { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
