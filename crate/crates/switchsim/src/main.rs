use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use switchsim::report::{emit, run, ReportFormat, ReportParams, EXPERIMENTS};

/// Runs named discrimination experiments and emits a machine-readable
/// pass/fail report. The exit code is 0 exactly when every checked quantity
/// passes.
#[derive(Parser, Debug)]
#[command(name = "switchsim", version, about, long_about = None)]
struct Cli {
    /// Experiment to run: switch-demo, strategies, twirl-check,
    /// appendix-verify, tester-bound or multiplex.
    experiment: String,

    /// Seed for all random draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Sample count for Monte Carlo cross-checks.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,

    /// Tolerance for exact checks.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,

    /// Probe Bloch angles theta phi (radians).
    #[arg(long, num_args = 2, value_names = ["THETA", "PHI"], default_values_t = [0.0, 0.0])]
    probe: Vec<f64>,

    /// Weight |alpha|^2 of the A-then-B branch of the switch control.
    #[arg(long, default_value_t = 0.5)]
    alpha_sq: f64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let params = ReportParams {
        seed: cli.seed,
        samples: cli.samples,
        tolerance: cli.tolerance,
        probe: [cli.probe[0], cli.probe[1]],
        alpha_sq: cli.alpha_sq,
    };
    let report = match run(&cli.experiment, &params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, switchsim::Error::UnknownExperiment(_)) {
                eprintln!("available experiments: {}", EXPERIMENTS.join(", "));
            }
            return ExitCode::from(2);
        }
    };
    let doc = emit(
        &report,
        match cli.format {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        },
    );
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &doc) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{doc}");
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
