use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qmh::config::RunConfig;
use qmh::runner;

#[derive(Parser)]
#[command(name = "qmh", about = "Quantum and classical Metropolis walk experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file and/or key overrides
    Run(RunArgs),
    /// Print register and memory demands for a problem without running it
    Resources {
        /// Problem source: an `nqueens:<n>` descriptor or a JSON file path
        problem: String,
    },
}

/// Every option mirrors a config-file key; command-line values win over
/// the file. Values are passed through untouched so the config layer is
/// the single place that validates them.
#[derive(Args)]
struct RunArgs {
    /// Config file of `key = value` lines (`#` starts a comment)
    config: Option<String>,

    /// Problem source: an `nqueens:<n>` descriptor or a JSON file path
    #[arg(long)]
    problem: Option<String>,
    /// One of: solve, tts, distribution, compare, orderings
    #[arg(long)]
    mode: Option<String>,
    /// First step included in TTS windows (default 1)
    #[arg(long = "initial_step")]
    initial_step: Option<String>,
    /// Number of walk steps to run
    #[arg(long = "final_step")]
    final_step: Option<String>,
    /// Inverse temperature at step 1 (default 1.0)
    #[arg(long = "beta_start")]
    beta_start: Option<String>,
    /// Inverse temperature at the final step (default: beta_start)
    #[arg(long = "beta_end")]
    beta_end: Option<String>,
    /// One of: constant, linear, geometric (default constant)
    #[arg(long)]
    schedule: Option<String>,
    /// Initial distribution: uniform or fixed:<label> (default uniform)
    #[arg(long)]
    init: Option<String>,
    /// Operator ordering: lemieux, qubitization, alternative
    #[arg(long)]
    ordering: Option<String>,
    /// Target success confidence for TTS (default 0.9)
    #[arg(long = "tts_delta")]
    tts_delta: Option<String>,
    /// RNG seed for sampled classical runs (default 1)
    #[arg(long)]
    seed: Option<String>,
    /// Refuse simulations wider than this many qubits (default 26)
    #[arg(long = "max_bits")]
    max_bits: Option<String>,
    /// Output base path; writes <out>.csv and <out>.json (default "report")
    #[arg(long)]
    out: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let pairs = [
            ("problem", &self.problem),
            ("mode", &self.mode),
            ("initial_step", &self.initial_step),
            ("final_step", &self.final_step),
            ("beta_start", &self.beta_start),
            ("beta_end", &self.beta_end),
            ("schedule", &self.schedule),
            ("init", &self.init),
            ("ordering", &self.ordering),
            ("tts_delta", &self.tts_delta),
            ("seed", &self.seed),
            ("max_bits", &self.max_bits),
            ("out", &self.out),
        ];
        pairs
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn execute(cli: Cli) -> qmh::Result<()> {
    match cli.command {
        Command::Run(args) => {
            let file_text = match &args.config {
                Some(path) => Some(
                    std::fs::read_to_string(path)
                        .map_err(|e| qmh::Error::Io(format!("reading {path}: {e}")))?,
                ),
                None => None,
            };
            let cfg = RunConfig::from_sources(file_text.as_deref(), &args.overrides())?;
            let outcome = runner::run(&cfg)?;
            println!("{}", outcome.summary);
            println!("wrote {}", outcome.csv_path.display());
            println!("wrote {}", outcome.json_path.display());
        }
        Command::Resources { problem } => {
            println!("{}", runner::estimate_resources(&problem)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Argument-shape mistakes are validation errors (status 1); clap's
    // default status of 2 is reserved here for capacity refusals.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 1 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
