use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fescr_cli::{cmd_bench, cmd_run, exit_code, BenchOptions, CliError, RunOptions};

#[derive(Parser)]
#[command(
    name = "fescr",
    version,
    about = "Run and benchmark the circular-region local planner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one episode and write summary, trace and snapshots.
    Run {
        /// Scenario file, or a bundled scenario name.
        scenario: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override a config value, e.g. `--set L=3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Write an SVG snapshot every N cycles.
        #[arg(long, value_name = "CYCLES")]
        snapshot_every: Option<usize>,
        /// Drop a named obstacle from the scenario.
        #[arg(long = "remove", value_name = "NAME")]
        remove: Vec<String>,
    },
    /// Replay recorded planner inputs and report latency statistics.
    Bench {
        scenario: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Comma-separated chain lengths, e.g. `3,5,7`.
        #[arg(long, value_delimiter = ',')]
        chain_lengths: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 64 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run {
            scenario,
            config,
            out,
            set,
            snapshot_every,
            remove,
        } => {
            let report = cmd_run(&RunOptions {
                scenario,
                config,
                out_dir: out.clone(),
                overrides: set,
                snapshot_every,
                remove,
            })?;
            print!("{}", report.summary.to_toml());
            eprintln!("wrote {}", out.display());
            Ok(exit_code(report.outcome))
        }
        Command::Bench {
            scenario,
            config,
            reps,
            set,
            chain_lengths,
        } => {
            let report = cmd_bench(&BenchOptions {
                scenario,
                config,
                overrides: set,
                repetitions: reps,
                chain_lengths,
            })?;
            print!("{}", report.to_toml());
            Ok(0)
        }
    }
}
