use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use truthtrack_cli::commands::{
    cmd_repro, cmd_run, cmd_space_gen, cmd_space_identifiable, cmd_space_inspect, cmd_sweep, Figure, RunOptions,
    SweepOptions,
};
use truthtrack_cli::Result;

#[derive(Parser)]
#[command(name = "truthtrack", version, about = "Truth-tracking by (biased) belief revision experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured series and write one CSV row per (trial, method).
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides master_seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        parallelism: Option<usize>,
        /// Also write a bar chart of the success rates.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Re-run one of the bias comparisons and chart it.
    Repro {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Success rate of one method across state and observable counts.
    Sweep {
        /// Comma-separated state counts.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,10")]
        states: Vec<usize>,
        /// Inclusive observable range, `lo..hi`.
        #[arg(long, default_value = "2..14", value_parser = parse_range)]
        observables: (usize, usize),
        /// Method label such as `lex_ab` or `mini`.
        #[arg(long, default_value = "lex_ab")]
        method: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Generate, inspect or test single spaces.
    Space {
        #[command(subcommand)]
        action: SpaceAction,
    },
}

#[derive(Subcommand)]
enum SpaceAction {
    /// Write a random space and prior as JSON.
    Gen {
        #[arg(long, default_value_t = 5)]
        states: usize,
        #[arg(long, default_value_t = 12)]
        observables: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print observables, signatures and the prior.
    Inspect { file: PathBuf },
    /// Print whether all worlds have distinct signatures.
    Identifiable { file: PathBuf },
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let hi = hi.trim_start_matches('=');
    let lo = lo.parse::<usize>().map_err(|e| e.to_string())?;
    let hi = hi.parse::<usize>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, seed, parallelism, svg } => {
            let (_, summary) = cmd_run(&RunOptions { config, out, seed, parallelism, svg })?;
            print!("{}", summary.table());
        }
        Command::Repro { figure, out, seed, trials, parallelism } => {
            let summary = cmd_repro(figure, &out, seed, trials, parallelism)?;
            print!("{}", summary.table());
            println!("wrote {}", out.join(format!("{}.{{csv,svg}}", figure.name())).display());
        }
        Command::Sweep { states, observables, method, out, seed, trials, parallelism } => {
            let cells = cmd_sweep(&SweepOptions { states, observables, method, out_dir: out, seed, trials, parallelism })?;
            for c in cells {
                println!("{:>3} states {:>3} observables: {:5.1}%", c.n_states, c.n_observables, 100.0 * c.success_rate);
            }
        }
        Command::Space { action } => match action {
            SpaceAction::Gen { states, observables, seed, out } => {
                cmd_space_gen(states, observables, seed, &out)?;
                println!("wrote {}", out.display());
            }
            SpaceAction::Inspect { file } => print!("{}", cmd_space_inspect(&file)?),
            SpaceAction::Identifiable { file } => println!("{}", cmd_space_identifiable(&file)?),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
