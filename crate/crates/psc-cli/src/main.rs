use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psc_cli::commands::{self, BenchArgs, CliError, GenArgs, SolveArgs};

#[derive(Parser)]
#[command(name = "psc", about = "Weighted partial set cover: solve, audit, generate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance by LP rounding with heaviest-set guessing.
    Solve {
        /// Instance file.
        input: PathBuf,
        /// Deep/shallow coverage threshold in (0, 1/2].
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Set-cover rounder: threshold | greedy | randomized.
        #[arg(long = "sc-rounder", default_value = "threshold")]
        sc_rounder: String,
        /// Seed for the randomized rounder.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Make the shallow rounding pick pairs at random with this seed
        /// instead of by lowest index.
        #[arg(long)]
        pairing_seed: Option<u64>,
        /// Append the shallow-rounding trace of the winning guess.
        #[arg(long)]
        trace: bool,
        /// Print the LP, one constraint per line, before solving.
        #[arg(long)]
        dump_lp: bool,
    },
    /// Exact optimum by exhaustive search (at most 25 sets).
    Exact { input: PathBuf },
    /// Check a witness file against an instance.
    Verify { input: PathBuf, solution: PathBuf },
    /// Generate an instance file.
    Gen(GenCli),
    /// Solve and audit every .psc file in a directory.
    Bench {
        corpus: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long = "sc-rounder", default_value = "threshold")]
        sc_rounder: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct GenCli {
    /// disks | unit-squares | rect-pierce | pathological | random.
    #[arg(long)]
    kind: String,
    #[arg(short = 'n', long, default_value_t = 10)]
    elements: usize,
    #[arg(short = 'm', long, default_value_t = 6)]
    sets: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Requirement as a fraction of the coverable profit.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    /// Disk radius / square side range, as lo:hi.
    #[arg(long, default_value = "0.1:0.35")]
    size: String,
    /// Membership probability for random instances.
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Weight distribution: unit or lo:hi.
    #[arg(long, default_value = "unit")]
    weights: String,
    /// Profit distribution: unit or lo:hi.
    #[arg(long, default_value = "unit")]
    profits: String,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(CliError { exit_code: 1, message: format!("{} expects lo:hi, got '{}'", what, s) });
    }
    let lo = parts[0].parse().map_err(|_| CliError {
        exit_code: 1,
        message: format!("{}: bad number '{}'", what, parts[0]),
    })?;
    let hi = parts[1].parse().map_err(|_| CliError {
        exit_code: 1,
        message: format!("{}: bad number '{}'", what, parts[1]),
    })?;
    Ok((lo, hi))
}

fn parse_dist(s: &str, what: &str) -> Result<psc::generators::Dist, CliError> {
    if s == "unit" {
        return Ok(psc::generators::Dist::Unit);
    }
    let (lo, hi) = parse_pair(s, what)?;
    Ok(psc::generators::Dist::Uniform { lo, hi })
}

fn parse_rounder(s: &str) -> Result<psc::RounderKind, CliError> {
    s.parse().map_err(|e: String| CliError { exit_code: 1, message: e })
}

fn run(cli: Cli) -> commands::CmdResult {
    match cli.command {
        Command::Solve { input, alpha, sc_rounder, seed, pairing_seed, trace, dump_lp } => {
            commands::solve(&SolveArgs {
                input,
                alpha,
                sc_rounder: parse_rounder(&sc_rounder)?,
                seed,
                pairing_seed,
                trace,
                dump_lp,
            })
        }
        Command::Exact { input } => commands::exact(&input),
        Command::Verify { input, solution } => commands::run_verify(&input, &solution),
        Command::Gen(g) => {
            let kind = g
                .kind
                .parse()
                .map_err(|e: String| CliError { exit_code: 1, message: e })?;
            commands::gen(&GenArgs {
                kind,
                elements: g.elements,
                sets: g.sets,
                seed: g.seed,
                fraction: g.fraction,
                size_range: parse_pair(&g.size, "--size")?,
                density: g.density,
                weights: parse_dist(&g.weights, "--weights")?,
                profits: parse_dist(&g.profits, "--profits")?,
                output: g.output,
            })
        }
        Command::Bench { corpus, alpha, sc_rounder, seed } => commands::bench(&BenchArgs {
            corpus,
            alpha,
            sc_rounder: parse_rounder(&sc_rounder)?,
            seed,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code as u8)
        }
    }
}
