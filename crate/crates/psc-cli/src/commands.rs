//! Command implementations behind the CLI, kept binary-free so tests can
//! drive them in process. Exit codes: 0 success, 1 parse or I/O failure,
//! 2 infeasible, 3 size cap exceeded.

use std::path::{Path, PathBuf};
use std::time::Instant;

use psc::core::Error;
use psc::generators::{generate, Dist, GenKind, GenSpec};
use psc::lp::build_psc_lp;
use psc::psc_rounding::Pairing;
use psc::sc_rounding::{make_rounder, RounderKind};
use psc::solver::{exact_brute_force, partial_cover, verify};
use psc::{CoverSolution, PscInstance};

use crate::format::{self, fmt_decimal, ParseError};
use crate::report;

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn new(exit_code: i32, message: impl Into<String>) -> Self {
        CliError { exit_code, message: message.into() }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } => 2,
            Error::ResourceLimit(_) => 3,
            _ => 1,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct CmdOutput {
    pub stdout: String,
    pub exit_code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput { stdout, exit_code: 0 }
    }
}

pub type CmdResult = Result<CmdOutput, CliError>;

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(1, format!("{}: {}", path.display(), e)))
}

fn load_instance(path: &Path) -> Result<PscInstance, CliError> {
    let text = read_file(path)?;
    format::parse(&text).map_err(|e| CliError::new(1, format!("{}: {}", path.display(), e)))
}

#[derive(Debug, Clone)]
pub struct SolveArgs {
    pub input: PathBuf,
    pub alpha: f64,
    pub sc_rounder: RounderKind,
    pub seed: u64,
    pub pairing_seed: Option<u64>,
    pub trace: bool,
    pub dump_lp: bool,
}

pub fn solve(args: &SolveArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    let rounder = make_rounder(args.sc_rounder, args.seed);
    let pairing = match args.pairing_seed {
        Some(seed) => Pairing::Seeded(seed),
        None => Pairing::LowestIndex,
    };
    let mut out = String::new();
    if args.dump_lp {
        out.push_str(&build_psc_lp(&instance).render_text(None));
        out.push('\n');
    }
    let report = partial_cover(&instance, args.alpha, rounder.as_ref(), pairing)?;
    out.push_str(&report::render_solve(
        &report,
        instance.requirement,
        rounder.name(),
    ));
    if args.trace {
        match report
            .guessed_set
            .and_then(|g| report.traces.iter().find(|(set, _)| *set == g))
        {
            Some((set, trace)) => {
                out.push_str(&format!("trace (guess {}):\n", set + 1));
                out.push_str(&trace.render());
            }
            None => out.push_str("trace: winning guess required no rounding\n"),
        }
    }
    Ok(CmdOutput::ok(out))
}

pub fn exact(input: &Path) -> CmdResult {
    let instance = load_instance(input)?;
    let solution = exact_brute_force(&instance)?;
    Ok(CmdOutput::ok(report::render_exact(&solution, instance.requirement)))
}

pub fn run_verify(input: &Path, witness: &Path) -> CmdResult {
    let instance = load_instance(input)?;
    let text = read_file(witness)?;
    let chosen = format::parse_witness(&text, instance.system.n_sets())
        .map_err(|e| CliError::new(1, format!("{}: {}", witness.display(), e)))?;
    let solution = CoverSolution::new(&instance.system, chosen).map_err(CliError::from)?;
    let verification = verify(&instance, &solution);
    let exit_code = if verification.feasible { 0 } else { 2 };
    Ok(CmdOutput { stdout: report::render_verification(&verification), exit_code })
}

#[derive(Debug, Clone)]
pub struct GenArgs {
    pub kind: GenKind,
    pub elements: usize,
    pub sets: usize,
    pub seed: u64,
    pub fraction: f64,
    pub size_range: (f64, f64),
    pub density: f64,
    pub weights: Dist,
    pub profits: Dist,
    pub output: Option<PathBuf>,
}

pub fn gen(args: &GenArgs) -> CmdResult {
    let spec = GenSpec {
        kind: args.kind,
        elements: args.elements,
        sets: args.sets,
        size_range: args.size_range,
        density: args.density,
        seed: args.seed,
        fraction: args.fraction,
        weights: args.weights,
        profits: args.profits,
    };
    let instance = generate(&spec)?;
    let text = format::serialize(&instance);
    match &args.output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::new(1, format!("{}: {}", path.display(), e)))?;
            Ok(CmdOutput::ok(format!("wrote {}\n", path.display())))
        }
        None => Ok(CmdOutput::ok(text)),
    }
}

#[derive(Debug, Clone)]
pub struct BenchArgs {
    pub corpus: PathBuf,
    pub alpha: f64,
    pub sc_rounder: RounderKind,
    pub seed: u64,
}

pub fn bench(args: &BenchArgs) -> CmdResult {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&args.corpus)
        .map_err(|e| CliError::new(1, format!("{}: {}", args.corpus.display(), e)))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|ext| ext == "psc").unwrap_or(false))
        .collect();
    paths.sort();

    let rounder = make_rounder(args.sc_rounder, args.seed);
    let mut out = String::new();
    out.push_str(&format!("corpus: {}\n", args.corpus.display()));
    out.push_str(&format!("instances: {}\n", paths.len()));
    out.push_str("instance\tweight\topt\tratio\tbound\tms\n");

    let mut ratios = Vec::new();
    let mut violations = 0usize;
    for path in &paths {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let instance = load_instance(path)?;
        let started = Instant::now();
        let report = partial_cover(&instance, args.alpha, rounder.as_ref(), Pairing::LowestIndex)
            .map_err(|e| CliError::new(CliError::from(e).exit_code, format!("{}: solve failed", name)))?;
        let ms = started.elapsed().as_millis();
        let bound_factor = 2.0 * report.beta_used + 2.0;

        if instance.system.n_sets() <= 25 {
            let opt = exact_brute_force(&instance)?;
            let ratio = if opt.weight > 0.0 {
                report.solution.weight / opt.weight
            } else if report.solution.weight <= 0.0 {
                1.0
            } else {
                f64::INFINITY
            };
            if ratio > bound_factor + 1e-9 {
                violations += 1;
            }
            ratios.push(ratio);
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                name,
                fmt_decimal(report.solution.weight),
                fmt_decimal(opt.weight),
                fmt_decimal(ratio),
                fmt_decimal(bound_factor),
                ms
            ));
        } else {
            out.push_str(&format!(
                "{}\t{}\t-\t-\t{}\t{}\n",
                name,
                fmt_decimal(report.solution.weight),
                fmt_decimal(bound_factor),
                ms
            ));
        }
    }
    if !ratios.is_empty() {
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        out.push_str(&format!("aggregate_max_ratio: {}\n", fmt_decimal(max)));
        out.push_str(&format!("aggregate_mean_ratio: {}\n", fmt_decimal(mean)));
    }
    out.push_str(&format!("bound_violations: {}\n", violations));
    Ok(CmdOutput::ok(out))
}
