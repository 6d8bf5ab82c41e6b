//! `weakcomm`: Drazin inverses, commutation profiles and seeded theorem
//! campaigns from the command line.
//!
//! Exit status: 0 on success, 1 when a campaign records a failing
//! verification, 2 on usage, parse or shape errors. `WEAKCOMM_THREADS`
//! caps the number of campaign workers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weakcomm::commutant::profile;
use weakcomm::harness::{question_probe, run_campaign, CampaignConfig, TheoremId};
use weakcomm::inverse::drazin;
use weakcomm::RationalMatrix;

const THREADS_VAR: &str = "WEAKCOMM_THREADS";

#[derive(Parser)]
#[command(name = "weakcomm", version, about = "Exact operator-theory checks on rational matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Drazin inverse, index and core-nilpotent subspaces.
    Drazin { matrix: PathBuf },
    /// Print commutant membership of B relative to A.
    Profile { a: PathBuf, b: PathBuf },
    /// Run a seeded verification campaign.
    Verify(VerifyArgs),
    /// Search for one-sided nilpotent perturbations that move the spectrum.
    Probe(CampaignArgs),
}

#[derive(Args)]
struct CampaignArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4, 5, 6])]
    dims: Vec<usize>,
    /// Trials per theorem and dimension.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generated base entries lie in [-bound, bound].
    #[arg(long, default_value_t = weakcomm::harness::DEFAULT_ENTRY_BOUND)]
    entry_bound: i64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem ids to run (repeatable).
    #[arg(long = "theorem", required_unless_present = "all", conflicts_with = "all")]
    theorems: Vec<TheoremId>,
    /// Run every theorem.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    campaign: CampaignArgs,
    /// Required non-commuting passes per theorem [default: min(5, trials)].
    #[arg(long)]
    min_noncommuting: Option<usize>,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A failure with the exit status it maps to.
struct Exit(u8, String);

impl<E: std::fmt::Display> From<E> for Exit {
    fn from(e: E) -> Self {
        Exit(2, e.to_string())
    }
}

fn read_matrix(path: &Path) -> Result<RationalMatrix, Exit> {
    let text = fs::read_to_string(path).map_err(|e| Exit(2, format!("{}: {e}", path.display())))?;
    let m = RationalMatrix::from_text(&text).map_err(|e| Exit(2, format!("{}: {e}", path.display())))?;
    m.ensure_square()
        .map_err(|e| Exit(2, format!("{}: {e}", path.display())))?;
    Ok(m)
}

fn configure_threads() -> Result<(), Exit> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Exit(2, format!("{THREADS_VAR}={value} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn config(args: &CampaignArgs, theorems: Vec<TheoremId>, min_noncommuting: Option<usize>) -> CampaignConfig {
    CampaignConfig {
        theorems,
        dimensions: args.dims.clone(),
        trials_per_theorem: args.trials,
        seed: args.seed,
        entry_bound: args.entry_bound,
        min_noncommuting: min_noncommuting.unwrap_or(args.trials.min(5)),
    }
}

fn cmd_drazin(path: &Path) -> Result<(), Exit> {
    let a = read_matrix(path)?;
    print!("{}", drazin(&a)?.to_text());
    Ok(())
}

fn cmd_profile(a: &Path, b: &Path) -> Result<(), Exit> {
    let (a, b) = (read_matrix(a)?, read_matrix(b)?);
    let p = profile(&a, &b)?;
    println!("{}", p.summary());
    let labels = ["ab*a - a*ab", "ba*b - b*ba", "ab*b - b*ab", "ba*a - a*ba"];
    for (label, r) in labels.iter().zip(&p.residuals) {
        println!("{label}: {}", if r.is_zero() { "zero" } else { "nonzero" });
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Exit> {
    let theorems = if args.all { TheoremId::ALL.to_vec() } else { args.theorems.clone() };
    let config = config(&args.campaign, theorems, args.min_noncommuting);
    configure_threads()?;
    let outcome = run_campaign(&config)?;
    let report = &outcome.report;
    for s in &report.summaries {
        let quota = match s.quota_met {
            Some(true) => "quota met",
            Some(false) => "quota NOT met",
            None => "no quota",
        };
        println!(
            "{:<12} trials {:>4}  pass {:>4}  fail {}  unmet {:>3}  starved {:>3}  noncommuting {:>4}  fixtures {:>2}  {quota}",
            s.theorem.as_str(),
            s.trials,
            s.pass,
            s.fail,
            s.hypotheses_unmet,
            s.starved,
            s.noncommuting_pass,
            s.fixture_topups,
        );
    }
    if let Some(path) = &args.report {
        fs::write(path, report.to_json() + "\n").map_err(|e| Exit(2, format!("{}: {e}", path.display())))?;
    }
    match report.failures.first() {
        None => {
            println!("ok: {} reports, no failures", outcome.reports.len());
            Ok(())
        }
        Some(f) => {
            let r = &f.report;
            let mut msg = format!(
                "{} failed at dimension {} seed {}: {}",
                r.theorem,
                r.instance.dim,
                r.seed,
                r.failed_checks.join("; ")
            );
            if let Some(s) = &f.shrunk {
                msg.push_str(&format!("\nshrunk to dimension {}", s.instance.dim));
            }
            Err(Exit(1, msg))
        }
    }
}

fn cmd_probe(args: &CampaignArgs) -> Result<(), Exit> {
    let config = config(args, vec![TheoremId::Q_probe], Some(0));
    configure_threads()?;
    let s = question_probe(&config)?;
    println!("one-sided instances checked: {}", s.one_sided_checked);
    println!("counterexamples: {}", s.counterexamples.len());
    println!("near misses checked: {}", s.near_miss_checked);
    println!("near misses with different spectra: {}", s.near_miss_spectra_differ);
    println!("starved: {}", s.starved);
    if s.counterexamples.is_empty() {
        Ok(())
    } else {
        Err(Exit(1, "a one-sided perturbation moved the spectrum".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Drazin { matrix } => cmd_drazin(matrix),
        Command::Profile { a, b } => cmd_profile(a, b),
        Command::Verify(args) => cmd_verify(args),
        Command::Probe(args) => cmd_probe(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
