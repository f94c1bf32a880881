//! `mubkit`: build and verify complete sets of mutually unbiased bases.
//!
//! Exit status is 0 when every claim in the report passes, 1 when some
//! claim fails and 2 on usage or domain errors.

mod report;
mod search;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mubkit::linalg::Tolerance;
use serde_json::json;

use crate::report::{Claim, Report};
use crate::verify::Config;

#[derive(Parser, Debug)]
#[command(
    name = "mubkit",
    version,
    about = "Constructions and checks for mutually unbiased bases"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Numerical tolerance for equalities
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Report destination; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest dimension for commands that enumerate the Clifford group
    #[arg(long, global = true, default_value_t = 7)]
    clifford_cap: usize,
    /// Largest dimension for the other verifiers
    #[arg(long, global = true, default_value_t = 13)]
    dim_cap: usize,
    /// Include wall-clock runtime in the report
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the bases of a complete set
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(long)]
        dim: usize,
        /// Cubic parameter of the orbit set
        #[arg(long, default_value_t = 1)]
        x: i64,
    },
    /// Run one family of checks
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Restrict dependency checks to one cubic parameter
        #[arg(long)]
        x: Option<i64>,
        /// Number of SIC angles
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Long-running searches
    Search {
        #[command(subcommand)]
        what: SearchKind,
    },
    /// Full suite
    Report {
        #[arg(value_enum)]
        what: ReportKind,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,7")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildKind {
    Standard,
    Alltop,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyKind {
    Mub,
    Counts,
    Correspondence,
    Distances,
    Dependencies,
    Orbits,
    Smalldim,
    Sic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportKind {
    All,
}

#[derive(Subcommand, Debug)]
enum SearchKind {
    /// Dimension-8 fiducials with root-of-unity entries
    #[command(name = "dim8-fiducial")]
    Dim8Fiducial {
        #[arg(long, default_value_t = 16)]
        roots: u64,
        /// Candidates to examine in this run
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        /// Resumable progress file
        #[arg(long, default_value = "dim8-search.checkpoint.json")]
        checkpoint: PathBuf,
        /// Candidates between checkpoints
        #[arg(long, default_value_t = 1 << 16)]
        every: u64,
    },
}

fn dispatch(cmd: &Command, cfg: &Config) -> Result<Report> {
    match *cmd {
        Command::Build { kind, dim, x } => match kind {
            BuildKind::Standard => verify::build_standard(dim, cfg),
            BuildKind::Alltop => verify::build_alltop(dim, x, cfg),
        },
        Command::Verify { what, dim, x, grid } => match what {
            VerifyKind::Mub => verify::verify_mub(dim, cfg),
            VerifyKind::Counts => verify::verify_counts(dim, cfg),
            VerifyKind::Correspondence => verify::verify_correspondence(dim, cfg),
            VerifyKind::Distances => verify::verify_distances(dim, cfg),
            VerifyKind::Dependencies => verify::verify_dependencies(dim, x, cfg),
            VerifyKind::Orbits => verify::verify_orbits(dim, cfg),
            VerifyKind::Smalldim => verify::verify_smalldim(dim, cfg),
            VerifyKind::Sic => verify::verify_sic(grid, cfg),
        },
        Command::Report {
            what: ReportKind::All,
            ref dims,
            grid,
        } => verify::report_all(dims, grid, cfg),
        Command::Search {
            what:
                SearchKind::Dim8Fiducial {
                    roots,
                    budget,
                    ref checkpoint,
                    every,
                },
        } => dim8_search(roots, budget, checkpoint, every, cfg),
    }
}

fn dim8_search(roots: u64, budget: u64, checkpoint: &Path, every: u64, cfg: &Config) -> Result<Report> {
    let outcome = search::run(roots, budget, every, checkpoint, cfg.tol.eps(), |cp, total| {
        eprintln!(
            "dim8-fiducial: {}/{} candidates examined ({:.4}%), {} found",
            cp.next,
            total,
            100.0 * cp.next as f64 / total as f64,
            cp.found.len()
        );
    })?;
    let mut r = Report::new("search dim8-fiducial", Some(8));
    let expected =
        budget.min(search::total_candidates(roots).saturating_sub(outcome.checkpoint.next - outcome.examined));
    r.claims.push(Claim::exact(
        "examined",
        "budgeted search over root-of-unity fiducials in dimension 8",
        expected,
        outcome.examined,
    ));
    r.notes = Some(json!({
        "roots": roots,
        "next": outcome.checkpoint.next,
        "total": search::total_candidates(roots),
        "complete": outcome.complete,
        "found": outcome.checkpoint.found,
        "checkpoint": checkpoint.display().to_string(),
    }));
    Ok(r)
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let w = BufWriter::new(sink);
    match format {
        Format::Json => report.write_json(w),
        Format::Csv => report.write_csv(w),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let cfg = Config {
        tol: Tolerance::new(g.tol)?,
        clifford_cap: g.clifford_cap,
        dim_cap: g.dim_cap,
    };
    let start = Instant::now();
    let mut report = dispatch(&cli.command, &cfg)?;
    if g.timing {
        report.runtime_seconds = Some(start.elapsed().as_secs_f64());
    }
    emit(&report, g.format, g.out.as_ref())?;
    for c in report.claims.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {} ({})", c.id, c.anchor);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
