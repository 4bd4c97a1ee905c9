//! Scenario runner: loads a configuration, executes the selected
//! verification suite against the catalog, and emits a machine-readable
//! report plus a terminal summary.
//!
//! Exit codes: 0 when every check passes, 1 on any failing check, 2 on
//! configuration errors. Reports are byte-stable for a fixed configuration
//! and seed. Every scenario key can also come from the environment with the
//! `TWISTOR_` prefix (e.g. `TWISTOR_SEED`, `TWISTOR_MANIFOLD`).

mod checks;
mod config;
mod report;

use checks::CheckGroup;
use clap::{Parser, Subcommand};
use config::{Overrides, Scenario};
use report::Report;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "twistor",
    about = "verification suites for the twistor hypersurface of an almost Hermitian four-manifold",
    after_help = "Environment overrides use the TWISTOR_ prefix: TWISTOR_MANIFOLD, \
                  TWISTOR_STRUCTURE, TWISTOR_T, TWISTOR_SEED, TWISTOR_TOLERANCE, \
                  TWISTOR_FORMAT, TWISTOR_OUT, TWISTOR_BASE_POINTS, TWISTOR_FIBER_ANGLES, \
                  TWISTOR_EPSILON, TWISTOR_EPSILON1, TWISTOR_EPSILON2, TWISTOR_PHI."
)]
struct Cli {
    /// List catalog manifolds, structure families and check ids, then exit.
    #[arg(long, global = true)]
    list: bool,

    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Configuration file (TOML, flat key paths).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Catalog manifold id or "all".
    #[arg(long, global = true)]
    manifold: Option<String>,
    /// Comma-separated fibre scales, e.g. "0.5,1,2".
    #[arg(long, global = true)]
    t: Option<String>,
    /// Random seed for the sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format: json, csv or markdown.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Report path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Residual tolerance override applied to every check.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Structure-name filter (prefix match), e.g. "hermitian".
    #[arg(long, global = true)]
    structure: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Algebraic and connection identities, including the chart oracle.
    VerifyIdentities,
    /// Hypersurface trace scans and minimality verdicts.
    CheckMinimality,
    /// Reproduce the embedded covariant-derivative and drift tables.
    ReproduceTables,
    /// Round trips and invariants of the projective correspondence chain.
    HopfRoundtrip,
}

impl Command {
    fn group(self) -> CheckGroup {
        match self {
            Command::VerifyIdentities => CheckGroup::Identities,
            Command::CheckMinimality => CheckGroup::Minimality,
            Command::ReproduceTables => CheckGroup::Tables,
            Command::HopfRoundtrip => CheckGroup::Hopf,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Command::VerifyIdentities => "verify-identities",
            Command::CheckMinimality => "check-minimality",
            Command::ReproduceTables => "reproduce-tables",
            Command::HopfRoundtrip => "hopf-roundtrip",
        }
    }
}

fn print_listing() {
    println!("manifolds:");
    for id in twistor_geom::catalog::entry_ids() {
        match twistor_geom::catalog::build(id) {
            Ok(entry) => {
                for s in &entry.structures {
                    println!("  {id} :: {} [{}]", s.name, s.expected_class.as_str());
                }
            }
            Err(e) => println!("  {id} (failed to build: {e})"),
        }
    }
    println!("checks:");
    for c in checks::registry() {
        println!("  {}", c.id());
    }
}

fn run() -> Result<ExitCode, anyhow::Error> {
    let cli = Cli::parse();
    if cli.list {
        print_listing();
        return Ok(ExitCode::SUCCESS);
    }
    let Some(command) = cli.command else {
        eprintln!("no subcommand given; try --help or --list");
        return Ok(ExitCode::from(2));
    };

    let overrides = Overrides {
        manifold: cli.common.manifold.clone(),
        structure: cli.common.structure.clone(),
        t: cli
            .common
            .t
            .as_deref()
            .map(config::parse_t_list)
            .transpose()?,
        seed: cli.common.seed,
        tolerance: cli.common.tolerance,
        format: cli.common.format.clone(),
        out: cli.common.out.clone(),
    };
    let cfg = Scenario::resolve(cli.common.config.as_deref(), &overrides)?;

    let mut report = Report::new(command.name(), &cfg);
    let start = std::time::Instant::now();
    for check in checks::registry() {
        if check.group() == command.group() {
            let t0 = std::time::Instant::now();
            let before = report.records.len();
            check
                .run(&cfg, &mut report)
                .map_err(|e| anyhow::anyhow!("check {} failed to run: {e}", check.id()))?;
            let dt = t0.elapsed().as_secs_f64() * 1e3;
            for r in &mut report.records[before..] {
                r.wall_time_ms = dt;
            }
        }
    }
    report.finalize();
    report.print_summary(std::io::stderr());
    eprintln!("elapsed: {:.2} s", start.elapsed().as_secs_f64());

    let rendered = report.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(2)
        }
    }
}
