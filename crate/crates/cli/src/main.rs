use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use ram_cli::catalog::{run_catalog, CatalogConfig, Record};
use ram_cli::commands::{self, parse_size};
use ram_cli::report::{Report, Status};
use ramstruct::constructors::Strategy;
use ramstruct::oracle::SearchBudget;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "ram",
    version,
    about = "Ramification structures on finite groups"
)]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Emit a short human-readable summary instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// Wall-clock budget for searches, in milliseconds.
    #[arg(long, global = true, alias = "budget")]
    budget_ms: Option<u64>,
    /// Accepted for compatibility; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Theorem,
    Search,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Theorem => Strategy::Theorem,
            StrategyArg::Search => Strategy::Search,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a pair of tuples as a ramification structure.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
    },
    /// Search exhaustively for a structure of one size.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        /// List up to N structures instead of stopping at the first.
        #[arg(long, value_name = "N")]
        all: Option<usize>,
    },
    /// All sizes up to a cap, by search.
    Sizes {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Closed-form size set, with optional membership or grid.
    Predict {
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = parse_size, conflicts_with = "grid")]
        size: Option<(usize, usize)>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Build a structure of a given size.
    Construct {
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Order, exponent, generator rank and p-group profile.
    Invariants {
        #[arg(long)]
        group: String,
    },
    /// Semi-p^i-abelian test at one level or all levels.
    Semiabelian {
        #[arg(long)]
        group: String,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Compare predictor and oracle over the built-in catalog.
    Catalog {
        #[arg(long, default_value_t = 32)]
        max_order: u64,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        /// JSON-lines output, reused as a cache on the next run.
        #[arg(long, default_value = "ram-catalog.jsonl")]
        out: PathBuf,
        #[arg(long)]
        no_cache: bool,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    let budget = cli
        .budget_ms
        .map(SearchBudget::with_millis)
        .unwrap_or_default();
    match &cli.cmd {
        Cmd::Check { group, t1, t2 } => commands::check(group, t1, t2),
        Cmd::Search {
            group,
            size,
            all: None,
        } => commands::search(group, *size, budget),
        Cmd::Search {
            group,
            size,
            all: Some(n),
        } => commands::search_all(group, *size, *n, budget),
        Cmd::Sizes { group, cap } => commands::sizes(group, *cap, budget),
        Cmd::Predict { group, size, grid } => commands::predict(group, *size, *grid),
        Cmd::Construct {
            group,
            size,
            strategy,
        } => commands::construct(group, *size, (*strategy).into(), budget),
        Cmd::Invariants { group } => commands::invariants(group),
        Cmd::Semiabelian { group, level } => commands::semiabelian(group, *level),
        Cmd::Catalog {
            max_order,
            cap,
            out,
            no_cache,
        } => {
            let mut cfg = CatalogConfig::builtin(*max_order, *cap, budget);
            cfg.out = Some(out.clone());
            cfg.use_cache = !no_cache;
            let run = run_catalog(&cfg)?;
            let undecided = run.summary.undecided_groups > 0
                || run
                    .records
                    .iter()
                    .any(|r| matches!(r, Record::Probe(p) if !p.exhaustive));
            let status = if undecided {
                Status::Undecided
            } else {
                Status::Definitive
            };
            Ok(Report::new(
                "catalog",
                None,
                status,
                json!({
                    "summary": run.summary,
                    "out": out.display().to_string(),
                    "records": run.records,
                }),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.text {
                println!("{}", report.to_text());
            } else {
                println!("{}", report.to_json());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            let msg = format!("{e:#}");
            if cli.text {
                eprintln!("error: {msg}");
            } else {
                println!(
                    "{}",
                    json!({ "schema": ram_cli::report::SCHEMA_VERSION, "error": msg })
                );
            }
            ExitCode::from(1)
        }
    }
}
