//! Command-line front end: `pipeline`, `calibrate`, `simulate`, `verify`.
//!
//! Exit status is 0 on success, 1 for invalid input or configuration and
//! 2 for runtime or verification failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phosmarket::experiment::{
    emit_fit_summary, emit_tables, read_saved_markups, recheck_run, Experiment, ExperimentConfig,
};
use phosmarket::pipeline::run_pipeline;
use phosmarket::Error;

#[derive(Parser)]
#[command(name = "phosmarket", version, about = "Bootstrap scenario runs of a many-to-many trade market")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` experiment configuration.
    #[arg(short, long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of replications.
    #[arg(short = 'B', long = "replications")]
    replications: Option<usize>,
    /// Override the output directory.
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build harmonized tables from raw CSV (output dir overrides `data_dir`).
    Pipeline(Common),
    /// Fit the demand, supply and trade-cost relations and write summaries.
    Calibrate(Common),
    /// Run every replication and write the report tables.
    Simulate(Common),
    /// Re-check a saved run against regenerated replications and the oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Only re-check the first N replications.
        #[arg(long)]
        limit: Option<usize>,
        /// Largest local marginal cost, in minor units, after coarsening.
        #[arg(long, default_value_t = 12)]
        coarse_max: i64,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::from_file(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(b) = common.replications {
        cfg.replications = b;
    }
    if let Some(dir) = &common.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Pipeline(common) => {
            let mut cfg = load(&common)?;
            if let Some(dir) = common.output_dir {
                cfg.data_dir = dir;
            }
            let summary = run_pipeline(&cfg.raw_dir, &cfg.data_dir)?;
            println!(
                "{} suppliers, {} regions, {} flow cells, {} clamped local cells, {} fallback rates",
                summary.suppliers,
                summary.regions,
                summary.flow_cells,
                summary.clamped_cells,
                summary.fallback_rates
            );
            for p in summary.written {
                println!("wrote {}", p.display());
            }
        }
        Command::Calibrate(common) => {
            let exp = Experiment::prepare(load(&common)?)?;
            for p in emit_fit_summary(&exp, &exp.config.output_dir)? {
                println!("wrote {}", p.display());
            }
        }
        Command::Simulate(common) => {
            let exp = Experiment::prepare(load(&common)?)?;
            let report = exp.run()?;
            for p in emit_tables(&report, &exp.config.output_dir)? {
                println!("wrote {}", p.display());
            }
            println!(
                "{} replications verified, {} demand draws redrawn",
                report.replications, report.rejected
            );
        }
        Command::Verify { common, limit, coarse_max } => {
            let exp = Experiment::prepare(load(&common)?)?;
            let log = exp.config.output_dir.join("replications.csv");
            let saved = if log.exists() { Some(read_saved_markups(&log)?) } else { None };
            if saved.is_none() {
                println!("no saved run at {}; checking regenerated replications only", log.display());
            }
            let report = recheck_run(&exp, saved.as_deref(), limit, coarse_max)?;
            println!(
                "{} replications re-verified, {} cross-checked against the oracle, {} too large",
                report.checked, report.oracle_checked, report.skipped
            );
            for m in &report.mismatches {
                eprintln!("mismatch: {m}");
            }
            return Ok(report.is_ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
