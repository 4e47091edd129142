//! Scenario runs: sample inputs, solve every replication, aggregate.

pub mod config;
pub mod fits;
pub mod recheck;
pub mod report;

use rayon::prelude::*;

pub use config::ExperimentConfig;
pub use fits::emit_fit_summary;
pub use recheck::{downscale, read_saved_markups, recheck_run, RecheckReport};
pub use report::{emit_tables, DiversificationStat, ReplicationLog, ScenarioReport, Stat, TABLE_FILES};

use crate::auction::{run_english_auction_traced, verify_equilibrium};
use crate::calibration::{BootstrapDraw, CalibratedModel};
use crate::error::{Error, Result};
use crate::market::{Equilibrium, MarketInstance};
use crate::pipeline::{file_digest, load_market_data, MarketData, DERIVED_FILES};

/// Outcome of one replication after the equilibrium check.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub draw: BootstrapDraw,
    pub instance: MarketInstance,
    pub equilibrium: Equilibrium,
    pub ticks: u64,
}

/// A calibrated scenario ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub market: MarketData,
    pub model: CalibratedModel,
    /// `(file, sha256)` of the harmonized tables the data came from.
    pub input_digests: Vec<(String, String)>,
}

impl Experiment {
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let market = load_market_data(&config.data_dir, &config.scenario)?;
        let input_digests = DERIVED_FILES
            .iter()
            .map(|name| Ok((name.to_string(), file_digest(&config.data_dir.join(name))?)))
            .collect::<Result<_>>()?;
        let mut exp = Self::from_parts(config, market)?;
        exp.input_digests = input_digests;
        Ok(exp)
    }

    /// Calibrates on in-memory data; `config.data_dir` is not read.
    pub fn from_parts(config: ExperimentConfig, market: MarketData) -> Result<Self> {
        config.validate()?;
        let reference = market.region_index(&config.reference_market)?;
        let model = CalibratedModel::fit(market.data.clone(), config.settings(reference))?;
        Ok(Experiment {
            config,
            market,
            model,
            input_digests: Vec::new(),
        })
    }

    /// Draws, solves and verifies replication `b`. A verifier failure is
    /// an error, never a silently dropped replication.
    pub fn replicate(&self, b: u64) -> Result<Replication> {
        let draw = self.model.draw(self.config.seed, b)?;
        let instance = draw.instance()?;
        let run = run_english_auction_traced(&instance, |_| {})?;
        let report = verify_equilibrium(&instance, &run.equilibrium);
        if !report.is_valid() {
            return Err(Error::Verification(format!("replication {b}: {report}")));
        }
        Ok(Replication {
            draw,
            instance,
            equilibrium: run.equilibrium,
            ticks: run.ticks,
        })
    }

    /// All replications in index order, on `config.workers` threads (0
    /// means one per core). The result does not depend on the thread count.
    pub fn run_replications(&self) -> Result<Vec<Replication>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
        let b = self.config.replications as u64;
        pool.install(|| (0..b).into_par_iter().map(|r| self.replicate(r)).collect())
    }

    pub fn run(&self) -> Result<ScenarioReport> {
        let reps = self.run_replications()?;
        ScenarioReport::aggregate(self, &reps)
    }
}

pub fn run_experiment(config: ExperimentConfig) -> Result<ScenarioReport> {
    Experiment::prepare(config)?.run()
}
