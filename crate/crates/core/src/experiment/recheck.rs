//! Re-checks a run: regenerate every replication, compare with the saved
//! log, and compare the auction with the exhaustive oracle on a coarsened
//! copy of each instance.

use std::path::Path;

use crate::auction::{brute_force_equilibrium, run_english_auction, verify_equilibrium};
use crate::error::{Error, Result};
use crate::experiment::Experiment;
use crate::market::{MarketInstance, Money};

/// Divides every cost by `factor` (rounded), keeping local costs ≥ 1 minor
/// unit. Quantities and the mask are unchanged.
pub fn downscale(inst: &MarketInstance, factor: i64) -> Result<MarketInstance> {
    if factor < 1 {
        return Err(Error::InvalidArgument("downscale factor must be ≥ 1".into()));
    }
    let div = |m: Money| Money((m.minor() as f64 / factor as f64).round() as i64);
    MarketInstance::from_costs(
        inst.capacities.clone(),
        inst.demands.clone(),
        div(inst.congestion),
        inst.local_costs.iter().map(|&c| div(c).max(Money(1))).collect(),
        inst.trade_costs
            .iter()
            .map(|row| row.iter().map(|t| t.map(div)).collect())
            .collect(),
    )
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecheckReport {
    /// Replications regenerated and verified at full scale.
    pub checked: usize,
    /// Replications whose coarsened instance went through the oracle.
    pub oracle_checked: usize,
    /// Coarsened instances too large for the oracle.
    pub skipped: usize,
    pub mismatches: Vec<String>,
}

impl RecheckReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Markup columns of a saved `replications.csv`, by replication.
pub fn read_saved_markups(path: &Path) -> Result<Vec<(u64, Vec<i64>)>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let header = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("markup["))
        .map(|(k, _)| k)
        .collect();
    let bad = |what: &str| Error::Data(format!("{}: bad {what}", path.display()));
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let rep: u64 = record.get(0).and_then(|v| v.parse().ok()).ok_or_else(|| bad("replication"))?;
        let markups = cols
            .iter()
            .map(|&k| record.get(k).and_then(|v| v.parse().ok()).ok_or_else(|| bad("markup")))
            .collect::<Result<Vec<i64>>>()?;
        out.push((rep, markups));
    }
    Ok(out)
}

/// Regenerates replications `0..limit` (all when `None`), compares their
/// markups with `saved` when given, and runs the oracle on each instance
/// coarsened so its largest local marginal is about `target_max` minor
/// units.
pub fn recheck_run(
    exp: &Experiment,
    saved: Option<&[(u64, Vec<i64>)]>,
    limit: Option<usize>,
    target_max: i64,
) -> Result<RecheckReport> {
    let count = limit.unwrap_or(exp.config.replications).min(exp.config.replications);
    let mut report = RecheckReport::default();
    for b in 0..count as u64 {
        let rep = exp.replicate(b)?;
        report.checked += 1;
        if let Some(saved) = saved {
            let got: Vec<i64> = rep.equilibrium.markups.0.iter().map(|p| p.minor()).collect();
            match saved.iter().find(|(r, _)| *r == b) {
                Some((_, want)) if *want == got => {}
                Some((_, want)) => report
                    .mismatches
                    .push(format!("replication {b}: saved markups {want:?}, recomputed {got:?}")),
                None => report.mismatches.push(format!("replication {b}: missing from saved log")),
            }
        }
        let factor = (rep.instance.max_local_marginal().minor() + target_max - 1) / target_max.max(1);
        let coarse = downscale(&rep.instance, factor.max(1))?;
        let auction = run_english_auction(&coarse)?;
        match brute_force_equilibrium(&coarse, coarse.max_local_marginal()) {
            Ok(oracle) => {
                report.oracle_checked += 1;
                if oracle.markups != auction.markups {
                    report.mismatches.push(format!(
                        "replication {b}: coarsened auction {:?} vs oracle {:?}",
                        auction.markups.0, oracle.markups.0
                    ));
                }
                if !verify_equilibrium(&coarse, &auction).is_valid() {
                    report.mismatches.push(format!("replication {b}: coarsened auction fails the verifier"));
                }
            }
            Err(Error::EnumerationBudget { .. }) => report.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
