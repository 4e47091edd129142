//! Aggregated scenario statistics and their CSV tables.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::{Experiment, Replication};
use crate::market::{Money, Quantity};
use crate::metrics::{self, mean_sd, EntryFloorSummary};
use crate::pipeline::PIPELINE_VERSION;

pub const TABLE_FILES: [&str; 9] = [
    "demand.csv",
    "concentration.csv",
    "local_share.csv",
    "diversification.csv",
    "supplier_shares.csv",
    "trade_costs.csv",
    "entry_floors.csv",
    "replications.csv",
    "manifest.txt",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Option<Stat> {
        mean_sd(values).map(|(mean, sd)| Stat { mean, sd })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversificationStat {
    /// Over replications where the supplier sold something.
    pub stat: Option<Stat>,
    pub defined: usize,
    /// Replications with sales strictly below capacity.
    pub low_utilization: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationLog {
    pub replication: u64,
    pub rejected: usize,
    pub ticks: u64,
    pub demands: Vec<Quantity>,
    pub capacities: Vec<Quantity>,
    pub markups: Vec<Money>,
    /// Units shipped across masked pairs (always zero for a verified run).
    pub masked_flow: Quantity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub scenario: String,
    pub replications: usize,
    pub money_scale: i64,
    pub suppliers: Vec<String>,
    pub regions: Vec<String>,
    /// Latest smoothed observed demand per region, kt.
    pub observed_demand_kt: Vec<f64>,
    pub demand_kt: Vec<Stat>,
    pub concentration: Vec<Stat>,
    pub local_share: Vec<Stat>,
    pub diversification: Vec<DiversificationStat>,
    pub supplier_share: Vec<Stat>,
    pub trade_costs: EntryFloorSummary,
    pub log: Vec<ReplicationLog>,
    pub rejected: usize,
    /// `key = value` pairs for the run manifest.
    pub manifest: Vec<(String, String)>,
}

impl ScenarioReport {
    pub fn aggregate(exp: &Experiment, reps: &[Replication]) -> Result<Self> {
        if reps.is_empty() {
            return Err(Error::InvalidArgument("no replications to aggregate".into()));
        }
        let (m, n) = (exp.model.suppliers(), exp.model.markets());
        let column = |f: &dyn Fn(&Replication) -> f64| -> Vec<f64> { reps.iter().map(f).collect() };
        let stat = |f: &dyn Fn(&Replication) -> f64| Stat::of(&column(f)).expect("non-empty");

        let demand_kt = (0..n).map(|j| stat(&|r| r.draw.demand_volumes[j])).collect();
        let concentration = (0..n)
            .map(|j| stat(&|r| metrics::concentration(j, &r.equilibrium.flows, &r.instance)))
            .collect();
        let local_share = (0..n)
            .map(|j| stat(&|r| metrics::local_share(j, &r.equilibrium.flows, &r.instance)))
            .collect();
        let supplier_share = (0..m)
            .map(|i| {
                stat(&|r| metrics::global_supplier_share(i, &r.equilibrium.flows, &r.instance.demands))
            })
            .collect();
        let diversification = (0..m)
            .map(|i| {
                let values: Vec<metrics::Diversification> = reps
                    .iter()
                    .filter_map(|r| metrics::diversification(i, &r.equilibrium.flows, &r.instance))
                    .collect();
                let index: Vec<f64> = values.iter().map(|d| d.index).collect();
                DiversificationStat {
                    stat: Stat::of(&index),
                    defined: values.len(),
                    low_utilization: values.iter().filter(|d| d.low_utilization).count(),
                }
            })
            .collect();
        let cost_draws: Vec<_> = reps.iter().map(|r| r.draw.trade_costs.clone()).collect();
        let trade_costs = metrics::entry_floor_summary(&cost_draws, exp.config.money_scale)?;

        let log: Vec<ReplicationLog> = reps
            .iter()
            .map(|r| ReplicationLog {
                replication: r.draw.replication,
                rejected: r.draw.rejected,
                ticks: r.ticks,
                demands: r.draw.demands.clone(),
                capacities: r.draw.capacities.clone(),
                markups: r.equilibrium.markups.0.clone(),
                masked_flow: (0..m)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !r.instance.allowed(i, j))
                    .map(|(i, j)| r.equilibrium.flows.get(i, j))
                    .sum(),
            })
            .collect();
        let rejected: usize = log.iter().map(|l| l.rejected).sum();

        let mut manifest: Vec<(String, String)> = exp
            .config
            .render()
            .lines()
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        manifest.push(("version".into(), PIPELINE_VERSION.into()));
        manifest.push(("verified_replications".into(), reps.len().to_string()));
        manifest.push(("rejected_draws".into(), rejected.to_string()));
        for (name, digest) in &exp.input_digests {
            manifest.push((format!("input.{name}"), format!("sha256:{digest}")));
        }

        Ok(ScenarioReport {
            scenario: exp.config.scenario.clone(),
            replications: reps.len(),
            money_scale: exp.config.money_scale,
            suppliers: exp.market.suppliers.clone(),
            regions: exp.market.regions.clone(),
            observed_demand_kt: exp.model.data.regions.iter().map(|s| s.last_y()).collect(),
            demand_kt,
            concentration,
            local_share,
            diversification,
            supplier_share,
            trade_costs,
            log,
            rejected,
            manifest,
        })
    }
}

/// Fixed six-decimal rendering; negative zero prints as zero so identical
/// runs give identical bytes.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn write_table(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn stat_rows(names: &[String], stats: &[Stat]) -> Vec<Vec<String>> {
    names
        .iter()
        .zip(stats)
        .map(|(name, s)| vec![name.clone(), num(s.mean), num(s.sd)])
        .collect()
}

/// Writes one CSV per table plus `manifest.txt` into `out_dir`.
pub fn emit_tables(report: &ScenarioReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if report.log.is_empty() || report.regions.is_empty() {
        return Err(Error::InvalidArgument("report is empty".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = |name: &str| out_dir.join(name);

    let demand: Vec<Vec<String>> = report
        .regions
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let s = report.demand_kt[j];
            vec![r.clone(), num(report.observed_demand_kt[j]), num(s.mean), num(s.sd)]
        })
        .collect();
    write_table(&path("demand.csv"), &strings(&["region", "observed_kt", "mean_kt", "sd_kt"]), &demand)?;

    let header = strings(&["region", "mean", "sd"]);
    write_table(&path("concentration.csv"), &header, &stat_rows(&report.regions, &report.concentration))?;
    write_table(&path("local_share.csv"), &header, &stat_rows(&report.regions, &report.local_share))?;
    write_table(
        &path("supplier_shares.csv"),
        &strings(&["supplier", "mean", "sd"]),
        &stat_rows(&report.suppliers, &report.supplier_share),
    )?;

    let div: Vec<Vec<String>> = report
        .suppliers
        .iter()
        .zip(&report.diversification)
        .map(|(name, d)| {
            let (mean, sd) = d.stat.map_or((String::new(), String::new()), |s| (num(s.mean), num(s.sd)));
            vec![name.clone(), mean, sd, d.defined.to_string(), d.low_utilization.to_string()]
        })
        .collect();
    write_table(
        &path("diversification.csv"),
        &strings(&["supplier", "mean", "sd", "defined", "low_utilization"]),
        &div,
    )?;

    // Suppliers by regions; masked cells stay empty.
    let mut header = vec!["supplier".to_string()];
    for r in &report.regions {
        header.push(format!("{r} mean"));
        header.push(format!("{r} sd"));
    }
    let costs: Vec<Vec<String>> = report
        .suppliers
        .iter()
        .zip(&report.trade_costs.cells)
        .map(|(name, cells)| {
            let mut row = vec![name.clone()];
            for c in cells {
                match c {
                    Some((mean, sd)) => row.extend([num(*mean), num(*sd)]),
                    None => row.extend([String::new(), String::new()]),
                }
            }
            row
        })
        .collect();
    write_table(&path("trade_costs.csv"), &header, &costs)?;

    let floors: Vec<Vec<String>> = report
        .regions
        .iter()
        .zip(&report.trade_costs.floors)
        .map(|(r, f)| vec![r.clone(), f.map(num).unwrap_or_default()])
        .collect();
    write_table(&path("entry_floors.csv"), &strings(&["region", "mean_floor"]), &floors)?;

    let mut header = strings(&["replication", "rejected", "ticks", "masked_flow"]);
    header.extend(report.regions.iter().map(|r| format!("demand[{r}]")));
    header.extend(report.suppliers.iter().map(|s| format!("capacity[{s}]")));
    header.extend(report.suppliers.iter().map(|s| format!("markup[{s}]")));
    let log: Vec<Vec<String>> = report
        .log
        .iter()
        .map(|l| {
            let mut row = vec![
                l.replication.to_string(),
                l.rejected.to_string(),
                l.ticks.to_string(),
                l.masked_flow.to_string(),
            ];
            row.extend(l.demands.iter().map(|d| d.to_string()));
            row.extend(l.capacities.iter().map(|s| s.to_string()));
            row.extend(l.markups.iter().map(|p| p.minor().to_string()));
            row
        })
        .collect();
    write_table(&path("replications.csv"), &header, &log)?;

    let mut manifest: String = report.manifest.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    manifest.push_str(&format!("tables = {}\n", TABLE_FILES[..8].join(",")));
    let manifest_path = path("manifest.txt");
    std::fs::write(&manifest_path, manifest).map_err(|e| Error::io(&manifest_path, e))?;

    Ok(TABLE_FILES.iter().map(|f| path(f)).collect())
}
