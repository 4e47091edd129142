//! Raw trade, consumption and crop data to the harmonized tables the
//! calibration reads.
//!
//! Raw inputs (all headed CSV, `.` decimal separator):
//!
//! | file | columns |
//! |---|---|
//! | `regions.csv` | `country,region,eu` |
//! | `residences.csv` | `supplier,country` |
//! | `trade_flows.csv` | `year,importer,partner,product,mass_t` |
//! | `domestic_supply.csv` | `year,supplier,country,product,mass_t` |
//! | `consumption.csv` | `year,region,dapmap_kt,p2o5_kt` |
//! | `fertilizer_use.csv` | `year,area,crop,use_kt` |
//! | `crop_production.csv` | `year,country,crop,production_kt` |
//! | `scenario_production.csv` | `scenario,country,crop,production_kt` |
//!
//! Products are `DAP`, `MAP`, `MAP_CN` or `DAPMAP_MIX`; masses in tonnes of
//! product, everything else in kt P2O5 or kt of crop.

pub mod flows;
pub mod io;
pub mod rates;
pub mod regional_use;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use flows::{
    compile_trade_flows, convert_to_p2o5, harmonize_local_supply, ConsumptionRecord,
    DomesticSupplyRecord, FlowCell, LocalSupplyRow, ProductKind, RegionRecord, ResidenceRecord,
    TradeFlowRecord,
};
pub use io::{file_digest, read_csv, write_csv, Provenance, PIPELINE_VERSION};
pub use rates::{
    derive_application_rates, scenario_fertilizer_use, split_proportional, ApplicationRate,
    FertilizerUseRecord, ProductionRecord, ScenarioProductionRecord,
};
pub use regional_use::{aggregate_use, UseRow, UseTotals};

use crate::calibration::{CalibrationData, ObservedHistory, RegionSeries};
use crate::error::{Error, Result};

pub const RAW_FILES: [&str; 8] = [
    "regions.csv",
    "residences.csv",
    "trade_flows.csv",
    "domestic_supply.csv",
    "consumption.csv",
    "fertilizer_use.csv",
    "crop_production.csv",
    "scenario_production.csv",
];

pub const DERIVED_FILES: [&str; 6] = [
    "suppliers.csv",
    "flows.csv",
    "local_supply.csv",
    "application_rates.csv",
    "region_series.csv",
    "scenario_use.csv",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupplierRow {
    pub supplier: String,
}

/// Unsmoothed regional series: DAP/MAP consumption `y`, all P2O5
/// consumption `x`, crop P2O5 use `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub year: i32,
    pub region: String,
    pub y_kt: f64,
    pub x_kt: f64,
    pub z_kt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioUseRow {
    pub scenario: String,
    pub region: String,
    pub z_kt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSummary {
    pub suppliers: usize,
    pub regions: usize,
    pub flow_cells: usize,
    pub clamped_cells: usize,
    pub fallback_rates: usize,
    pub written: Vec<PathBuf>,
}

/// Runs every transform on `raw_dir` and writes the derived tables to
/// `out_dir`.
pub fn run_pipeline(raw_dir: &Path, out_dir: &Path) -> Result<PipelineSummary> {
    let path = |name: &str| raw_dir.join(name);
    let region_records: Vec<RegionRecord> = read_csv(&path("regions.csv"))?;
    let residences: Vec<ResidenceRecord> = read_csv(&path("residences.csv"))?;
    let trade: Vec<TradeFlowRecord> = read_csv(&path("trade_flows.csv"))?;
    let domestic: Vec<DomesticSupplyRecord> = read_csv(&path("domestic_supply.csv"))?;
    let consumption: Vec<ConsumptionRecord> = read_csv(&path("consumption.csv"))?;
    let uses: Vec<FertilizerUseRecord> = read_csv(&path("fertilizer_use.csv"))?;
    let production: Vec<ProductionRecord> = read_csv(&path("crop_production.csv"))?;
    let scenario: Vec<ScenarioProductionRecord> = read_csv(&path("scenario_production.csv"))?;

    let regions = flows::region_map(&region_records)?;
    let region_set: BTreeSet<String> = regions.values().cloned().collect();
    let provenance = Provenance::of_files(&RAW_FILES.map(path))?.header_lines();
    let out = |name: &str| out_dir.join(name);
    let mut written = Vec::new();

    let suppliers: BTreeSet<&str> = residences.iter().map(|r| r.supplier.as_str()).collect();
    let supplier_rows: Vec<SupplierRow> =
        suppliers.iter().map(|s| SupplierRow { supplier: s.to_string() }).collect();
    write_csv(&out("suppliers.csv"), &provenance, &supplier_rows)?;
    written.push(out("suppliers.csv"));

    let table = compile_trade_flows(&trade, &residences, &domestic, &regions)?;
    let cells = flows::flow_cells(&table);
    write_csv(&out("flows.csv"), &provenance, &cells)?;
    written.push(out("flows.csv"));

    let local = harmonize_local_supply(&table, &consumption, &region_set)?;
    write_csv(&out("local_supply.csv"), &provenance, &local)?;
    written.push(out("local_supply.csv"));

    let rate_table = derive_application_rates(&uses, &production, &scenario, &region_records)?;
    let rate_rows: Vec<ApplicationRate> = rate_table.values().cloned().collect();
    write_csv(&out("application_rates.csv"), &provenance, &rate_rows)?;
    written.push(out("application_rates.csv"));

    let mut series = Vec::new();
    for c in &consumption {
        if !region_set.contains(&c.region) {
            return Err(Error::Data(format!("consumption region {:?} is unknown", c.region)));
        }
    }
    let years: BTreeSet<i32> = consumption.iter().map(|c| c.year).collect();
    for &year in &years {
        let z = rates::fertilizer_use_by_region(
            &rate_table,
            production
                .iter()
                .filter(|p| p.year == year)
                .map(|p| (p.country.as_str(), p.crop.as_str(), p.production_kt)),
            &regions,
        )?;
        for c in consumption.iter().filter(|c| c.year == year) {
            series.push(SeriesRow {
                year,
                region: c.region.clone(),
                y_kt: c.dapmap_kt,
                x_kt: c.p2o5_kt,
                z_kt: z[&c.region],
            });
        }
    }
    series.sort_by(|a, b| (&a.region, a.year).cmp(&(&b.region, b.year)));
    write_csv(&out("region_series.csv"), &provenance, &series)?;
    written.push(out("region_series.csv"));

    let scenarios: BTreeSet<&str> = scenario.iter().map(|s| s.scenario.as_str()).collect();
    let mut scenario_rows = Vec::new();
    for s in scenarios {
        for (region, z) in scenario_fertilizer_use(&rate_table, &scenario, s, &regions)? {
            scenario_rows.push(ScenarioUseRow { scenario: s.to_string(), region, z_kt: z });
        }
    }
    write_csv(&out("scenario_use.csv"), &provenance, &scenario_rows)?;
    written.push(out("scenario_use.csv"));

    Ok(PipelineSummary {
        suppliers: suppliers.len(),
        regions: region_set.len(),
        flow_cells: cells.len(),
        clamped_cells: local.iter().filter(|l| l.residual_kt > 0.0).count(),
        fallback_rates: rate_rows.iter().filter(|r| r.fallback).count(),
        written,
    })
}

/// Harmonized tables assembled into calibration inputs for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketData {
    pub suppliers: Vec<String>,
    pub regions: Vec<String>,
    pub data: CalibrationData,
}

impl MarketData {
    pub fn region_index(&self, name: &str) -> Result<usize> {
        self.regions
            .iter()
            .position(|r| r == name)
            .ok_or_else(|| Error::Config(format!("unknown region {name:?}")))
    }
}

/// Reads the derived tables from `data_dir`. Suppliers and regions are
/// ordered by name.
pub fn load_market_data(data_dir: &Path, scenario: &str) -> Result<MarketData> {
    let path = |name: &str| data_dir.join(name);
    let suppliers: Vec<String> = read_csv::<SupplierRow>(&path("suppliers.csv"))?
        .into_iter()
        .map(|s| s.supplier)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let cells: Vec<FlowCell> = read_csv(&path("flows.csv"))?;
    let local: Vec<LocalSupplyRow> = read_csv(&path("local_supply.csv"))?;
    let series: Vec<SeriesRow> = read_csv(&path("region_series.csv"))?;
    let scenario_use: Vec<ScenarioUseRow> = read_csv(&path("scenario_use.csv"))?;

    let regions: Vec<String> = series
        .iter()
        .map(|s| s.region.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let years: Vec<i32> = local.iter().map(|l| l.year).collect::<BTreeSet<_>>().into_iter().collect();
    if suppliers.is_empty() || regions.is_empty() || years.is_empty() {
        return Err(Error::Data(format!("{} lacks suppliers, regions or trade years", data_dir.display())));
    }
    let index = |names: &[String], name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Data(format!("{name:?} is not a known supplier or region")))
    };
    let year_index = |y: i32| years.binary_search(&y).map_err(|_| Error::Data(format!("year {y} has no local supply")));

    let (m, n, t) = (suppliers.len(), regions.len(), years.len());
    let mut history = ObservedHistory {
        years: years.clone(),
        flows: vec![vec![vec![0.0; n]; m]; t],
        local: vec![vec![0.0; n]; t],
    };
    let mut global_demand = vec![0.0; t];
    let mut filled = BTreeSet::new();
    for l in &local {
        let (y, j) = (year_index(l.year)?, index(&regions, &l.region)?);
        history.local[y][j] = l.local_kt;
        global_demand[y] += l.consumption_kt;
        filled.insert((y, j));
    }
    if filled.len() != t * n {
        return Err(Error::Data("local supply does not cover every region and year".into()));
    }
    for c in &cells {
        let (y, i, j) = (year_index(c.year)?, index(&suppliers, &c.supplier)?, index(&regions, &c.region)?);
        history.flows[y][i][j] += c.p2o5_kt;
    }
    let supplier_sales = (0..m)
        .map(|i| (0..t).map(|y| history.flows[y][i].iter().sum()).collect())
        .collect();

    let mut region_series = Vec::with_capacity(n);
    let mut z_scenario = Vec::with_capacity(n);
    for region in &regions {
        let rows: Vec<&SeriesRow> = series.iter().filter(|s| &s.region == region).collect();
        let ys: Vec<i32> = rows.iter().map(|r| r.year).collect();
        let pick = |f: fn(&SeriesRow) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<f64>>();
        region_series.push(RegionSeries::from_raw(
            region.clone(),
            &ys,
            &pick(|r| r.y_kt),
            &pick(|r| r.x_kt),
            &pick(|r| r.z_kt),
        )?);
        let z = scenario_use
            .iter()
            .find(|s| s.scenario == scenario && &s.region == region)
            .ok_or_else(|| Error::Data(format!("no {scenario} scenario use for {region}")))?;
        z_scenario.push(z.z_kt);
    }

    Ok(MarketData {
        suppliers,
        regions,
        data: CalibrationData {
            regions: region_series,
            z_scenario,
            supplier_sales,
            global_demand,
            history,
        },
    })
}
