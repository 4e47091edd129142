//! Summaries of the fitted relations behind a scenario.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::Experiment;

fn write(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `demand_fits.csv`, `supply_shares.csv`, `trade_cost_fit.csv` and
/// `base_costs.csv` into `out_dir`.
pub fn emit_fit_summary(exp: &Experiment, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let model = &exp.model;
    let path = |n: &str| out_dir.join(n);

    let demand: Vec<Vec<String>> = exp
        .market
        .regions
        .iter()
        .zip(&model.demand_fits)
        .zip(&model.data.z_scenario)
        .map(|((r, fit), z)| {
            vec![
                r.clone(),
                format!("{:.6}", fit.alpha),
                format!("{:.6}", fit.beta),
                format!("{z:.3}"),
                format!("{:.3}", fit.predict(*z)),
            ]
        })
        .collect();
    write(&path("demand_fits.csv"), &["region", "alpha", "beta", "z_scenario_kt", "point_kt"], &demand)?;

    let supply: Vec<Vec<String>> = exp
        .market
        .suppliers
        .iter()
        .zip(&model.supply.shares)
        .map(|(s, share)| vec![s.clone(), format!("{share:.6}")])
        .collect();
    write(&path("supply_shares.csv"), &["supplier", "share"], &supply)?;

    let t = &model.trade_fit;
    let trade = vec![vec![
        format!("{:.6}", t.gamma),
        t.residuals.len().to_string(),
        exp.market.regions[t.reference_market].clone(),
        t.reference_year.to_string(),
    ]];
    write(
        &path("trade_cost_fit.csv"),
        &["gamma", "observations", "reference_market", "reference_year"],
        &trade,
    )?;

    let mut header = vec!["supplier"];
    header.extend(exp.market.regions.iter().map(String::as_str));
    let base: Vec<Vec<String>> = exp
        .market
        .suppliers
        .iter()
        .zip(&model.trade.base_costs)
        .map(|(s, row)| {
            let mut out = vec![s.clone()];
            out.extend(row.iter().map(|c| c.map(|c| format!("{c:.6}")).unwrap_or_default()));
            out
        })
        .collect();
    write(&path("base_costs.csv"), &header, &base)?;

    Ok(["demand_fits.csv", "supply_shares.csv", "trade_cost_fit.csv", "base_costs.csv"]
        .iter()
        .map(|n| path(n))
        .collect())
}
