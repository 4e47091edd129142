//! World totals and growth of regional fertilizer use under two scenarios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regional crop P2O5 use (Mt): observed, and projected under the
/// business-as-usual and stratified-societies scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseRow {
    pub region: String,
    pub data: f64,
    pub bau: f64,
    pub sss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UseTotals {
    pub data: f64,
    pub bau: f64,
    pub sss: f64,
    /// Percent growth of the world total.
    pub growth_bau: f64,
    pub growth_sss: f64,
    /// Percent of world growth contributed by each region, in row order.
    pub contribution_bau: Vec<f64>,
    pub contribution_sss: Vec<f64>,
}

pub fn aggregate_use(rows: &[UseRow]) -> Result<UseTotals> {
    if rows.is_empty() {
        return Err(Error::Data("no regional rows to aggregate".into()));
    }
    let data: f64 = rows.iter().map(|r| r.data).sum();
    let bau: f64 = rows.iter().map(|r| r.bau).sum();
    let sss: f64 = rows.iter().map(|r| r.sss).sum();
    if data <= 0.0 {
        return Err(Error::Data("observed world total must be positive".into()));
    }
    let contribution = |total: f64, pick: fn(&UseRow) -> f64| -> Vec<f64> {
        let growth = total - data;
        rows.iter()
            .map(|r| if growth == 0.0 { 0.0 } else { 100.0 * (pick(r) - r.data) / growth })
            .collect()
    };
    Ok(UseTotals {
        data,
        bau,
        sss,
        growth_bau: 100.0 * (bau / data - 1.0),
        growth_sss: 100.0 * (sss / data - 1.0),
        contribution_bau: contribution(bau, |r| r.bau),
        contribution_sss: contribution(sss, |r| r.sss),
    })
}
