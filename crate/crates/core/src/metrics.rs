//! Market-structure statistics over equilibrium flows.
//!
//! Indices are computed in floating point from exact integer flows.

use crate::error::{Error, Result};
use crate::market::{FlowMatrix, MarketInstance, Money, Quantity};

/// Normalized Herfindahl–Hirschman index of market `market` over the `m`
/// international suppliers plus the local industry:
/// `(Σ share² − 1/(m+1)) / (1 − 1/(m+1))`.
pub fn concentration(market: usize, flows: &FlowMatrix, inst: &MarketInstance) -> f64 {
    let d = inst.demands[market] as f64;
    let local = flows.local(market, inst).unwrap_or(0);
    let shares = flows
        .flows
        .iter()
        .map(|row| row[market])
        .chain(std::iter::once(local))
        .map(|x| x as f64 / d);
    normalized_hhi(shares, inst.suppliers() + 1)
}

/// `(Σ share² − 1/k) / (1 − 1/k)` for `k` sources. With a single source the
/// index is defined as 1.
pub fn normalized_hhi(shares: impl IntoIterator<Item = f64>, sources: usize) -> f64 {
    if sources <= 1 {
        return 1.0;
    }
    let floor = 1.0 / sources as f64;
    let sum_sq: f64 = shares.into_iter().map(|s| s * s).sum();
    (sum_sq - floor) / (1.0 - floor)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diversification {
    /// `1 − (Σ_j (x_i^j/s_i)² − 1/n) / (1 − 1/n)`.
    pub index: f64,
    /// Sold strictly below capacity; the index may then exceed 1.
    pub low_utilization: bool,
}

/// Diversification of `supplier` across markets, `None` when it sells
/// nothing. Shares are taken relative to capacity, not to sales.
pub fn diversification(
    supplier: usize,
    flows: &FlowMatrix,
    inst: &MarketInstance,
) -> Option<Diversification> {
    let sold = flows.sold(supplier);
    if sold == 0 {
        return None;
    }
    let s = inst.capacities[supplier];
    let shares = flows.flows[supplier].iter().map(|&x| x as f64 / s as f64);
    Some(Diversification {
        index: diversification_index(shares, inst.markets()),
        low_utilization: sold < s,
    })
}

/// `1 − (Σ share² − 1/n) / (1 − 1/n)`; a single market gives 0.
pub fn diversification_index(shares: impl IntoIterator<Item = f64>, markets: usize) -> f64 {
    if markets <= 1 {
        return 0.0;
    }
    1.0 - normalized_hhi(shares, markets)
}

pub fn local_share(market: usize, flows: &FlowMatrix, inst: &MarketInstance) -> f64 {
    let local = flows.local(market, inst).unwrap_or(0);
    local as f64 / inst.demands[market] as f64
}

/// Supplier sales over total demand of all markets.
pub fn global_supplier_share(supplier: usize, flows: &FlowMatrix, demands: &[Quantity]) -> f64 {
    let total: Quantity = demands.iter().sum();
    flows.sold(supplier) as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketStructureRow {
    pub market: usize,
    pub concentration: f64,
    pub local_share: f64,
    /// Per-supplier import shares; together with `local_share` they sum to 1.
    pub supplier_shares: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupplierStructureRow {
    pub supplier: usize,
    pub diversification: Option<Diversification>,
    pub global_share: f64,
    pub sold: Quantity,
}

pub fn market_rows(flows: &FlowMatrix, inst: &MarketInstance) -> Vec<MarketStructureRow> {
    (0..inst.markets())
        .map(|j| {
            let d = inst.demands[j] as f64;
            MarketStructureRow {
                market: j,
                concentration: concentration(j, flows, inst),
                local_share: local_share(j, flows, inst),
                supplier_shares: flows.flows.iter().map(|r| r[j] as f64 / d).collect(),
            }
        })
        .collect()
}

pub fn supplier_rows(flows: &FlowMatrix, inst: &MarketInstance) -> Vec<SupplierStructureRow> {
    (0..inst.suppliers())
        .map(|i| SupplierStructureRow {
            supplier: i,
            diversification: diversification(i, flows, inst),
            global_share: global_supplier_share(i, flows, &inst.demands),
            sold: flows.sold(i),
        })
        .collect()
}

/// Sample mean and standard deviation (denominator `B − 1`; zero for a
/// single observation).
pub fn mean_sd(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let b = values.len() as f64;
    let mean = values.iter().sum::<f64>() / b;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Some((mean, (ss / (b - 1.0)).sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryFloorSummary {
    /// `[supplier][market]` mean and SD in relative units; `None` where masked.
    pub cells: Vec<Vec<Option<(f64, f64)>>>,
    /// Per market: mean over replications of the cheapest allowed trade
    /// cost; `None` when no supplier may serve the market.
    pub floors: Vec<Option<f64>>,
}

/// Summarizes trade-cost draws `[replication][supplier][market]`. A cell
/// is masked when it is absent in the first draw; every draw must share
/// that mask.
pub fn entry_floor_summary(draws: &[Vec<Vec<Option<Money>>>], scale: i64) -> Result<EntryFloorSummary> {
    let first = draws
        .first()
        .ok_or_else(|| Error::InvalidArgument("entry floors need at least one replication".into()))?;
    let m = first.len();
    let n = first.first().map_or(0, Vec::len);
    for draw in draws {
        let same_mask = draw.len() == m
            && draw
                .iter()
                .zip(first)
                .all(|(r, f)| r.len() == n && r.iter().zip(f).all(|(a, b)| a.is_some() == b.is_some()));
        if !same_mask {
            return Err(Error::InvalidArgument("trade-cost draws disagree on the mask".into()));
        }
    }
    let rel = |c: Money| c.to_relative(scale);
    let cells = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    first[i][j]?;
                    let values: Vec<f64> = draws.iter().map(|d| rel(d[i][j].unwrap())).collect();
                    mean_sd(&values)
                })
                .collect()
        })
        .collect();
    let floors = (0..n)
        .map(|j| {
            if (0..m).all(|i| first[i][j].is_none()) {
                return None;
            }
            let minima: Vec<f64> = draws
                .iter()
                .map(|d| (0..m).filter_map(|i| d[i][j]).min().map(rel).unwrap())
                .collect();
            mean_sd(&minima).map(|(mean, _)| mean)
        })
        .collect();
    Ok(EntryFloorSummary { cells, floors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(m: usize, n: usize, s: Quantity, d: Quantity) -> MarketInstance {
        MarketInstance::from_costs(
            vec![s; m],
            vec![d; n],
            Money(1),
            vec![Money(100); n],
            vec![vec![Some(Money(1)); n]; m],
        )
        .unwrap()
    }

    #[test]
    fn monopoly_concentration_is_one() {
        let inst = instance(5, 1, 10, 6);
        let x = FlowMatrix::zeros(5, 1);
        assert_eq!(concentration(0, &x, &inst), 1.0);
        let mut y = FlowMatrix::zeros(5, 1);
        y.flows[2][0] = 6;
        assert!((concentration(0, &y, &inst) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_shares_concentration_is_zero() {
        let inst = instance(5, 1, 10, 6);
        let mut x = FlowMatrix::zeros(5, 1);
        for i in 0..5 {
            x.flows[i][0] = 1;
        }
        assert!(concentration(0, &x, &inst).abs() < 1e-12);
    }

    #[test]
    fn half_local_half_one_supplier() {
        let inst = instance(5, 1, 10, 6);
        let mut x = FlowMatrix::zeros(5, 1);
        x.flows[0][0] = 3;
        assert!((concentration(0, &x, &inst) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn diversification_cases() {
        let inst = instance(1, 9, 4, 5);
        let mut single = FlowMatrix::zeros(1, 9);
        single.flows[0][3] = 4;
        let d = diversification(0, &single, &inst).unwrap();
        assert!(d.index.abs() < 1e-12);
        assert!(!d.low_utilization);

        let mut split = FlowMatrix::zeros(1, 9);
        split.flows[0][0] = 2;
        split.flows[0][5] = 2;
        assert!((diversification(0, &split, &inst).unwrap().index - 0.5625).abs() < 1e-12);

        let even = instance(1, 4, 8, 5);
        let x = FlowMatrix { flows: vec![vec![2; 4]] };
        assert!((diversification(0, &x, &even).unwrap().index - 1.0).abs() < 1e-12);

        assert!(diversification(0, &FlowMatrix::zeros(1, 9), &inst).is_none());
    }

    #[test]
    fn partial_utilization_is_flagged_not_clamped() {
        let inst = instance(1, 2, 10, 5);
        let x = FlowMatrix { flows: vec![vec![1, 1]] };
        let d = diversification(0, &x, &inst).unwrap();
        assert!(d.low_utilization);
        assert!(d.index > 1.0);
    }

    #[test]
    fn local_share_cases() {
        let inst = instance(2, 1, 5, 4);
        let mut x = FlowMatrix::zeros(2, 1);
        assert_eq!(local_share(0, &x, &inst), 1.0);
        x.flows[1][0] = 1;
        assert_eq!(local_share(0, &x, &inst), 0.75);
        x.flows[0][0] = 3;
        assert_eq!(local_share(0, &x, &inst), 0.0);
    }

    #[test]
    fn global_share_cases() {
        let mut x = FlowMatrix::zeros(2, 2);
        assert_eq!(global_supplier_share(0, &x, &[20, 30]), 0.0);
        x.flows[0] = vec![2, 3];
        assert!((global_supplier_share(0, &x, &[20, 30]) - 0.10).abs() < 1e-15);
        let mut all = FlowMatrix::zeros(1, 2);
        all.flows[0] = vec![20, 30];
        assert_eq!(global_supplier_share(0, &all, &[20, 30]), 1.0);
    }

    #[test]
    fn rows_account_for_all_demand() {
        let inst = instance(2, 2, 5, 4);
        let x = FlowMatrix { flows: vec![vec![1, 2], vec![0, 1]] };
        for row in market_rows(&x, &inst) {
            let total: f64 = row.supplier_shares.iter().sum::<f64>() + row.local_share;
            assert!((total - 1.0).abs() < 1e-12);
        }
        let srows = supplier_rows(&x, &inst);
        assert_eq!(srows[0].sold, 3);
        // One of five units sold on a single market: raw value above 1.
        let d = srows[1].diversification.unwrap();
        assert!((d.index - 1.92).abs() < 1e-12);
        assert!(d.low_utilization);
    }

    #[test]
    fn entry_floor_two_point_statistics() {
        let draws = vec![
            vec![vec![Some(Money(10)), None], vec![Some(Money(20)), Some(Money(5))]],
            vec![vec![Some(Money(14)), None], vec![Some(Money(12)), Some(Money(7))]],
        ];
        let s = entry_floor_summary(&draws, 100).unwrap();
        let (mean, sd) = s.cells[0][0].unwrap();
        assert!((mean - 0.12).abs() < 1e-12);
        assert!((sd - 0.028_284_271_247_461_9).abs() < 1e-12);
        assert!(s.cells[0][1].is_none());
        // Market 0 floors: min(0.10, 0.20), min(0.14, 0.12).
        assert!((s.floors[0].unwrap() - 0.11).abs() < 1e-12);
        assert!((s.floors[1].unwrap() - 0.06).abs() < 1e-12);
    }

    #[test]
    fn entry_floor_single_replication_has_zero_sd() {
        let draws = vec![vec![vec![Some(Money(3)), Some(Money(9))]]];
        let s = entry_floor_summary(&draws, 100).unwrap();
        assert!(s.cells[0].iter().all(|c| c.unwrap().1 == 0.0));
        assert!(entry_floor_summary(&[], 100).is_err());
    }

    #[test]
    fn entry_floor_rejects_inconsistent_masks() {
        let draws = vec![
            vec![vec![Some(Money(3))]],
            vec![vec![None]],
        ];
        assert!(entry_floor_summary(&draws, 100).is_err());
    }
}
