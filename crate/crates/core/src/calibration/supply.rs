//! Supplier capacities that keep observed global market shares.

use rand::Rng;

use crate::calibration::rng::rademacher;
use crate::error::{Error, Result};
use crate::market::Quantity;

/// Global demand the observed mean sales are scaled against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScalingBase {
    /// Mean of observed global demand over all years.
    #[default]
    ObservedMean,
    /// Observed global demand in the latest year.
    LatestYear,
}

impl std::str::FromStr for ScalingBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "observed-mean" => Ok(ScalingBase::ObservedMean),
            "latest-year" => Ok(ScalingBase::LatestYear),
            other => Err(Error::Config(format!("unknown scaling base {other:?}"))),
        }
    }
}

impl std::fmt::Display for ScalingBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScalingBase::ObservedMean => "observed-mean",
            ScalingBase::LatestYear => "latest-year",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupplyShareEstimate {
    /// Per supplier share of global demand.
    pub shares: Vec<f64>,
    /// Pooled deviations `sales_iy − share_i · global_y` over all
    /// suppliers and years, in the volume unit of the inputs.
    pub deviations: Vec<f64>,
}

/// `sales[i][y]` per supplier and year; `global[y]` total demand per year.
pub fn estimate_supply_shares(
    sales: &[Vec<f64>],
    global: &[f64],
    base: ScalingBase,
) -> Result<SupplyShareEstimate> {
    if global.is_empty() || sales.iter().any(|s| s.len() != global.len()) {
        return Err(Error::Data("supplier sales must cover every observed year".into()));
    }
    let base_demand = match base {
        ScalingBase::ObservedMean => global.iter().sum::<f64>() / global.len() as f64,
        ScalingBase::LatestYear => global[global.len() - 1],
    };
    if base_demand <= 0.0 {
        return Err(Error::Data("observed global demand must be positive".into()));
    }
    let shares: Vec<f64> = sales
        .iter()
        .map(|s| s.iter().sum::<f64>() / s.len() as f64 / base_demand)
        .collect();
    let deviations = sales
        .iter()
        .zip(&shares)
        .flat_map(|(s, share)| s.iter().zip(global).map(move |(x, g)| x - share * g))
        .collect();
    Ok(SupplyShareEstimate { shares, deviations })
}

/// `s_i = share_i · D + w·δ` with `δ` drawn uniformly from the pooled
/// deviations and `w` Rademacher, rounded and floored at one unit.
/// `global_demand` and `pool` share the same unit.
pub fn sample_capacity<R: Rng + ?Sized>(
    global_demand: f64,
    shares: &[f64],
    pool: &[f64],
    rng: &mut R,
) -> Result<Vec<Quantity>> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("deviation pool is empty".into()));
    }
    if shares.iter().any(|s| *s < 0.0) {
        return Err(Error::InvalidArgument("supplier shares must be ≥ 0".into()));
    }
    Ok(shares
        .iter()
        .map(|share| {
            let delta = pool[rng.gen_range(0..pool.len())];
            let value = share * global_demand + rademacher(rng) * delta;
            (value.round().max(1.0)) as Quantity
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::rng::replication_stream;

    #[test]
    fn empty_pool_fails() {
        let mut rng = replication_stream(0, 0);
        assert!(sample_capacity(100.0, &[0.5], &[], &mut rng).is_err());
    }

    #[test]
    fn zero_pool_is_deterministic() {
        let mut rng = replication_stream(0, 0);
        let s = sample_capacity(1000.0, &[0.1, 0.25], &[0.0, 0.0], &mut rng).unwrap();
        assert_eq!(s, vec![100, 250]);
    }

    #[test]
    fn two_point_pool_range() {
        let mut rng = replication_stream(9, 0);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let s = sample_capacity(1000.0, &[0.10], &[20.0, -20.0], &mut rng).unwrap();
            seen.insert(s[0]);
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![80, 120]);
    }

    #[test]
    fn capacity_floor_is_one_unit() {
        let mut rng = replication_stream(0, 0);
        let s = sample_capacity(10.0, &[0.0], &[0.0], &mut rng).unwrap();
        assert_eq!(s, vec![1]);
    }

    #[test]
    fn shares_and_centered_deviations() {
        let sales = vec![vec![10.0, 12.0, 14.0], vec![5.0, 5.0, 5.0]];
        let global = vec![100.0, 110.0, 120.0];
        let est = estimate_supply_shares(&sales, &global, ScalingBase::ObservedMean).unwrap();
        assert!((est.shares[0] - 12.0 / 110.0).abs() < 1e-12);
        assert!((est.shares[1] - 5.0 / 110.0).abs() < 1e-12);
        assert_eq!(est.deviations.len(), 6);
        // Deviations of each supplier sum to zero under the mean base.
        assert!(est.deviations[..3].iter().sum::<f64>().abs() < 1e-9);
        let latest = estimate_supply_shares(&sales, &global, ScalingBase::LatestYear).unwrap();
        assert!((latest.shares[0] - 0.1).abs() < 1e-12);
    }
}
