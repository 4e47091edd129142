//! Full demand correspondence of one market.
//!
//! A buyer fills `d_j` unit slots from local units and allowed imports at
//! least total cost. With `θ` the `d_j`-th smallest marginal price, every
//! optimal choice takes all units priced below `θ` and fills the remaining
//! slots from units priced exactly `θ`. The argmax set is therefore a box of
//! per-source bounds intersected with the hyperplane "total = d_j".

use crate::auction::spend::{import_marginal, local_marginal};
use crate::market::{MarketInstance, MarkupVector, Money, Quantity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandRange {
    /// Per supplier: units priced strictly below the threshold.
    pub lower: Vec<Quantity>,
    /// Per supplier: units priced at or below the threshold.
    pub upper: Vec<Quantity>,
    pub local_lower: Quantity,
    pub local_upper: Quantity,
    pub demand: Quantity,
}

impl DemandRange {
    /// Smallest number of units the market must buy from the supplier set
    /// `set` (bitmask) across all of its optimal bundles.
    pub fn min_requirement(&self, set: u32) -> Quantity {
        let mut inside_lower = 0;
        let mut outside_upper = self.local_upper;
        for i in 0..self.lower.len() {
            if set & (1 << i) != 0 {
                inside_lower += self.lower[i];
            } else {
                outside_upper += self.upper[i];
            }
        }
        inside_lower.max(self.demand.saturating_sub(outside_upper))
    }

    pub fn contains(&self, bundle: &[Quantity]) -> bool {
        let total: Quantity = bundle.iter().sum();
        let Some(local) = self.demand.checked_sub(total) else {
            return false;
        };
        bundle
            .iter()
            .enumerate()
            .all(|(i, &z)| self.lower[i] <= z && z <= self.upper[i])
            && self.local_lower <= local
            && local <= self.local_upper
    }
}

pub fn demand_range(inst: &MarketInstance, market: usize, markups: &MarkupVector) -> DemandRange {
    let m = inst.suppliers();
    let d = inst.demands[market];
    // Sources in order: local first, then suppliers.
    let mut prices: Vec<Money> = (1..=d).map(|k| local_marginal(inst, market, k)).collect();
    let mut unit_lists: Vec<Vec<Money>> = Vec::with_capacity(m);
    for i in 0..m {
        let units = match inst.trade_cost(i, market) {
            Some(t) => (1..=inst.capacities[i].min(d))
                .map(|z| import_marginal(inst, t, z, markups.get(i)))
                .collect(),
            None => Vec::new(),
        };
        prices.extend_from_slice(&units);
        unit_lists.push(units);
    }
    let (_, threshold, _) = prices.select_nth_unstable((d - 1) as usize);
    let threshold = *threshold;

    let count = |units: &[Money]| {
        let below = units.iter().filter(|&&u| u < threshold).count() as Quantity;
        let at_or_below = units.iter().filter(|&&u| u <= threshold).count() as Quantity;
        (below, at_or_below)
    };
    let local_units: Vec<Money> = (1..=d).map(|k| local_marginal(inst, market, k)).collect();
    let (local_lower, local_upper) = count(&local_units);
    let (lower, upper) = unit_lists.iter().map(|u| count(u)).unzip();
    DemandRange {
        lower,
        upper,
        local_lower,
        local_upper,
        demand: d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::spend::demand_bundle;

    #[test]
    fn strict_costs_give_point_range() {
        let inst = MarketInstance::from_costs(
            vec![2],
            vec![3],
            Money(1),
            vec![Money(10)],
            vec![vec![Some(Money(2))]],
        )
        .unwrap();
        // Local units 11, 13, 15; imports 3, 5. Threshold 11.
        let r = demand_range(&inst, 0, &MarkupVector::zeros(1));
        assert_eq!((r.lower[0], r.upper[0]), (2, 2));
        assert_eq!((r.local_lower, r.local_upper), (0, 1));
        assert!(r.contains(&[2]));
        assert!(!r.contains(&[1]));
    }

    #[test]
    fn flat_ties_widen_range() {
        let inst = MarketInstance::from_costs(
            vec![1, 1],
            vec![1],
            Money(0),
            vec![Money(10)],
            vec![vec![Some(Money(3))], vec![Some(Money(3))]],
        )
        .unwrap();
        let r = demand_range(&inst, 0, &MarkupVector::zeros(2));
        assert_eq!(r.lower, vec![0, 0]);
        assert_eq!(r.upper, vec![1, 1]);
        assert_eq!((r.local_lower, r.local_upper), (0, 0));
        // {supplier 0} alone need not be bought from; both together must.
        assert_eq!(r.min_requirement(0b01), 0);
        assert_eq!(r.min_requirement(0b11), 1);
    }

    #[test]
    fn minimal_bundle_lies_in_range() {
        let inst = crate::market::fixtures::two_by_two();
        for p0 in 0..12 {
            for p1 in 0..12 {
                let p = MarkupVector(vec![Money(p0), Money(p1)]);
                for j in 0..2 {
                    let b = demand_bundle(&inst, j, &p).unwrap();
                    assert!(demand_range(&inst, j, &p).contains(&b.imports));
                }
            }
        }
    }
}
