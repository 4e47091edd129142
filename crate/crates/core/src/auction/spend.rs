//! Quadratic spending functions, the buyer valuation and the single-valued
//! demand bundle.
//!
//! Every spending function is `z(az + k)`, so the z-th unit from a source
//! has marginal cost `k + a(2z - 1)`. Buyer decisions reduce to picking the
//! cheapest unit slots, which is what the greedy routines below do.

use crate::error::{Error, Result};
use crate::market::{MarketInstance, MarkupVector, Money, Quantity};

/// Customer spending on `z` local units in `market`: `z(az + c_oj)`.
pub fn local_spend(inst: &MarketInstance, market: usize, z: Quantity) -> Result<Money> {
    let d = inst.demands[market];
    if z > d {
        return Err(Error::QuantityOutOfRange {
            what: "local purchase",
            quantity: z,
            max: d,
        });
    }
    Ok(spend(inst.congestion, inst.local_costs[market], z))
}

/// Customer spending on `z` units shipped from `supplier` to `market`:
/// `z(az + t_ij)`.
pub fn import_spend(
    inst: &MarketInstance,
    supplier: usize,
    market: usize,
    z: Quantity,
) -> Result<Money> {
    let t = inst
        .trade_cost(supplier, market)
        .ok_or(Error::MaskedPair { supplier, market })?;
    let s = inst.capacities[supplier];
    if z > s {
        return Err(Error::QuantityOutOfRange {
            what: "import purchase",
            quantity: z,
            max: s,
        });
    }
    Ok(spend(inst.congestion, t, z))
}

fn spend(a: Money, unit: Money, z: Quantity) -> Money {
    let z = z as i64;
    Money(z * (a.0 * z + unit.0))
}

/// Marginal cost of the `k`-th local unit (1-based).
pub(crate) fn local_marginal(inst: &MarketInstance, market: usize, k: Quantity) -> Money {
    inst.local_costs[market] + inst.congestion * (2 * k as i64 - 1)
}

/// Marginal price of the `z`-th unit (1-based) from an allowed supplier,
/// including its markup.
pub(crate) fn import_marginal(
    inst: &MarketInstance,
    trade_cost: Money,
    z: Quantity,
    markup: Money,
) -> Money {
    trade_cost + markup + inst.congestion * (2 * z as i64 - 1)
}

/// Imports demanded by one market at given markups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandBundle {
    pub imports: Vec<Quantity>,
    /// `v_j(z) - Σ p_i z_i`, the attained maximum.
    pub utility: Money,
}

impl DemandBundle {
    pub fn total(&self) -> Quantity {
        self.imports.iter().sum()
    }
}

/// Greedy slot filling: each step substitutes the most expensive remaining
/// local unit with the cheapest available import while that strictly
/// saves money. Ties keep the local unit; among suppliers the lower index
/// wins. Returns the bundle and its net saving.
fn greedy_fill(
    inst: &MarketInstance,
    market: usize,
    caps: &[Quantity],
    markups: Option<&MarkupVector>,
) -> (Vec<Quantity>, Money) {
    let m = inst.suppliers();
    let d = inst.demands[market];
    let mut z = vec![0; m];
    let mut total = 0;
    let mut gain = Money::ZERO;
    while total < d {
        let displaced = local_marginal(inst, market, d - total);
        let mut best: Option<(usize, Money)> = None;
        for (i, zi) in z.iter().enumerate() {
            if *zi >= caps[i] {
                continue;
            }
            let Some(t) = inst.trade_cost(i, market) else {
                continue;
            };
            let p = markups.map_or(Money::ZERO, |p| p.get(i));
            let cost = import_marginal(inst, t, zi + 1, p);
            if best.map_or(true, |(_, c)| cost < c) {
                best = Some((i, cost));
            }
        }
        match best {
            Some((i, cost)) if cost < displaced => {
                z[i] += 1;
                total += 1;
                gain += displaced - cost;
            }
            _ => break,
        }
    }
    (z, gain)
}

fn check_caps(inst: &MarketInstance, caps: &[Quantity]) -> Result<()> {
    if caps.len() != inst.suppliers() {
        return Err(Error::InvalidArgument(format!(
            "expected {} supplier caps, got {}",
            inst.suppliers(),
            caps.len()
        )));
    }
    for (i, (&c, &s)) in caps.iter().zip(&inst.capacities).enumerate() {
        if c > s {
            return Err(Error::InvalidArgument(format!(
                "cap {c} for supplier {i} exceeds capacity {s}"
            )));
        }
    }
    Ok(())
}

/// Maximum saving market `market` gets from substituting local goods with
/// at most `caps[i]` imports from each supplier.
pub fn valuation(inst: &MarketInstance, market: usize, caps: &[Quantity]) -> Result<Money> {
    check_caps(inst, caps)?;
    Ok(greedy_fill(inst, market, caps, None).1)
}

/// The minimal utility-maximizing import bundle for `market` at `markups`.
pub fn demand_bundle(
    inst: &MarketInstance,
    market: usize,
    markups: &MarkupVector,
) -> Result<DemandBundle> {
    if markups.len() != inst.suppliers() {
        return Err(Error::InvalidArgument(format!(
            "expected {} markups, got {}",
            inst.suppliers(),
            markups.len()
        )));
    }
    if markups.0.iter().any(|p| *p < Money::ZERO) {
        return Err(Error::InvalidArgument("markups must be ≥ 0".into()));
    }
    let (imports, utility) = greedy_fill(inst, market, &inst.capacities, Some(markups));
    Ok(DemandBundle { imports, utility })
}

/// Buyer utility `v_j(z) - Σ p_i z_i` of an arbitrary bundle.
pub fn bundle_utility(
    inst: &MarketInstance,
    market: usize,
    bundle: &[Quantity],
    markups: &MarkupVector,
) -> Result<Money> {
    let v = valuation(inst, market, bundle)?;
    let paid: Money = bundle
        .iter()
        .zip(&markups.0)
        .map(|(&z, &p)| p * z)
        .sum();
    Ok(v - paid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(d: Quantity, a: i64, c: i64, t: i64, s: Quantity) -> MarketInstance {
        MarketInstance::from_costs(
            vec![s],
            vec![d],
            Money(a),
            vec![Money(c)],
            vec![vec![Some(Money(t))]],
        )
        .unwrap()
    }

    #[test]
    fn local_spend_examples() {
        let inst = single(3, 1, 10, 2, 2);
        assert_eq!(local_spend(&inst, 0, 0).unwrap(), Money(0));
        assert_eq!(local_spend(&inst, 0, 3).unwrap(), Money(39));
        let flat = single(4, 0, 7, 2, 2);
        assert_eq!(local_spend(&flat, 0, 4).unwrap(), Money(28));
        assert!(local_spend(&inst, 0, 4).is_err());
    }

    #[test]
    fn import_spend_examples() {
        let inst = single(3, 1, 10, 2, 2);
        assert_eq!(import_spend(&inst, 0, 0, 0).unwrap(), Money(0));
        assert_eq!(import_spend(&inst, 0, 0, 2).unwrap(), Money(8));
        assert_eq!(import_spend(&inst, 0, 0, 1).unwrap(), Money(3));
        assert!(matches!(
            import_spend(&inst, 0, 0, 3),
            Err(Error::QuantityOutOfRange { .. })
        ));
    }

    #[test]
    fn import_spend_on_masked_pair_fails() {
        let inst = MarketInstance::from_costs(
            vec![2],
            vec![2],
            Money(1),
            vec![Money(5)],
            vec![vec![None]],
        )
        .unwrap();
        assert!(matches!(
            import_spend(&inst, 0, 0, 1),
            Err(Error::MaskedPair { supplier: 0, market: 0 })
        ));
    }

    #[test]
    fn valuation_examples() {
        let inst = single(3, 1, 10, 2, 3);
        assert_eq!(valuation(&inst, 0, &[0]).unwrap(), Money(0));
        assert_eq!(valuation(&inst, 0, &[2]).unwrap(), Money(20));
        assert_eq!(valuation(&inst, 0, &[3]).unwrap(), Money(24));
        assert!(valuation(&inst, 0, &[4]).is_err());
        assert!(valuation(&inst, 0, &[1, 1]).is_err());
    }

    #[test]
    fn demand_bundle_examples() {
        let inst = single(3, 1, 10, 2, 2);
        let b = demand_bundle(&inst, 0, &MarkupVector::zeros(1)).unwrap();
        assert_eq!(b.imports, vec![2]);
        assert_eq!(b.utility, Money(20));

        // Import cost 3 + 5 ties the local cost 8: local wins.
        let tie = single(1, 0, 8, 3, 1);
        let b = demand_bundle(&tie, 0, &MarkupVector(vec![Money(5)])).unwrap();
        assert_eq!(b.imports, vec![0]);
        assert_eq!(b.utility, Money(0));
    }

    #[test]
    fn imports_never_profitable_gives_zero_bundle() {
        // First import unit costs t + p + a = 30 ≥ top local marginal 10 + 1·5.
        let inst = single(3, 1, 10, 29, 3);
        let b = demand_bundle(&inst, 0, &MarkupVector::zeros(1)).unwrap();
        assert_eq!(b.imports, vec![0]);
        assert_eq!(b.utility, Money::ZERO);
    }

    #[test]
    fn lower_index_wins_supplier_ties() {
        let inst = MarketInstance::from_costs(
            vec![1, 1],
            vec![1],
            Money(0),
            vec![Money(10)],
            vec![vec![Some(Money(3))], vec![Some(Money(3))]],
        )
        .unwrap();
        let b = demand_bundle(&inst, 0, &MarkupVector::zeros(2)).unwrap();
        assert_eq!(b.imports, vec![1, 0]);
    }

    #[test]
    fn negative_markups_rejected() {
        let inst = single(1, 0, 8, 3, 1);
        assert!(demand_bundle(&inst, 0, &MarkupVector(vec![Money(-1)])).is_err());
    }
}
