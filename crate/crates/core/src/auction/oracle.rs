//! Exhaustive equilibrium search for small instances.
//!
//! Independent of the greedy and demand-range machinery: valuations come
//! from enumerating every sub-bundle with the spending functions directly,
//! and each markup vector on the integer grid is checked by enumerating all
//! combinations of utility-maximizing bundles.

use crate::auction::spend::{import_spend, local_spend};
use crate::error::{Error, Result};
use crate::market::{Equilibrium, FlowMatrix, MarketInstance, MarkupVector, Money, Quantity};

/// Upper limit on `grid points × bundles` the oracle will evaluate.
pub const ENUMERATION_BUDGET: u128 = 4_000_000_000;

/// Largest markup at which supplier `i` can still sell a unit somewhere:
/// `max_j (c_oj + 2a(d_j − 1) − t_ij)`, floored at zero. Above it the
/// supplier is unsold, so condition 3 rules the markup out.
pub fn markup_ceiling(inst: &MarketInstance, supplier: usize) -> Money {
    let a = inst.congestion;
    (0..inst.markets())
        .filter_map(|j| {
            inst.trade_cost(supplier, j).map(|t| {
                inst.local_costs[j] + a * (2 * inst.demands[j] as i64 - 2) - t
            })
        })
        .max()
        .unwrap_or(Money::ZERO)
        .max(Money::ZERO)
}

struct MarketTable {
    bundles: Vec<Vec<Quantity>>,
    values: Vec<Money>,
}

/// All bundles with `z_i ≤ min(s_i, d_j)` on allowed pairs and `Σ z ≤ d_j`,
/// with valuations `v_j(z)` by enumeration over sub-bundles.
fn market_table(inst: &MarketInstance, j: usize) -> Result<MarketTable> {
    let m = inst.suppliers();
    let d = inst.demands[j];
    let caps: Vec<Quantity> = (0..m)
        .map(|i| {
            if inst.allowed(i, j) {
                inst.capacities[i].min(d)
            } else {
                0
            }
        })
        .collect();
    let radix: Vec<usize> = caps.iter().map(|&c| c as usize + 1).collect();
    let size: usize = radix.iter().product();

    let decode = |mut k: usize| -> Vec<Quantity> {
        let mut z = vec![0; m];
        for i in (0..m).rev() {
            z[i] = (k % radix[i]) as Quantity;
            k /= radix[i];
        }
        z
    };
    let mut stride = vec![1usize; m];
    for i in (0..m.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * radix[i + 1];
    }

    // Direct saving of buying exactly z, then the best saving over
    // sub-bundles by a sweep in index order (sub-bundles come first).
    let mut best = vec![Money(i64::MIN); size];
    let mut bundles = Vec::new();
    let mut values = Vec::new();
    for k in 0..size {
        let z = decode(k);
        let total: Quantity = z.iter().sum();
        let mut v = Money(i64::MIN);
        if total <= d {
            let mut saving = local_spend(inst, j, d)? - local_spend(inst, j, d - total)?;
            for (i, &zi) in z.iter().enumerate() {
                if zi > 0 {
                    saving -= import_spend(inst, i, j, zi)?;
                }
            }
            v = saving;
        }
        for i in 0..m {
            if z[i] > 0 {
                v = v.max(best[k - stride[i]]);
            }
        }
        best[k] = v;
        if total <= d {
            bundles.push(z);
            values.push(v);
        }
    }
    Ok(MarketTable { bundles, values })
}

struct Search<'a> {
    inst: &'a MarketInstance,
    tables: Vec<MarketTable>,
    ceilings: Vec<i64>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a MarketInstance, p_max: Money) -> Result<Self> {
        inst.ensure_valid()?;
        let ceilings: Vec<i64> = (0..inst.suppliers())
            .map(|i| markup_ceiling(inst, i).minor())
            .collect();
        if let Some(c) = ceilings.iter().find(|&&c| c > p_max.minor()) {
            return Err(Error::InvalidArgument(format!(
                "p_max {} below a supplier markup ceiling {c}",
                p_max
            )));
        }
        let grid: u128 = ceilings.iter().map(|&c| c as u128 + 1).product();
        let per_point: u128 = (0..inst.markets())
            .map(|j| {
                (0..inst.suppliers())
                    .map(|i| {
                        if inst.allowed(i, j) {
                            inst.capacities[i].min(inst.demands[j]) as u128 + 1
                        } else {
                            1
                        }
                    })
                    .product::<u128>()
            })
            .sum();
        let required = grid.saturating_mul(per_point.max(1));
        if required > ENUMERATION_BUDGET {
            return Err(Error::EnumerationBudget {
                required,
                budget: ENUMERATION_BUDGET,
            });
        }
        let tables = (0..inst.markets())
            .map(|j| market_table(inst, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Search {
            inst,
            tables,
            ceilings,
        })
    }

    /// Flows supporting `p` as an equilibrium, if any exist.
    fn equilibrium_flows(&self, p: &[i64]) -> Option<FlowMatrix> {
        let argmax: Vec<Vec<usize>> = self
            .tables
            .iter()
            .map(|t| {
                let utils: Vec<i64> = t
                    .bundles
                    .iter()
                    .zip(&t.values)
                    .map(|(z, v)| v.0 - z.iter().zip(p).map(|(&q, &pi)| q as i64 * pi).sum::<i64>())
                    .collect();
                let max = *utils.iter().max().expect("zero bundle always present");
                (0..utils.len()).filter(|&k| utils[k] == max).collect()
            })
            .collect();
        let mut sold = vec![0; self.inst.suppliers()];
        let mut chosen = vec![0; self.tables.len()];
        if self.pick(0, p, &argmax, &mut sold, &mut chosen) {
            let mut x = FlowMatrix::zeros(self.inst.suppliers(), self.inst.markets());
            for (j, &k) in chosen.iter().enumerate() {
                for (i, &z) in self.tables[j].bundles[k].iter().enumerate() {
                    x.flows[i][j] = z;
                }
            }
            Some(x)
        } else {
            None
        }
    }

    fn pick(
        &self,
        j: usize,
        p: &[i64],
        argmax: &[Vec<usize>],
        sold: &mut [Quantity],
        chosen: &mut [usize],
    ) -> bool {
        if j == argmax.len() {
            return (0..sold.len()).all(|i| sold[i] > 0 || p[i] == 0);
        }
        for &k in &argmax[j] {
            let z = &self.tables[j].bundles[k];
            let fits = z
                .iter()
                .enumerate()
                .all(|(i, &q)| sold[i] + q <= self.inst.capacities[i]);
            if !fits {
                continue;
            }
            for (i, &q) in z.iter().enumerate() {
                sold[i] += q;
            }
            chosen[j] = k;
            let found = self.pick(j + 1, p, argmax, sold, chosen);
            for (i, &q) in z.iter().enumerate() {
                sold[i] -= q;
            }
            if found {
                return true;
            }
        }
        false
    }

    /// Visits grid points in lexicographic order until `visit` returns false.
    fn scan(&self, mut visit: impl FnMut(&[i64], FlowMatrix) -> bool) {
        let m = self.ceilings.len();
        let mut p = vec![0i64; m];
        loop {
            if let Some(x) = self.equilibrium_flows(&p) {
                if !visit(&p, x) {
                    return;
                }
            }
            // Odometer with supplier 0 most significant.
            let mut i = m;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if p[i] < self.ceilings[i] {
                    p[i] += 1;
                    break;
                }
                p[i] = 0;
            }
        }
    }
}

fn to_equilibrium(p: &[i64], flows: FlowMatrix) -> Equilibrium {
    Equilibrium {
        markups: MarkupVector(p.iter().map(|&v| Money(v)).collect()),
        flows,
    }
}

/// The lexicographically smallest equilibrium markup vector on the grid
/// `[0, p_max]^m`, with the first supporting flows found.
pub fn brute_force_equilibrium(inst: &MarketInstance, p_max: Money) -> Result<Equilibrium> {
    let search = Search::new(inst, p_max)?;
    let mut found = None;
    search.scan(|p, x| {
        found = Some(to_equilibrium(p, x));
        false
    });
    found.ok_or_else(|| Error::Verification("no equilibrium on the markup grid".into()))
}

/// Every equilibrium markup vector on the grid, each with one witness.
pub fn enumerate_equilibria(inst: &MarketInstance, p_max: Money) -> Result<Vec<Equilibrium>> {
    let search = Search::new(inst, p_max)?;
    let mut all = Vec::new();
    search.scan(|p, x| {
        all.push(to_equilibrium(p, x));
        true
    });
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::verify::verify_equilibrium;

    #[test]
    fn single_supplier_two_markets() {
        let inst = MarketInstance::from_costs(
            vec![1],
            vec![1, 1],
            Money(0),
            vec![Money(10), Money(8)],
            vec![vec![Some(Money(2)), Some(Money(3))]],
        )
        .unwrap();
        let eq = brute_force_equilibrium(&inst, inst.max_local_marginal()).unwrap();
        assert_eq!(eq.markups.0, vec![Money(5)]);
        assert!(verify_equilibrium(&inst, &eq).is_valid());
        // Equilibria are p = 5..=7 (market 1 still buys below 10 - 2 = 8).
        let all = enumerate_equilibria(&inst, inst.max_local_marginal()).unwrap();
        let ps: Vec<i64> = all.iter().map(|e| e.markups.0[0].0).collect();
        assert_eq!(ps, vec![5, 6, 7, 8]);
    }

    #[test]
    fn no_scarcity_zero_markups() {
        let inst = MarketInstance::from_costs(
            vec![5, 5],
            vec![2, 3],
            Money(1),
            vec![Money(9), Money(11)],
            vec![
                vec![Some(Money(1)), Some(Money(2))],
                vec![Some(Money(3)), Some(Money(0))],
            ],
        )
        .unwrap();
        let eq = brute_force_equilibrium(&inst, inst.max_local_marginal()).unwrap();
        assert_eq!(eq.markups, MarkupVector::zeros(2));
    }

    #[test]
    fn symmetric_suppliers_equal_markups() {
        let inst = MarketInstance::from_costs(
            vec![1, 1],
            vec![2, 1],
            Money(1),
            vec![Money(10), Money(9)],
            vec![
                vec![Some(Money(2)), Some(Money(3))],
                vec![Some(Money(2)), Some(Money(3))],
            ],
        )
        .unwrap();
        let eq = brute_force_equilibrium(&inst, inst.max_local_marginal()).unwrap();
        assert_eq!(eq.markups.0[0], eq.markups.0[1]);
    }

    #[test]
    fn markup_ceiling_matches_first_unit_rule() {
        let inst = MarketInstance::from_costs(
            vec![1],
            vec![3, 1],
            Money(2),
            vec![Money(10), Money(8)],
            vec![vec![Some(Money(4)), Some(Money(1))]],
        )
        .unwrap();
        // max(10 + 2·2·2 − 4, 8 − 1) = 14.
        assert_eq!(markup_ceiling(&inst, 0), Money(14));
    }

    #[test]
    fn budget_and_bound_errors() {
        let inst = MarketInstance::from_costs(
            vec![1],
            vec![1],
            Money(0),
            vec![Money(10)],
            vec![vec![Some(Money(2))]],
        )
        .unwrap();
        assert!(matches!(
            brute_force_equilibrium(&inst, Money(3)),
            Err(Error::InvalidArgument(_))
        ));
        let big = MarketInstance::from_costs(
            vec![60; 6],
            vec![60; 3],
            Money(50),
            vec![Money(1000); 3],
            vec![vec![Some(Money(1)); 3]; 6],
        )
        .unwrap();
        assert!(matches!(
            brute_force_equilibrium(&big, big.max_local_marginal()),
            Err(Error::EnumerationBudget { .. })
        ));
    }
}
