//! Ascending (English) auction on supplier markups.
//!
//! Starting from zero markups, every tick finds the overdemanded supplier
//! set with the largest excess demand (the inclusion-minimal one among
//! ties) and raises each member's markup by one minor unit. Excess demand
//! of a set `T` is `Σ_j min_req_j(T) - Σ_{i∈T} s_i`, where `min_req_j(T)`
//! is the least the market must buy from `T` in any of its optimal
//! bundles. When no set is overdemanded an allocation inside every
//! market's demand range exists and is picked by a bounded flow.

use log::debug;

use crate::auction::correspondence::{demand_range, DemandRange};
use crate::auction::flow::BoundedNetwork;
use crate::auction::spend::demand_bundle;
use crate::error::{Error, Result};
use crate::market::{Equilibrium, FlowMatrix, MarketInstance, MarkupVector, Money, Quantity};

/// Supplier subsets are enumerated as bitmasks.
pub const MAX_SUPPLIERS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuctionRun {
    pub equilibrium: Equilibrium,
    pub ticks: u64,
}

/// `m × (max_j(c_oj + a(2 d_j − 1)) + 1)`.
pub fn iteration_cap(inst: &MarketInstance) -> u64 {
    inst.suppliers() as u64 * (inst.max_local_marginal().minor().max(0) as u64 + 1)
}

pub fn run_english_auction(inst: &MarketInstance) -> Result<Equilibrium> {
    run_english_auction_traced(inst, |_| {}).map(|run| run.equilibrium)
}

/// Runs the auction, calling `on_tick` with the markup vector at the start
/// of every tick and once more with the final vector.
pub fn run_english_auction_traced(
    inst: &MarketInstance,
    mut on_tick: impl FnMut(&MarkupVector),
) -> Result<AuctionRun> {
    inst.ensure_valid()?;
    let m = inst.suppliers();
    if m > MAX_SUPPLIERS {
        return Err(Error::InvalidArgument(format!(
            "auction supports at most {MAX_SUPPLIERS} suppliers, got {m}"
        )));
    }
    let cap = iteration_cap(inst);
    let mut markups = MarkupVector::zeros(m);
    let mut ticks = 0u64;
    loop {
        on_tick(&markups);
        let ranges: Vec<DemandRange> = (0..inst.markets())
            .map(|j| demand_range(inst, j, &markups))
            .collect();
        let Some(set) = overdemanded_set(inst, &ranges) else {
            let flows = allocate(inst, &markups, &ranges)?;
            debug!("auction stopped after {ticks} ticks at {:?}", markups.0);
            return Ok(AuctionRun {
                equilibrium: Equilibrium { markups, flows },
                ticks,
            });
        };
        ticks += 1;
        if ticks > cap {
            return Err(Error::IterationCap { cap });
        }
        for i in 0..m {
            if set & (1 << i) != 0 {
                markups.0[i] += Money(1);
            }
        }
    }
}

fn excess(inst: &MarketInstance, ranges: &[DemandRange], set: u32) -> i64 {
    let required: Quantity = ranges.iter().map(|r| r.min_requirement(set)).sum();
    let supply: Quantity = (0..inst.suppliers())
        .filter(|i| set & (1 << i) != 0)
        .map(|i| inst.capacities[i])
        .sum();
    required as i64 - supply as i64
}

/// Inclusion-minimal supplier set of maximal positive excess demand.
fn overdemanded_set(inst: &MarketInstance, ranges: &[DemandRange]) -> Option<u32> {
    let m = inst.suppliers();
    let mut best = 0i64;
    let mut maximizers = Vec::new();
    for set in 1u32..(1u32 << m) {
        let e = excess(inst, ranges, set);
        if e > best {
            best = e;
            maximizers.clear();
        }
        if e == best && e > 0 {
            maximizers.push(set);
        }
    }
    let common = maximizers.iter().fold(u32::MAX, |acc, s| acc & s);
    if maximizers.is_empty() {
        None
    } else if common != 0 && excess(inst, ranges, common) == best {
        Some(common)
    } else {
        // Excess is supermodular for these demand ranges, so this branch is
        // unreachable in theory; fall back to the smallest maximizer.
        maximizers.into_iter().min_by_key(|s| (s.count_ones(), *s))
    }
}

/// Every market's minimal demanded bundle, if together they already
/// respect capacities and sell something of every marked-up supplier.
fn minimal_bundles(inst: &MarketInstance, markups: &MarkupVector) -> Result<Option<FlowMatrix>> {
    let mut x = FlowMatrix::zeros(inst.suppliers(), inst.markets());
    for j in 0..inst.markets() {
        let bundle = demand_bundle(inst, j, markups)?;
        for (i, z) in bundle.imports.into_iter().enumerate() {
            x.flows[i][j] = z;
        }
    }
    let clears = (0..inst.suppliers()).all(|i| {
        let sold = x.sold(i);
        sold <= inst.capacities[i] && (sold > 0 || markups.get(i) == Money::ZERO)
    });
    Ok(clears.then_some(x))
}

/// Picks flows inside every market's demand range that respect capacities
/// and leave no positively marked-up supplier unsold.
fn allocate(
    inst: &MarketInstance,
    markups: &MarkupVector,
    ranges: &[DemandRange],
) -> Result<FlowMatrix> {
    let (m, n) = (inst.suppliers(), inst.markets());
    if let Some(x) = minimal_bundles(inst, markups)? {
        return Ok(x);
    }
    let solved = {
        // Nodes: markets 0..n, suppliers n..n+m, hub n+m, root n+m+1.
        let hub = n + m;
        let root = n + m + 1;
        let mut net = BoundedNetwork::new(n + m + 2);
        let mut cells = Vec::new();
        for (j, r) in ranges.iter().enumerate() {
            let d = r.demand as i64;
            net.add_edge(root, j, d, d);
            net.add_edge(j, hub, r.local_lower as i64, r.local_upper as i64);
            for i in 0..m {
                if r.upper[i] > 0 {
                    let e = net.add_edge(j, n + i, r.lower[i] as i64, r.upper[i] as i64);
                    cells.push((i, j, e));
                }
            }
        }
        for i in 0..m {
            let need = i64::from(markups.get(i) > Money::ZERO);
            net.add_edge(n + i, hub, need, inst.capacities[i] as i64);
        }
        net.add_edge(hub, root, 0, i64::MAX / 4);
        net.solve().map(|flow| {
            let mut x = FlowMatrix::zeros(m, n);
            for (i, j, e) in cells {
                x.flows[i][j] = flow[e] as Quantity;
            }
            x
        })
    };
    solved.ok_or_else(|| {
        Error::Verification(format!(
            "no allocation clears the market at markups {:?}",
            markups.0
        ))
    })
}
