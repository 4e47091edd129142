//! Buyer side of one market: spending, valuation and demand at given
//! markups.
//!
//! ```text
//! cargo run --example valuation
//! ```

use phosmarket::auction::{demand_bundle, import_spend, local_spend, valuation};
use phosmarket::{MarketInstance, MarkupVector, Money};

fn main() -> phosmarket::Result<()> {
    // One market of 6 units, two suppliers; the second is cheaper to ship
    // but has only 2 units.
    let inst = MarketInstance::from_costs(
        vec![5, 2],
        vec![6],
        Money(1),
        vec![Money(14)],
        vec![vec![Some(Money(4))], vec![Some(Money(2))]],
    )?;

    println!("local spend on all 6 units: {}", local_spend(&inst, 0, 6)?);
    for z in 0..=5 {
        println!("  {z} units from supplier 0 cost {}", import_spend(&inst, 0, 0, z)?);
    }

    for caps in [[0, 0], [1, 0], [0, 2], [5, 2]] {
        println!("valuation with caps {caps:?}: {}", valuation(&inst, 0, &caps)?);
    }

    for p in [0, 3, 6, 9] {
        let markups = MarkupVector(vec![Money(p), Money(p)]);
        let b = demand_bundle(&inst, 0, &markups)?;
        println!("markup {p}: buys {:?}, utility {}", b.imports, b.utility);
    }
    Ok(())
}
