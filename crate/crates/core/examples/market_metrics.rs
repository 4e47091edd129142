//! Concentration, local share and diversification of an equilibrium.
//!
//! ```text
//! cargo run --example market_metrics
//! ```

use phosmarket::auction::run_english_auction;
use phosmarket::metrics::{diversification_index, market_rows, normalized_hhi, supplier_rows};
use phosmarket::{MarketInstance, Money};

fn main() -> phosmarket::Result<()> {
    let inst = MarketInstance::from_costs(
        vec![4, 3, 2],
        vec![6, 5, 3],
        Money(1),
        vec![Money(22), Money(18), Money(25)],
        vec![
            vec![Some(Money(2)), Some(Money(7)), Some(Money(5))],
            vec![Some(Money(6)), Some(Money(1)), None],
            vec![None, Some(Money(4)), Some(Money(3))],
        ],
    )?;
    let eq = run_english_auction(&inst)?;
    let markups: Vec<i64> = eq.markups.0.iter().map(|p| p.minor()).collect();
    println!("markups {markups:?}");

    println!("market   H      local share");
    for r in market_rows(&eq.flows, &inst) {
        println!("{:>6}   {:.3}  {:.3}", r.market, r.concentration, r.local_share);
    }
    println!("supplier D      global share");
    for r in supplier_rows(&eq.flows, &inst) {
        let d = r.diversification.map_or("-".into(), |d| format!("{:.3}", d.index));
        println!("{:>8} {d:<6} {:.3}", r.supplier, r.global_share);
    }

    println!("monopoly H = {}", normalized_hhi([1.0, 0.0, 0.0], 3));
    println!("2 of 9 markets D = {}", diversification_index([0.5, 0.5], 9));
    Ok(())
}
