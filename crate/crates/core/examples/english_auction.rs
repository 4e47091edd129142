//! Runs the ascending auction on a small two-market network and prints the
//! markup path, the final flows and the verifier report.
//!
//! ```text
//! cargo run --example english_auction
//! ```

use phosmarket::auction::{run_english_auction_traced, verify_equilibrium};
use phosmarket::{MarketInstance, Money};

fn minor(p: &[Money]) -> Vec<i64> {
    p.iter().map(|m| m.minor()).collect()
}

fn main() -> phosmarket::Result<()> {
    // Supplier 1 cannot ship to market 0.
    let inst = MarketInstance::from_costs(
        vec![3, 4],
        vec![5, 4],
        Money(2),
        vec![Money(20), Money(24)],
        vec![
            vec![Some(Money(3)), Some(Money(6))],
            vec![None, Some(Money(2))],
        ],
    )?;

    let mut path = Vec::new();
    let run = run_english_auction_traced(&inst, |p| path.push(minor(&p.0)))?;
    for (k, p) in path.iter().enumerate().step_by(4) {
        println!("tick {k:>3}: {p:?}");
    }
    println!("stopped after {} ticks at {:?}", run.ticks, minor(&run.equilibrium.markups.0));

    let flows = &run.equilibrium.flows;
    for j in 0..inst.markets() {
        println!(
            "market {j}: imports {:?}, local {}",
            flows.column(j),
            flows.local(j, &inst).unwrap_or(0)
        );
    }
    let report = verify_equilibrium(&inst, &run.equilibrium);
    println!("verifier: {}", if report.is_valid() { "ok".to_string() } else { report.to_string() });
    Ok(())
}
