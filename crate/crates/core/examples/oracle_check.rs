//! Compares the auction with exhaustive search over a markup grid on
//! random small instances.
//!
//! ```text
//! cargo run --release --example oracle_check -- 500
//! ```

use phosmarket::auction::{brute_force_equilibrium, enumerate_equilibria, run_english_auction};
use phosmarket::{MarketInstance, Money, Quantity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng) -> phosmarket::Result<MarketInstance> {
    let m = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=3);
    let capacities: Vec<Quantity> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
    let demands: Vec<Quantity> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    MarketInstance::from_costs(
        capacities,
        demands,
        Money(rng.gen_range(0..=3)),
        (0..n).map(|_| Money(rng.gen_range(1..=20))).collect(),
        (0..m)
            .map(|_| (0..n).map(|_| (!rng.gen_bool(0.2)).then(|| Money(rng.gen_range(0..=20)))).collect())
            .collect(),
    )
}

fn main() -> phosmarket::Result<()> {
    let cases: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut equilibria = 0;
    for k in 0..cases {
        let inst = random_instance(&mut rng)?;
        let auction = run_english_auction(&inst)?;
        let oracle = brute_force_equilibrium(&inst, inst.max_local_marginal())?;
        if auction.markups != oracle.markups {
            eprintln!("case {k}: auction {:?}, oracle {:?}\n{inst:?}", auction.markups.0, oracle.markups.0);
            std::process::exit(2);
        }
        let all = enumerate_equilibria(&inst, inst.max_local_marginal())?;
        assert!(all.iter().all(|e| auction.markups.le_componentwise(&e.markups)));
        equilibria += all.len();
    }
    println!("{cases} instances agree; auction below all {equilibria} grid equilibria");
    Ok(())
}
