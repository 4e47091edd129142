mod common;

use phosmarket::auction::{
    brute_force_equilibrium, enumerate_equilibria, run_english_auction, verify_equilibrium,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn auction_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..300 {
        let inst = common::small_instance(&mut rng);
        let eq = run_english_auction(&inst).unwrap_or_else(|e| panic!("case {k}: {e}\n{inst:?}"));
        let oracle = brute_force_equilibrium(&inst, inst.max_local_marginal()).unwrap();
        assert_eq!(eq.markups, oracle.markups, "case {k}: {inst:?}");
        assert!(verify_equilibrium(&inst, &eq).is_valid());
        assert!(verify_equilibrium(&inst, &oracle).is_valid());
    }
}

#[test]
fn auction_is_componentwise_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..80 {
        let inst = common::small_instance(&mut rng);
        let eq = run_english_auction(&inst).unwrap();
        for other in enumerate_equilibria(&inst, inst.max_local_marginal()).unwrap() {
            assert!(eq.markups.le_componentwise(&other.markups), "case {k}: {:?} vs {:?}", eq.markups, other.markups);
        }
    }
}
