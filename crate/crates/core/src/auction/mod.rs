//! Buyer valuation, demand and the ascending auction that computes the
//! minimal-markup equilibrium, plus an exhaustive oracle for small cases.

mod correspondence;
mod english;
mod flow;
mod oracle;
mod spend;
mod verify;

pub use correspondence::{demand_range, DemandRange};
pub use english::{
    iteration_cap, run_english_auction, run_english_auction_traced, AuctionRun, MAX_SUPPLIERS,
};
pub use oracle::{brute_force_equilibrium, enumerate_equilibria, markup_ceiling, ENUMERATION_BUDGET};
pub use spend::{
    bundle_utility, demand_bundle, import_spend, local_spend, valuation, DemandBundle,
};
pub use verify::{verify_equilibrium, VerificationReport};
