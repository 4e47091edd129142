//! Many-to-many matching model of a spatially distributed commodity market.
//!
//! International suppliers with limited capacity sell a homogeneous good to
//! regional markets that can also buy from local producers. Markets value
//! imports by the local spending they save; suppliers set a uniform markup
//! over trade cost. [`auction::run_english_auction`] computes the
//! equilibrium with the smallest markup vector, [`metrics`] summarizes the
//! resulting flows, and [`calibration`], [`pipeline`] and [`experiment`]
//! drive bootstrap scenario runs from CSV inputs.

pub mod auction;
pub mod calibration;
pub mod error;
pub mod experiment;
pub mod market;
pub mod metrics;
pub mod pipeline;

pub use error::{Error, Result};
pub use market::{
    validate_instance, Equilibrium, FlowMatrix, MarketInstance, MarkupVector, Money, Quantity,
    ValidationReport, DEFAULT_MONEY_SCALE,
};
