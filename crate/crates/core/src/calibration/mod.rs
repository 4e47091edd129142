//! Bootstrap replications of every exogenous model input.
//!
//! [`CalibratedModel::fit`] estimates the demand, supply and trade-cost
//! relations once; [`CalibratedModel::draw`] then produces the inputs of one
//! replication from its own random stream.

pub mod costs;
pub mod demand;
pub mod regression;
pub mod rng;
pub mod smoothing;
pub mod supply;

pub use costs::{
    calibrate_local_costs, infer_relative_trade_costs, real_shares, sample_trade_costs,
    scenario_share_changes, ObservedHistory, TradeCostInputs,
};
pub use demand::{draw_demand, quantize, wild_bootstrap_demand, DemandDraws, RegionSeries};
pub use regression::{fit_trade_cost_regression, fit_two_stage, ols_slope, TradeCostFit, TwoStageFit};
pub use rng::{rademacher, replication_stream};
pub use smoothing::smooth_cma3;
pub use supply::{estimate_supply_shares, sample_capacity, ScalingBase, SupplyShareEstimate};

use crate::error::{Error, Result};
use crate::market::{MarketInstance, Money, Quantity};

/// Redraws allowed for one out-of-domain value before giving up.
pub const REDRAW_LIMIT: usize = 100;

/// Everything the samplers read, in one volume unit (the pipeline writes kt).
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationData {
    /// Smoothed regional series, one per market in market order.
    pub regions: Vec<RegionSeries>,
    /// Scenario value of crop P2O5 use per market.
    pub z_scenario: Vec<f64>,
    /// `supplier_sales[i][y]` over the observed years.
    pub supplier_sales: Vec<Vec<f64>>,
    /// Global consumption over the same years.
    pub global_demand: Vec<f64>,
    pub history: ObservedHistory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSettings {
    /// Volume of one goods unit.
    pub quantity_unit: f64,
    /// Minor money units per unit price.
    pub money_scale: i64,
    pub theta: f64,
    pub reference_market: usize,
    pub reference_year: i32,
    pub scaling_base: ScalingBase,
}

/// Inputs of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDraw {
    pub replication: u64,
    /// Demand draws in the volume unit, before quantization.
    pub demand_volumes: Vec<f64>,
    pub demands: Vec<Quantity>,
    pub capacities: Vec<Quantity>,
    pub trade_costs: Vec<Vec<Option<Money>>>,
    pub congestion: Money,
    pub local_costs: Vec<Money>,
    /// Demand draws rejected and redrawn in this replication.
    pub rejected: usize,
}

impl BootstrapDraw {
    pub fn instance(&self) -> Result<MarketInstance> {
        MarketInstance::from_costs(
            self.capacities.clone(),
            self.demands.clone(),
            self.congestion,
            self.local_costs.clone(),
            self.trade_costs.clone(),
        )
    }
}

/// Fitted relations shared by all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedModel {
    pub data: CalibrationData,
    pub settings: CalibrationSettings,
    pub demand_fits: Vec<TwoStageFit>,
    pub supply: SupplyShareEstimate,
    pub trade: TradeCostInputs,
    pub trade_fit: TradeCostFit,
}

impl CalibratedModel {
    pub fn fit(data: CalibrationData, settings: CalibrationSettings) -> Result<Self> {
        let n = data.regions.len();
        if n == 0 || data.z_scenario.len() != n || data.history.markets() != n {
            return Err(Error::Data(format!(
                "{n} regions, {} scenario values and {} traded markets do not line up",
                data.z_scenario.len(),
                data.history.markets()
            )));
        }
        if data.supplier_sales.len() != data.history.suppliers() {
            return Err(Error::Data("supplier sales and trade history disagree".into()));
        }
        if !(settings.quantity_unit > 0.0) || settings.money_scale <= 0 {
            return Err(Error::Config("quantity unit and money scale must be positive".into()));
        }
        let demand_fits = data.regions.iter().map(RegionSeries::fit).collect::<Result<_>>()?;
        let supply =
            estimate_supply_shares(&data.supplier_sales, &data.global_demand, settings.scaling_base)?;
        let trade = infer_relative_trade_costs(
            &data.history,
            settings.reference_market,
            settings.reference_year,
            settings.theta,
        )?;
        let trade_fit = trade.fit()?;
        Ok(CalibratedModel {
            data,
            settings,
            demand_fits,
            supply,
            trade,
            trade_fit,
        })
    }

    pub fn suppliers(&self) -> usize {
        self.data.supplier_sales.len()
    }

    pub fn markets(&self) -> usize {
        self.data.regions.len()
    }

    /// Inputs of replication `replication`. Demands, then capacities, then
    /// trade costs consume the stream, so every draw is a pure function of
    /// `(master_seed, replication)`.
    pub fn draw(&self, master_seed: u64, replication: u64) -> Result<BootstrapDraw> {
        let s = &self.settings;
        let mut rng = replication_stream(master_seed, replication);
        let mut demand_volumes = Vec::with_capacity(self.markets());
        let mut demands = Vec::with_capacity(self.markets());
        let mut rejected = 0;
        for ((series, fit), &z) in self.data.regions.iter().zip(&self.demand_fits).zip(&self.data.z_scenario) {
            let (value, units, r) = draw_demand(series, fit, z, s.quantity_unit, &mut rng)?;
            demand_volumes.push(value);
            demands.push(units);
            rejected += r;
        }
        let global_units = demand_volumes.iter().sum::<f64>() / s.quantity_unit;
        let pool: Vec<f64> = self.supply.deviations.iter().map(|d| d / s.quantity_unit).collect();
        let capacities = sample_capacity(global_units, &self.supply.shares, &pool, &mut rng)?;
        let changes =
            scenario_share_changes(&demand_volumes, &self.trade.base_shares, s.reference_market)?;
        let trade_costs =
            sample_trade_costs(&self.trade.base_costs, &changes, &self.trade_fit, s.money_scale, &mut rng)?;
        let (congestion, local_costs) = calibrate_local_costs(&demands, s.theta, s.money_scale)?;
        Ok(BootstrapDraw {
            replication,
            demand_volumes,
            demands,
            capacities,
            trade_costs,
            congestion,
            local_costs,
            rejected,
        })
    }
}
