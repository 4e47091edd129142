//! Wild-bootstrap demand draws for one region, plus the full set of
//! replication inputs of a small calibrated market.
//!
//! ```text
//! cargo run --example bootstrap_demand
//! ```

use phosmarket::calibration::{
    replication_stream, wild_bootstrap_demand, CalibratedModel, CalibrationSettings, RegionSeries,
};
use phosmarket::metrics::mean_sd;
use phosmarket::pipeline::load_market_data;

fn main() -> phosmarket::Result<()> {
    let years: Vec<i32> = (2008..2018).collect();
    let z = [410.0, 432.0, 425.0, 451.0, 470.0, 466.0, 489.0, 502.0, 515.0, 509.0];
    let x = [655.0, 700.0, 672.0, 731.0, 748.0, 760.0, 780.0, 815.0, 820.0, 826.0];
    let y = [302.0, 318.0, 305.0, 340.0, 336.0, 351.0, 362.0, 371.0, 380.0, 377.0];
    let series = RegionSeries::from_raw("Example", &years, &y, &x, &z)?;
    let fit = series.fit()?;
    println!("alpha {:.4}, beta {:.4}", fit.alpha, fit.beta);

    let scenario_z = 600.0;
    let mut rng = replication_stream(7, 0);
    let draws = wild_bootstrap_demand(&series, scenario_z, 1000, 25.0, &mut rng)?;
    let (mean, sd) = mean_sd(&draws.values).expect("non-empty");
    println!(
        "point {:.1} kt, bootstrap mean {mean:.1} kt (sd {sd:.1}), {} rejected",
        fit.predict(scenario_z),
        draws.rejected
    );

    // The same machinery on the shipped fixture.
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/data");
    let market = load_market_data(&dir, "BAU")?;
    let settings = CalibrationSettings {
        quantity_unit: 250.0,
        money_scale: 100,
        theta: 0.5,
        reference_market: market.region_index("East Asia")?,
        reference_year: 2015,
        scaling_base: Default::default(),
    };
    let model = CalibratedModel::fit(market.data, settings)?;
    for b in 0..3 {
        let d = model.draw(20240601, b)?;
        println!(
            "replication {b}: demands {:?}, capacities {:?}, a = {}, local costs {:?}",
            d.demands,
            d.capacities,
            d.congestion,
            d.local_costs.iter().map(|c| c.minor()).collect::<Vec<_>>()
        );
    }
    Ok(())
}
