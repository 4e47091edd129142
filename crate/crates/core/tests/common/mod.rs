#![allow(dead_code)]

use phosmarket::calibration::{CalibrationData, ObservedHistory, RegionSeries};
use phosmarket::experiment::ExperimentConfig;
use phosmarket::pipeline::MarketData;
use phosmarket::{MarketInstance, Money, Quantity};
use rand::Rng;

/// Random small instance: m ≤ 3, n ≤ 3, s_i ≤ 4, d_j ≤ 5, integer costs
/// ≤ 20 minor units, each pair masked with probability 1/5.
pub fn small_instance<R: Rng>(rng: &mut R) -> MarketInstance {
    let m = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=3);
    let capacities: Vec<Quantity> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
    let demands: Vec<Quantity> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let congestion = Money(rng.gen_range(0..=3));
    let local_costs = (0..n).map(|_| Money(rng.gen_range(1..=20))).collect();
    let trade_costs = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| (!rng.gen_bool(0.2)).then(|| Money(rng.gen_range(0..=20))))
                .collect()
        })
        .collect();
    MarketInstance::from_costs(capacities, demands, congestion, local_costs, trade_costs)
        .expect("generated instance is valid")
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic")
}

/// The shipped 3-supplier/4-region configuration with outputs redirected.
pub fn fixture_config(out: &std::path::Path, workers: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_file(&fixture_dir().join("fixture.conf")).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg.workers = workers;
    cfg
}

/// Two markets, two suppliers, nothing left to resample: demand follows
/// its instruments exactly, supplier sales track global demand, and the
/// single trade-cost observation fits without residual.
pub fn noiseless_market() -> MarketData {
    let years: Vec<i32> = (2011..2018).collect();
    let series = |name: &str, level: f64| {
        let z: Vec<f64> = years.iter().map(|y| level * (1.0 + 0.05 * (y - 2011) as f64)).collect();
        let x: Vec<f64> = z.iter().map(|z| 1.6 * z).collect();
        let y: Vec<f64> = x.iter().map(|x| 0.7 * x).collect();
        RegionSeries::from_raw(name, &years, &y, &x, &z).unwrap()
    };
    // Supplier 0 serves both markets in both years, supplier 1 only the
    // reference market 0.
    let history = ObservedHistory {
        years: vec![2015, 2016],
        flows: vec![
            vec![vec![300.0, 200.0], vec![100.0, 0.0]],
            vec![vec![330.0, 260.0], vec![110.0, 0.0]],
        ],
        local: vec![vec![600.0, 800.0], vec![620.0, 840.0]],
    };
    let global: Vec<f64> = (0..2).map(|y| history.market_demand(y).iter().sum()).collect();
    let supplier_sales = vec![
        global.iter().map(|g| 0.3 * g).collect(),
        global.iter().map(|g| 0.1 * g).collect(),
    ];
    MarketData {
        suppliers: vec!["North".into(), "South".into()],
        regions: vec!["Hub".into(), "Spoke".into()],
        data: CalibrationData {
            regions: vec![series("Hub", 1000.0), series("Spoke", 1200.0)],
            z_scenario: vec![1400.0, 1600.0],
            supplier_sales,
            global_demand: global,
            history,
        },
    }
}

pub fn noiseless_config(replications: usize) -> ExperimentConfig {
    ExperimentConfig::parse_str(
        &format!(
            "scenario = BAU\nreplications = {replications}\nseed = 3\nquantity_unit_kt = 50\n\
             reference_market = Hub\nreference_year = 2015\n"
        ),
        std::path::Path::new("."),
    )
    .unwrap()
}

/// Exhaustive valuation: the best saving over every import bundle within
/// `caps`, written directly from the spending formulas.
pub fn enumerated_valuation(inst: &MarketInstance, market: usize, caps: &[Quantity]) -> i64 {
    let a = inst.congestion.minor();
    let d = inst.demands[market] as i64;
    let spend = |z: i64, k: i64| z * (a * z + k);
    let c = inst.local_costs[market].minor();
    let baseline = spend(d, c);
    let limits: Vec<i64> = (0..inst.suppliers())
        .map(|i| if inst.allowed(i, market) { caps[i] as i64 } else { 0 })
        .collect();
    let mut best = 0;
    let mut z = vec![0i64; limits.len()];
    loop {
        let total: i64 = z.iter().sum();
        if total <= d {
            let imports: i64 = z
                .iter()
                .enumerate()
                .filter(|(_, &zi)| zi > 0)
                .map(|(i, &zi)| spend(zi, inst.trade_cost(i, market).unwrap().minor()))
                .sum();
            best = best.max(baseline - spend(d - total, c) - imports);
        }
        let mut k = 0;
        loop {
            if k == z.len() {
                return best;
            }
            if z[k] < limits[k] {
                z[k] += 1;
                break;
            }
            z[k] = 0;
            k += 1;
        }
    }
}

/// Random market with up to 8 units of demand and up to 3 suppliers.
pub fn valuation_case<R: Rng>(rng: &mut R) -> (MarketInstance, Vec<Quantity>) {
    let m = rng.gen_range(1..=3);
    let capacities: Vec<Quantity> = (0..m).map(|_| rng.gen_range(1..=8)).collect();
    let inst = MarketInstance::from_costs(
        capacities.clone(),
        vec![rng.gen_range(1..=8)],
        Money(rng.gen_range(0..=4)),
        vec![Money(rng.gen_range(1..=20))],
        (0..m)
            .map(|_| vec![(!rng.gen_bool(0.15)).then(|| Money(rng.gen_range(0..=20)))])
            .collect(),
    )
    .unwrap();
    let caps = capacities.iter().map(|&s| rng.gen_range(0..=s)).collect();
    (inst, caps)
}
