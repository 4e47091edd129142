//! A full scenario run on the shipped fixture: calibrate, solve every
//! replication in parallel, aggregate and write the report tables.
//!
//! ```text
//! cargo run --release --example scenario_experiment -- [CONFIG] [OUT_DIR]
//! ```

use std::path::PathBuf;

use phosmarket::experiment::{emit_tables, Experiment, ExperimentConfig};

fn main() -> phosmarket::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/fixture.conf")
    });
    let mut config = ExperimentConfig::from_file(&config)?;
    config.output_dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("phosmarket-scenario"));

    let exp = Experiment::prepare(config)?;
    println!("trade-cost slope {:.4} over {} observations", exp.model.trade_fit.gamma, exp.model.trade_fit.residuals.len());
    let report = exp.run()?;

    println!("{:<16} {:>10} {:>8} {:>8}", "region", "demand kt", "H", "local");
    for (j, r) in report.regions.iter().enumerate() {
        println!(
            "{r:<16} {:>10.0} {:>8.3} {:>8.3}",
            report.demand_kt[j].mean, report.concentration[j].mean, report.local_share[j].mean
        );
    }
    for (i, s) in report.suppliers.iter().enumerate() {
        println!("{s:<16} share {:.3} ± {:.3}", report.supplier_share[i].mean, report.supplier_share[i].sd);
    }
    for path in emit_tables(&report, &exp.config.output_dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
