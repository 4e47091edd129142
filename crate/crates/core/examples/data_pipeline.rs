//! Raw trade, consumption and crop tables to the harmonized inputs.
//!
//! ```text
//! cargo run --example data_pipeline -- [RAW_DIR] [OUT_DIR]
//! ```

use std::path::PathBuf;

use phosmarket::pipeline::{convert_to_p2o5, run_pipeline, ProductKind};

fn main() -> phosmarket::Result<()> {
    let mut args = std::env::args().skip(1);
    let raw = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/raw"));
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("phosmarket-pipeline"));

    for kind in [ProductKind::Dap, ProductKind::Map, ProductKind::MapChina, ProductKind::DapMapMix] {
        println!("1000 kt {kind} = {} kt P2O5", convert_to_p2o5(1000.0, kind)?);
    }

    let summary = run_pipeline(&raw, &out)?;
    println!(
        "{} suppliers, {} regions, {} flow cells, {} clamped, {} fallback rates",
        summary.suppliers, summary.regions, summary.flow_cells, summary.clamped_cells, summary.fallback_rates
    );
    for path in &summary.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
