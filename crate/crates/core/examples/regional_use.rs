//! World totals, growth and regional contributions of crop phosphorus use
//! from a `region,data,bau,sss` table.
//!
//! ```text
//! cargo run --example regional_use -- [TABLE]
//! ```

use std::path::PathBuf;

use phosmarket::pipeline::{aggregate_use, read_csv, UseRow};

fn main() -> phosmarket::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/regional_use.csv"));
    let rows: Vec<UseRow> = read_csv(&path)?;
    let t = aggregate_use(&rows)?;
    println!("{:<34} {:>8} {:>8}", "region", "BAU %", "SSS %");
    for (k, r) in rows.iter().enumerate() {
        println!("{:<34} {:>8.1} {:>8.1}", r.region, t.contribution_bau[k], t.contribution_sss[k]);
    }
    println!("world: {:.2} -> {:.2} (BAU, +{:.1}%), {:.2} (SSS, +{:.1}%)", t.data, t.bau, t.growth_bau, t.sss, t.growth_sss);
    Ok(())
}
