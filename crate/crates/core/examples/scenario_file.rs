//! Run any scenario file (or bundled scenario name) and write its CSV, JSON
//! and SVG outputs under `$IPDT_OUTPUT_DIR` (default `runs/`).
//!
//! ```text
//! cargo run --example scenario_file -- crates/core/scenarios/zeta-sweep.toml
//! ```

use std::path::PathBuf;

use ipdt::scenario::{emit_outputs, run_scenario, Scenario, OUTPUT_DIR_ENV};

fn main() -> ipdt::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "zeta-sweep".to_string());
    let scenario = Scenario::open(&spec)?;
    let root = std::env::var_os(OUTPUT_DIR_ENV).map_or_else(|| PathBuf::from("runs"), PathBuf::from);
    let results = run_scenario(&scenario)?;
    for run in &results.runs {
        println!(
            "{:<24} overshoot {:>6.2} %  flags {:?}",
            run.sweep_point, run.metrics.overshoot_pct, run.flags
        );
    }
    for path in emit_outputs(&results, &root.join(scenario.name()))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
