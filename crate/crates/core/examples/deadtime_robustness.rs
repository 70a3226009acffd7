//! Gains designed for d = 6 s applied to processes whose actual dead time is
//! 3, 6 and 9 s.
//!
//! ```text
//! cargo run --example deadtime_robustness
//! ```

use ipdt::scenario::{run_scenario, Scenario};

fn main() -> ipdt::Result<()> {
    let results = run_scenario(&Scenario::bundled("deadtime-robustness")?)?;
    println!("actual d   overshoot   settling    Kc (fixed)");
    for run in &results.runs {
        println!(
            "{:>6.1} s  {:>8.2} %  {:>8.1} s  {:>10.4}",
            run.override_value("plant.d").unwrap_or(f64::NAN),
            run.metrics.overshoot_pct,
            run.metrics.settling_time.unwrap_or(f64::NAN),
            run.gains.kc.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
