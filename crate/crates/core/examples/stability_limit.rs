//! Sweep of the aggressiveness multiplier on the benchmark process until the
//! delayed loop diverges, alongside the phase-margin warning.
//!
//! ```text
//! cargo run --example stability_limit
//! ```

use ipdt::scenario::{run_scenario, Scenario};

fn main() -> ipdt::Result<()> {
    let sc =
        Scenario::bundled("k-instability")?.with_sweep("controller.k", vec![1.0, 1.5, 2.0, 2.5, 2.75, 3.0, 3.5])?;
    println!("   k    PM (deg)   overshoot   outcome");
    for run in run_scenario(&sc)?.runs {
        let pm = run
            .tuning
            .as_ref()
            .and_then(|t| t.margin)
            .map_or(f64::NAN, |m| m.phase_margin_deg);
        let outcome = if run.diverged() {
            "diverged"
        } else if run.metrics.settled() {
            "settled"
        } else {
            "not settled"
        };
        let warned = run.flags.iter().any(|f| f == "low_phase_margin");
        println!(
            "{:>5.2}  {pm:>8.2}   {:>8.2} %   {outcome}{}",
            run.override_value("controller.k").unwrap_or(f64::NAN),
            run.metrics.overshoot_pct,
            if warned { ", warned" } else { "" }
        );
    }
    Ok(())
}
