//! Control effort of the I+PI structure against the two bundled PID
//! comparison settings on the same tracking task.
//!
//! ```text
//! cargo run --example pid_comparison
//! ```

use ipdt::scenario::{run_scenario, Scenario};

fn main() -> ipdt::Result<()> {
    println!(
        "{:<26} {:>10} {:>10} {:>12} {:>9}",
        "scenario", "overshoot", "settling", "max |du|", "max |u|"
    );
    for name in [
        "benchmark-tracking",
        "benchmark-pid-moderate",
        "benchmark-pid-aggressive",
    ] {
        let run = run_scenario(&Scenario::bundled(name)?)?.runs.remove(0);
        let u_max = run.trace.u_applied.iter().fold(0.0f64, |a, u| a.max(u.abs()));
        println!(
            "{name:<26} {:>9.2}% {:>9.1}s {:>12.5} {:>9.3}",
            run.metrics.overshoot_pct,
            run.metrics.settling_time.unwrap_or(f64::NAN),
            run.trace.max_control_increment(),
            u_max
        );
    }
    Ok(())
}
