//! Rejection of a unit step load at the process input. The feedforward path
//! is idle because the setpoint never moves; only the feedback PI acts.
//!
//! ```text
//! cargo run --example regulation
//! ```

use ipdt::analysis::compute_metrics;
use ipdt::control::Controller;
use ipdt::plant::{IpdtModel, IpdtPlant};
use ipdt::sim::{run_loop, Signal, TimeGrid};
use ipdt::tuning::{pi_gains, TuningSpec};

fn main() -> ipdt::Result<()> {
    let model = IpdtModel::new(0.0506, 6.0)?;
    let gains = pi_gains(&model, &TuningSpec::default())?.gains;
    let grid = TimeGrid::new(0.05, 600.0)?;
    let mut plant = IpdtPlant::new(model)?;
    let trace = run_loop(
        &mut plant,
        &mut Controller::ipi(gains),
        &grid,
        &Signal::zero(),
        &Signal::step(1.0, 0.0),
    )?;

    let (i_peak, peak) = trace.y.iter().enumerate().fold(
        (0, 0.0f64),
        |acc, (i, &y)| if y.abs() > acc.1.abs() { (i, y) } else { acc },
    );
    let m = compute_metrics(&trace, 0.0)?;
    println!("peak deviation {peak:.4} at t = {:.1} s", trace.t[i_peak]);
    println!("settling time  {:.1} s", m.settling_time.unwrap_or(f64::NAN));
    println!("final output   {:.2e}", trace.y.last().copied().unwrap_or_default());
    println!(
        "final control  {:+.4} (cancels the load)",
        trace.u_applied.last().copied().unwrap_or_default()
    );
    println!(
        "flags          {:?}",
        m.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>()
    );
    Ok(())
}
