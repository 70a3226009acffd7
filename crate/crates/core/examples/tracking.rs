//! Setpoint tracking on the benchmark process `0.0506·e^{-6s}/s` with the
//! default damping and aggressiveness.
//!
//! ```text
//! cargo run --example tracking
//! ```

use ipdt::analysis::compute_metrics;
use ipdt::control::Controller;
use ipdt::plant::{IpdtModel, IpdtPlant};
use ipdt::sim::{run_loop, Signal, TimeGrid};
use ipdt::tuning::{pi_gains, TuningSpec};

fn main() -> ipdt::Result<()> {
    let model = IpdtModel::new(0.0506, 6.0)?;
    let tuned = pi_gains(&model, &TuningSpec::default())?;
    println!(
        "Ts = {:.3} s, omega_n = {:.5} rad/s, Kc = {:.4}, Ti = {:.3} s",
        tuned.settling_time.unwrap_or(f64::NAN),
        tuned.omega_n,
        tuned.gains.kc,
        tuned.gains.ti
    );

    let h = TimeGrid::default_step(model.d, Some(tuned.gains.ti));
    let grid = TimeGrid::new(h, 600.0)?;
    let mut plant = IpdtPlant::new(model)?;
    let mut controller = Controller::ipi(tuned.gains);
    let trace = run_loop(
        &mut plant,
        &mut controller,
        &grid,
        &Signal::step(1.0, 0.0),
        &Signal::zero(),
    )?;

    let m = compute_metrics(&trace, 0.0)?;
    println!("rise time      {:.2} s", m.rise_time.unwrap_or(f64::NAN));
    println!("settling time  {:.2} s", m.settling_time.unwrap_or(f64::NAN));
    println!("overshoot      {:.2} %", m.overshoot_pct);
    println!("IAE            {:.3}", m.iae);

    for t in [0.0, 25.0, 50.0, 100.0, 200.0, 400.0] {
        let k = (t / h).round() as usize;
        println!(
            "t = {:>5.0} s  y = {:.4}  u = {:+.4}",
            trace.t[k], trace.y[k], trace.u_applied[k]
        );
    }
    Ok(())
}
