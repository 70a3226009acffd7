//! The full workflow on the reduced AUV depth model: stern-plane step test,
//! IPDT fit, gains for ζ = 0.7 and ωₙ = 0.03 rad/s, then a 5 m depth change
//! under the stern-plane deflection and rate limits.
//!
//! ```text
//! cargo run --example auv_depth
//! ```

use ipdt::analysis::compute_metrics;
use ipdt::control::Controller;
use ipdt::identification::{identify_ipdt, StepTestRecord};
use ipdt::plant::{AuvDepthModel, AuvPlant};
use ipdt::sim::{run_loop, Signal, TimeGrid};
use ipdt::tuning::{pi_gains, TuningSpec};

fn main() -> ipdt::Result<()> {
    let vehicle = AuvDepthModel::reference();
    let stern = 0.03491;
    let grid = TimeGrid::new(0.05, 300.0)?;
    let test = run_loop(
        &mut AuvPlant::new(vehicle),
        &mut Controller::open_loop(),
        &grid,
        &Signal::zero(),
        &Signal::step(stern, 0.0),
    )?;
    let id = identify_ipdt(&StepTestRecord::from_trace(&test, stern, 0.0)?)?;
    println!("step test: Kp = {:.4} m/(s·rad), d = {:.2} s", id.model.kp, id.model.d);

    let spec = TuningSpec::new(0.7, 1.0)?.with_omega_n(0.03)?;
    let tuned = pi_gains(&id.model, &spec)?;
    println!("gains:     Kc = {:.5}, Ti = {:.2} s", tuned.gains.kc, tuned.gains.ti);
    if let Some(m) = tuned.margin {
        println!("margin:    {:.1} deg at {:.4} rad/s", m.phase_margin_deg, m.crossover);
    }

    let grid = TimeGrid::new(0.05, 1000.0)?;
    let mut controller = Controller::ipi(tuned.gains).with_limits(vehicle.actuator);
    let trace = run_loop(
        &mut AuvPlant::new(vehicle),
        &mut controller,
        &grid,
        &Signal::step(5.0, 0.0),
        &Signal::zero(),
    )?;
    let m = compute_metrics(&trace, 0.0)?;
    let deflection = trace.aux("stern").unwrap_or_default();
    let pitch = trace.aux("theta").unwrap_or_default();
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    println!(
        "5 m step:  overshoot {:.2} %, settling {:.1} s",
        m.overshoot_pct,
        m.settling_time.unwrap_or(f64::NAN)
    );
    println!(
        "           max |stern| {:.4} rad (limit {}), max |pitch| {:.2} deg",
        max_abs(deflection),
        vehicle.actuator.max_deflection,
        max_abs(pitch).to_degrees()
    );
    Ok(())
}
