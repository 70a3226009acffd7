//! Grid search over damping and aggressiveness for the setting whose step
//! metrics on the benchmark process come closest to a target
//! (rise time, settling time, overshoot). The default target is
//! 18.91 s / 60.10 s / 7.68 %; pass three numbers to use another.
//!
//! ```text
//! cargo run --release --example calibration_grid
//! ```

use ipdt::analysis::compute_metrics;
use ipdt::control::Controller;
use ipdt::plant::{IpdtModel, IpdtPlant};
use ipdt::sim::{run_loop, Signal, TimeGrid};
use ipdt::tuning::{pi_gains, TuningSpec};

fn main() -> ipdt::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let target = match args[..] {
        [r, s, o] => (r, s, o),
        _ => (18.91, 60.10, 7.68),
    };
    let model = IpdtModel::new(0.0506, 6.0)?;
    let grid = TimeGrid::new(0.05, 800.0)?;

    let mut best: Option<(f64, f64, f64, [f64; 3])> = None;
    for zi in 0..=16 {
        let zeta = 0.5 + 0.05 * zi as f64;
        for ki in 0..=20 {
            let k = 0.5 + 0.1 * ki as f64;
            let gains = pi_gains(&model, &TuningSpec::new(zeta, k)?)?.gains;
            let trace = run_loop(
                &mut IpdtPlant::new(model)?,
                &mut Controller::ipi(gains),
                &grid,
                &Signal::step(1.0, 0.0),
                &Signal::zero(),
            )?;
            let m = compute_metrics(&trace, 0.0)?;
            let (Some(rise), Some(settle)) = (m.rise_time, m.settling_time) else {
                continue;
            };
            let cost = ((rise - target.0) / target.0).powi(2)
                + ((settle - target.1) / target.1).powi(2)
                + ((m.overshoot_pct - target.2) / target.2).powi(2);
            if best.is_none_or(|b| cost < b.2) {
                best = Some((zeta, k, cost, [rise, settle, m.overshoot_pct]));
            }
        }
    }
    match best {
        Some((zeta, k, cost, [rise, settle, os])) => {
            println!(
                "target   rise {:.2} s, settling {:.2} s, overshoot {:.2} %",
                target.0, target.1, target.2
            );
            println!("closest  zeta = {zeta:.2}, k = {k:.1} (relative cost {cost:.4})");
            println!("         rise {rise:.2} s, settling {settle:.2} s, overshoot {os:.2} %");
        }
        None => println!("no setting settled within the horizon"),
    }
    Ok(())
}
