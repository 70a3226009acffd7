//! Open-loop step test on a simulated process followed by a fit of the
//! terminal ramp.
//!
//! ```text
//! cargo run --example identify_step_test
//! ```

use ipdt::control::Controller;
use ipdt::identification::{identify_ipdt, StepTestRecord};
use ipdt::plant::{IpdtModel, IpdtPlant};
use ipdt::sim::{run_loop, Signal, TimeGrid};

fn main() -> ipdt::Result<()> {
    let truth = IpdtModel::new(0.0506, 6.0)?;
    let (amplitude, step_time) = (2.0, 10.0);
    let grid = TimeGrid::new(0.05, 200.0)?;
    let mut plant = IpdtPlant::new(truth)?;
    let trace = run_loop(
        &mut plant,
        &mut Controller::open_loop(),
        &grid,
        &Signal::zero(),
        &Signal::step(amplitude, step_time),
    )?;

    let id = identify_ipdt(&StepTestRecord::from_trace(&trace, amplitude, step_time)?)?;
    println!("true       Kp = {:.5}  d = {:.3} s", truth.kp, truth.d);
    println!("identified Kp = {:.5}  d = {:.3} s", id.model.kp, id.model.d);
    println!("{:#?}", id.diagnostics);
    Ok(())
}
