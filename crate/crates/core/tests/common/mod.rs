//! Closed-form references shared by the integration tests. These are written
//! independently of the library's own analysis helpers.
#![allow(dead_code)]

use num_complex::Complex64;

use ipdt::control::{Controller, PiGains};
use ipdt::plant::{IpdtModel, IpdtPlant};
use ipdt::sim::{run_loop, Signal, SimTrace, TimeGrid};

fn poles(zeta: f64, wn: f64) -> (Complex64, Complex64) {
    let disc = Complex64::new(zeta * zeta - 1.0, 0.0).sqrt();
    (wn * (-zeta + disc), wn * (-zeta - disc))
}

/// Unit-step response of `wn²/(s² + 2ζwn·s + wn²)` by partial fractions.
pub fn step_response(zeta: f64, wn: f64, t: f64) -> f64 {
    if (zeta - 1.0).abs() < 1e-6 {
        return 1.0 - (-wn * t).exp() * (1.0 + wn * t);
    }
    let (s1, s2) = poles(zeta, wn);
    let w2 = wn * wn;
    let y = 1.0 + w2 * (s1 * t).exp() / (s1 * (s1 - s2)) + w2 * (s2 * t).exp() / (s2 * (s2 - s1));
    y.re
}

/// Output for a unit step at the plant input: `Kp/(s² + 2ζwn·s + wn²)`.
pub fn disturbance_response(zeta: f64, wn: f64, kp: f64, t: f64) -> f64 {
    if (zeta - 1.0).abs() < 1e-6 {
        return kp * t * (-wn * t).exp();
    }
    let (s1, s2) = poles(zeta, wn);
    (kp * ((s1 * t).exp() - (s2 * t).exp()) / (s1 - s2)).re
}

pub fn percent_overshoot(zeta: f64) -> f64 {
    if zeta >= 1.0 {
        0.0
    } else {
        100.0 * (-std::f64::consts::PI * zeta / (1.0 - zeta * zeta).sqrt()).exp()
    }
}

/// Gains placing the zero-delay poles at the given damping and frequency.
pub fn placed_gains(kp: f64, zeta: f64, wn: f64) -> PiGains {
    PiGains::new(2.0 * zeta * wn / kp, 2.0 * zeta / wn).unwrap()
}

pub fn ipi_loop(model: IpdtModel, gains: PiGains, setpoint: Signal, dist: Signal, h: f64, horizon: f64) -> SimTrace {
    let mut plant = IpdtPlant::new(model).unwrap();
    let mut ctl = Controller::ipi(gains);
    let grid = TimeGrid::new(h, horizon).unwrap();
    run_loop(&mut plant, &mut ctl, &grid, &setpoint, &dist).unwrap()
}

pub fn benchmark() -> IpdtModel {
    IpdtModel::new(0.0506, 6.0).unwrap()
}
