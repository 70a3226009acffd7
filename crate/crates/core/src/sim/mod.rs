//! Fixed-step simulation engine.
//!
//! Sample `k` lives at `t = k·h`. At every sample the controller sees the
//! current plant output, its applied command plus the input disturbance is
//! held over `[t, t+h)` while the plant advances one step.

mod delay;
mod rk4;
mod signal;

pub use delay::DelayLine;
pub use rk4::integrate_step;
pub use signal::Signal;

use crate::{Error, Result};

/// Largest step the default-step rule will pick, in seconds.
pub const MAX_DEFAULT_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    step: f64,
    horizon: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(step: f64, horizon: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::invalid("step", format!("must be finite and > 0, got {step}")));
        }
        if !(horizon >= step) || !horizon.is_finite() {
            return Err(Error::invalid(
                "horizon",
                format!("must be finite and >= step ({step}), got {horizon}"),
            ));
        }
        let n_steps = (horizon / step).round() as usize;
        Ok(Self { step, horizon, n_steps })
    }

    /// `min(d/20, Ti/50, 0.05)`, skipping terms that are zero or absent.
    pub fn default_step(dead_time: f64, integral_time: Option<f64>) -> f64 {
        let mut h = MAX_DEFAULT_STEP;
        if dead_time > 0.0 {
            h = h.min(dead_time / 20.0);
        }
        if let Some(ti) = integral_time.filter(|ti| *ti > 0.0 && ti.is_finite()) {
            h = h.min(ti / 50.0);
        }
        h
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Time of sample `k`, computed without accumulation.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|k| self.time(k))
    }
}

/// Uniformly sampled record of one closed-loop run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimTrace {
    pub t: Vec<f64>,
    /// Setpoint.
    pub r: Vec<f64>,
    /// Disturbance injected at the plant input.
    pub d_in: Vec<f64>,
    pub u_ff: Vec<f64>,
    pub u_fb: Vec<f64>,
    pub u_applied: Vec<f64>,
    pub y: Vec<f64>,
    /// Extra plant channels (AUV pitch, heave, ...), one column each.
    pub aux: Vec<AuxChannel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxChannel {
    pub name: String,
    pub values: Vec<f64>,
}

impl SimTrace {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            t: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            d_in: Vec::with_capacity(n),
            u_ff: Vec::with_capacity(n),
            u_fb: Vec::with_capacity(n),
            u_applied: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            aux: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn step(&self) -> Option<f64> {
        (self.t.len() >= 2).then(|| self.t[1] - self.t[0])
    }

    pub fn aux(&self, name: &str) -> Option<&[f64]> {
        self.aux.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    /// Largest absolute change of the applied control between samples.
    pub fn max_control_increment(&self) -> f64 {
        self.u_applied
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }

    fn push(&mut self, t: f64, r: f64, d_in: f64, out: ControlOutput, y: f64) {
        self.t.push(t);
        self.r.push(r);
        self.d_in.push(d_in);
        self.u_ff.push(out.u_ff);
        self.u_fb.push(out.u_fb);
        self.u_applied.push(out.u_applied);
        self.y.push(y);
    }
}

/// A process advanced by the simulation loop.
pub trait Plant {
    fn output(&self) -> f64;

    /// Advance from `t` to `t + h` with `input` held constant.
    fn advance(&mut self, t: f64, h: f64, input: f64) -> Result<()>;

    /// Names of extra channels recorded alongside the output.
    fn aux_names(&self) -> &'static [&'static str] {
        &[]
    }

    /// Current values of the channels named by [`Plant::aux_names`].
    fn aux_values(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ControlOutput {
    pub u_ff: f64,
    pub u_fb: f64,
    /// Command after actuator limiting; this is what drives the plant.
    pub u_applied: f64,
}

/// A controller evaluated once per sample.
pub trait ControlLaw {
    fn update(&mut self, r: f64, y: f64, h: f64) -> ControlOutput;
}

/// Closed loop with the disturbance added to the applied
/// control at the plant input.
pub fn run_loop(
    plant: &mut dyn Plant,
    controller: &mut dyn ControlLaw,
    grid: &TimeGrid,
    setpoint: &Signal,
    disturbance: &Signal,
) -> Result<SimTrace> {
    let n = grid.n_steps() + 1;
    let h = grid.step();
    let mut trace = SimTrace::with_capacity(n);
    let names = plant.aux_names();
    let mut aux: Vec<Vec<f64>> = names.iter().map(|_| Vec::with_capacity(n)).collect();

    for k in 0..n {
        let t = grid.time(k);
        let r = setpoint.value(t);
        let dist = disturbance.value(t);
        let y = plant.output();
        if !y.is_finite() {
            return Err(Error::NumericFault {
                t,
                detail: format!("plant output {y}"),
            });
        }
        let out = controller.update(r, y, h);
        if !out.u_applied.is_finite() {
            return Err(Error::NumericFault {
                t,
                detail: format!("control output {}", out.u_applied),
            });
        }
        trace.push(t, r, dist, out, y);
        for (col, v) in aux.iter_mut().zip(plant.aux_values()) {
            col.push(v);
        }
        if k + 1 < n {
            plant.advance(t, h, out.u_applied + dist)?;
        }
    }

    trace.aux = names
        .iter()
        .zip(aux)
        .map(|(name, values)| AuxChannel {
            name: (*name).to_string(),
            values,
        })
        .collect();
    Ok(trace)
}
