//! Controller blocks: feedforward I, feedback PI, the composite I+PI law and a
//! standard-form PID with derivative on a filtered measurement.
//!
//! All integrators use trapezoidal accumulation over successive samples. The
//! first call after construction only records its input.

use serde::{Deserialize, Serialize};

use crate::plant::ActuatorLimits;
use crate::sim::{ControlLaw, ControlOutput};
use crate::{Error, Result};

/// Gains shared by the feedforward I and feedback PI blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiGains {
    pub kc: f64,
    /// Integral time, seconds.
    pub ti: f64,
}

impl PiGains {
    pub fn new(kc: f64, ti: f64) -> Result<Self> {
        if !kc.is_finite() {
            return Err(Error::invalid("kc", format!("must be finite, got {kc}")));
        }
        if !(ti > 0.0) || !ti.is_finite() {
            return Err(Error::invalid("ti", format!("must be finite and > 0, got {ti}")));
        }
        Ok(Self { kc, ti })
    }

    /// Integral gain `kc/ti`, common to both blocks.
    pub fn ki(&self) -> f64 {
        self.kc / self.ti
    }
}

/// Standard-form PID: `kc·[e + ∫e/ti − td·d(y_f)/dt]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidGains {
    pub kc: f64,
    pub ti: f64,
    pub td: f64,
    /// Derivative filter divisor; the filter time constant is `td / n`.
    pub deriv_filter_n: f64,
}

pub const DEFAULT_DERIV_FILTER_N: f64 = 10.0;

impl PidGains {
    pub fn new(kc: f64, ti: f64, td: f64, deriv_filter_n: f64) -> Result<Self> {
        PiGains::new(kc, ti)?;
        if !(td >= 0.0) || !td.is_finite() {
            return Err(Error::invalid("td", format!("must be finite and >= 0, got {td}")));
        }
        if td > 0.0 && !(5.0..=20.0).contains(&deriv_filter_n) {
            return Err(Error::invalid(
                "deriv_filter_n",
                format!("must lie in [5, 20] when td > 0, got {deriv_filter_n}"),
            ));
        }
        Ok(Self {
            kc,
            ti,
            td,
            deriv_filter_n,
        })
    }
}

/// Integrator accumulators and sample memory of one controller instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ControllerState {
    /// `∫r dt` of the feedforward block.
    pub integ_ff: f64,
    /// `∫e dt` of the feedback block.
    pub integ_fb: f64,
    /// Last measurement, for the derivative term.
    pub prev_meas: Option<f64>,
    /// Last applied control.
    pub u_last: f64,
    prev_r: Option<f64>,
    prev_e: Option<f64>,
    deriv: f64,
    // Integrator increments of the current sample, kept so the actuator
    // block can undo them while saturated.
    pending_ff: f64,
    pending_fb: f64,
    pending_u: f64,
}

impl ControllerState {
    pub fn new() -> Self {
        Self::default()
    }
}

fn trapezoid(prev: Option<f64>, now: f64, h: f64) -> f64 {
    prev.map_or(0.0, |p| 0.5 * h * (p + now))
}

/// Feedforward I block, `u = (kc/ti)·∫r dt`.
pub fn i_feedforward(state: &mut ControllerState, gains: &PiGains, r: f64, h: f64) -> f64 {
    let inc = trapezoid(state.prev_r, r, h);
    state.prev_r = Some(r);
    state.integ_ff += inc;
    state.pending_ff = inc;
    state.pending_u += gains.ki() * inc;
    gains.ki() * state.integ_ff
}

/// Feedback PI block, `u = kc·e + (kc/ti)·∫e dt`.
pub fn pi_feedback(state: &mut ControllerState, gains: &PiGains, e: f64, h: f64) -> f64 {
    let inc = trapezoid(state.prev_e, e, h);
    state.prev_e = Some(e);
    state.integ_fb += inc;
    state.pending_fb = inc;
    state.pending_u += gains.ki() * inc;
    gains.kc * e + gains.ki() * state.integ_fb
}

/// Composite I+PI law: feedforward I on the setpoint plus the PI regulator
/// acting on `-y`. Both blocks read the same gains.
pub fn ipi_controller(state: &mut ControllerState, gains: &PiGains, r: f64, y: f64, h: f64) -> ControlOutput {
    state.pending_u = 0.0;
    let u_ff = i_feedforward(state, gains, r, h);
    let u_fb = pi_feedback(state, gains, -y, h);
    ControlOutput {
        u_ff,
        u_fb,
        u_applied: u_ff + u_fb,
    }
}

/// Standard-form PID on `e = r - y` with the derivative acting on the
/// filtered measurement only, so setpoint steps produce no derivative kick.
pub fn pid_controller(state: &mut ControllerState, gains: &PidGains, r: f64, y: f64, h: f64) -> f64 {
    state.pending_u = 0.0;
    state.pending_ff = 0.0;
    let e = r - y;
    let inc = trapezoid(state.prev_e, e, h);
    state.prev_e = Some(e);
    state.integ_fb += inc;
    state.pending_fb = inc;
    state.pending_u = gains.kc / gains.ti * inc;

    if gains.td > 0.0 {
        if let Some(prev) = state.prev_meas {
            // Backward-Euler discretisation of -kc·td·s/(1 + s·td/n) acting on y.
            let tf = gains.td / gains.deriv_filter_n;
            state.deriv = tf / (tf + h) * state.deriv - gains.kc * gains.td / (tf + h) * (y - prev);
        }
    } else {
        state.deriv = 0.0;
    }
    state.prev_meas = Some(y);

    gains.kc * (e + state.integ_fb / gains.ti) + state.deriv
}

/// Rate-limit then clamp `u`. While the command is limited, the integrator
/// increments of this sample are undone if they push further into the limit.
pub fn apply_actuator(u: f64, limits: &ActuatorLimits, state: &mut ControllerState, h: f64) -> f64 {
    let applied = limits.apply(state.u_last, u, h);
    if applied != u {
        let direction = (u - applied).signum();
        if state.pending_u * direction > 0.0 {
            state.integ_ff -= state.pending_ff;
            state.integ_fb -= state.pending_fb;
        }
    }
    state.pending_ff = 0.0;
    state.pending_fb = 0.0;
    state.pending_u = 0.0;
    state.u_last = applied;
    applied
}

/// Which control law a [`Controller`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    Ipi(PiGains),
    Pid(PidGains),
    /// Zero output; for open-loop runs driven by the disturbance input.
    Open,
}

/// A control law, optional actuator limits and the law's state.
#[derive(Debug, Clone)]
pub struct Controller {
    law: Law,
    limits: Option<ActuatorLimits>,
    state: ControllerState,
}

impl Controller {
    pub fn new(law: Law) -> Self {
        Self {
            law,
            limits: None,
            state: ControllerState::new(),
        }
    }

    pub fn ipi(gains: PiGains) -> Self {
        Self::new(Law::Ipi(gains))
    }

    pub fn pid(gains: PidGains) -> Self {
        Self::new(Law::Pid(gains))
    }

    pub fn open_loop() -> Self {
        Self::new(Law::Open)
    }

    pub fn with_limits(mut self, limits: ActuatorLimits) -> Self {
        self.limits = Some(limits);
        self
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn state(&self) -> &ControllerState {
        &self.state
    }
}

impl ControlLaw for Controller {
    fn update(&mut self, r: f64, y: f64, h: f64) -> ControlOutput {
        let raw = match &self.law {
            Law::Ipi(g) => ipi_controller(&mut self.state, g, r, y, h),
            Law::Pid(g) => {
                let u = pid_controller(&mut self.state, g, r, y, h);
                ControlOutput {
                    u_ff: 0.0,
                    u_fb: u,
                    u_applied: u,
                }
            }
            Law::Open => ControlOutput::default(),
        };
        let u_applied = match &self.limits {
            Some(limits) => apply_actuator(raw.u_applied, limits, &mut self.state, h),
            None => {
                self.state.u_last = raw.u_applied;
                raw.u_applied
            }
        };
        ControlOutput { u_applied, ..raw }
    }
}
