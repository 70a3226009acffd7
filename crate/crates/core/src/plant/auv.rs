use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ActuatorLimits;
use crate::sim::{integrate_step, Plant};
use crate::{Error, Result};

/// Coefficient file shipped with the crate for the reference vehicle.
pub const REFERENCE_AUV_COEFFICIENTS: &str = include_str!("../../scenarios/auv-reduced.toml");

/// Hydrodynamic coefficients of the w–q subsystem.
///
/// Terms tagged `z_*` act in heave and are multiplied by the surge speed
/// (`u·w`, `u·q`) or its square (`u²·δ`); `m_*` are the pitch counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuvCoefficients {
    pub mass: f64,
    pub m_heave: f64,
    pub i_pitch: f64,
    pub z_w: f64,
    pub z_q: f64,
    /// Quadratic cross-flow drag on heave.
    pub z_ww: f64,
    pub z_delta: f64,
    pub m_w: f64,
    pub m_q: f64,
    pub m_delta: f64,
    pub bg_weight: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AuvDepthState {
    /// Heave velocity, m/s.
    pub w: f64,
    /// Pitch rate, rad/s.
    pub q: f64,
    /// Pitch angle, rad.
    pub theta: f64,
    /// Depth, m, positive down.
    pub z: f64,
}

impl AuvDepthState {
    fn to_array(self) -> [f64; 4] {
        [self.w, self.q, self.theta, self.z]
    }

    fn from_array(x: [f64; 4]) -> Self {
        Self {
            w: x[0],
            q: x[1],
            theta: x[2],
            z: x[3],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientFile {
    mass: f64,
    m_heave: f64,
    i_pitch: f64,
    z_w: f64,
    z_q: f64,
    z_ww: f64,
    z_delta: f64,
    m_w: f64,
    m_q: f64,
    m_delta: f64,
    bg_weight: f64,
    #[serde(default = "default_surge")]
    u_surge: f64,
    #[serde(default = "default_max_deflection")]
    max_deflection: f64,
    #[serde(default = "default_max_rate")]
    max_rate: f64,
}

fn default_surge() -> f64 {
    0.8
}
fn default_max_deflection() -> f64 {
    0.4
}
fn default_max_rate() -> f64 {
    0.5
}

/// Nonlinear depth-plane vehicle at constant surge speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuvDepthModel {
    pub u_surge: f64,
    pub coeffs: AuvCoefficients,
    pub actuator: ActuatorLimits,
}

impl AuvDepthModel {
    pub fn new(u_surge: f64, coeffs: AuvCoefficients, actuator: ActuatorLimits) -> Result<Self> {
        let model = Self {
            u_surge,
            coeffs,
            actuator,
        };
        model.validate()?;
        Ok(model)
    }

    /// Reference vehicle from the bundled coefficient file.
    pub fn reference() -> Self {
        Self::from_toml_str(REFERENCE_AUV_COEFFICIENTS).expect("bundled AUV coefficients are valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: CoefficientFile =
            toml::from_str(text).map_err(|e| Error::config("auv coefficients", e.to_string()))?;
        let actuator = ActuatorLimits {
            max_deflection: file.max_deflection,
            max_rate: file.max_rate,
        };
        let coeffs = AuvCoefficients {
            mass: file.mass,
            m_heave: file.m_heave,
            i_pitch: file.i_pitch,
            z_w: file.z_w,
            z_q: file.z_q,
            z_ww: file.z_ww,
            z_delta: file.z_delta,
            m_w: file.m_w,
            m_q: file.m_q,
            m_delta: file.m_delta,
            bg_weight: file.bg_weight,
        };
        Self::new(file.u_surge, coeffs, actuator)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config { reason, .. } => Error::config(path.display().to_string(), reason),
            other => other,
        })
    }

    pub fn with_surge(mut self, u_surge: f64) -> Result<Self> {
        self.u_surge = u_surge;
        self.validate()?;
        Ok(self)
    }

    pub fn with_actuator(mut self, actuator: ActuatorLimits) -> Result<Self> {
        self.actuator = actuator;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let c = &self.coeffs;
        let all = [
            c.mass,
            c.m_heave,
            c.i_pitch,
            c.z_w,
            c.z_q,
            c.z_ww,
            c.z_delta,
            c.m_w,
            c.m_q,
            c.m_delta,
            c.bg_weight,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("auv coefficients", "all coefficients must be finite"));
        }
        if !(c.m_heave > 0.0) || !(c.i_pitch > 0.0) {
            return Err(Error::invalid("auv coefficients", "m_heave and i_pitch must be > 0"));
        }
        if !(self.u_surge > 0.0) || !self.u_surge.is_finite() {
            return Err(Error::invalid(
                "u_surge",
                format!("must be finite and > 0, got {}", self.u_surge),
            ));
        }
        self.actuator.validate()?;
        self.check_unforced_decay()
    }

    /// Unforced w and q must die out from a small perturbation.
    fn check_unforced_decay(&self) -> Result<()> {
        let h = 0.05;
        let horizon = 600.0;
        let w0 = 0.1;
        let q0 = 0.01;
        let mut x = [w0, q0, 0.0, 0.0];
        for k in 0..(horizon / h) as usize {
            let t = k as f64 * h;
            x = integrate_step(|_, s| self.derivative(s, 0.0), &x, t, h)?;
            if x[2].abs() >= FRAC_PI_2 {
                break;
            }
        }
        if x[0].abs() > 1e-3 * w0 || x[1].abs() > 1e-3 * q0 || x[2].abs() >= FRAC_PI_2 {
            return Err(Error::invalid(
                "auv coefficients",
                format!(
                    "unforced w-q subsystem does not decay at u_surge = {} (w = {:.3e}, q = {:.3e} after {horizon} s)",
                    self.u_surge, x[0], x[1]
                ),
            ));
        }
        Ok(())
    }

    fn derivative(&self, x: &[f64; 4], delta: f64) -> [f64; 4] {
        let c = &self.coeffs;
        let u = self.u_surge;
        let [w, q, theta, _] = *x;
        let heave = c.mass * u * q + c.z_w * u * w + c.z_q * u * q - c.z_ww * w * w.abs() + c.z_delta * u * u * delta;
        let pitch = c.m_w * u * w + c.m_q * u * q - c.bg_weight * theta.sin() + c.m_delta * u * u * delta;
        [
            heave / c.m_heave,
            pitch / c.i_pitch,
            q,
            -u * theta.sin() + w * theta.cos(),
        ]
    }
}

/// Apply actuator limits to `stern_cmd` and integrate one step.
///
/// Returns the new state and the stern-plane deflection actually applied.
pub fn auv_step(
    model: &AuvDepthModel,
    state: &AuvDepthState,
    applied_prev: f64,
    stern_cmd: f64,
    t: f64,
    h: f64,
) -> Result<(AuvDepthState, f64)> {
    if !stern_cmd.is_finite() {
        return Err(Error::NumericFault {
            t,
            detail: format!("stern command {stern_cmd}"),
        });
    }
    let delta = model.actuator.apply(applied_prev, stern_cmd, h);
    let x = integrate_step(|_, s| model.derivative(s, delta), &state.to_array(), t, h)?;
    let next = AuvDepthState::from_array(x);
    if next.theta.abs() >= FRAC_PI_2 {
        return Err(Error::ModelValidity {
            t: t + h,
            theta: next.theta.abs(),
        });
    }
    Ok((next, delta))
}

/// Stateful AUV plant whose output is depth.
#[derive(Debug, Clone)]
pub struct AuvPlant {
    model: AuvDepthModel,
    state: AuvDepthState,
    deflection: f64,
}

impl AuvPlant {
    pub fn new(model: AuvDepthModel) -> Self {
        Self {
            model,
            state: AuvDepthState::default(),
            deflection: 0.0,
        }
    }

    pub fn state(&self) -> &AuvDepthState {
        &self.state
    }

    pub fn deflection(&self) -> f64 {
        self.deflection
    }

    pub fn model(&self) -> &AuvDepthModel {
        &self.model
    }
}

impl Plant for AuvPlant {
    fn output(&self) -> f64 {
        self.state.z
    }

    fn advance(&mut self, t: f64, h: f64, input: f64) -> Result<()> {
        let (next, delta) = auv_step(&self.model, &self.state, self.deflection, input, t, h)?;
        self.state = next;
        self.deflection = delta;
        Ok(())
    }

    fn aux_names(&self) -> &'static [&'static str] {
        &["w", "q", "theta", "stern"]
    }

    fn aux_values(&self) -> Vec<f64> {
        vec![self.state.w, self.state.q, self.state.theta, self.deflection]
    }
}
