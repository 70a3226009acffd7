use serde::{Deserialize, Serialize};

use crate::sim::{integrate_step, DelayLine, Plant};
use crate::{Error, Result};

/// Integrating process with dead time, `G(s) = kp·e^{-d·s}/s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IpdtModel {
    /// Integrator gain: output units per input unit per second.
    pub kp: f64,
    /// Dead time in seconds.
    pub d: f64,
}

impl IpdtModel {
    pub fn new(kp: f64, d: f64) -> Result<Self> {
        let m = Self { kp, d };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kp == 0.0 || !self.kp.is_finite() {
            return Err(Error::invalid(
                "process gain",
                format!("must be finite and non-zero, got {}", self.kp),
            ));
        }
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return Err(Error::invalid(
                "dead time",
                format!("must be finite and >= 0, got {}", self.d),
            ));
        }
        Ok(())
    }
}

/// Advance the IPDT output `y` over `[t, t+h]`.
///
/// `u` is pushed into the delay line and the delayed value is held over the
/// step, so `y` grows by `kp·u(t-d)·h`.
pub fn ipdt_step(model: &IpdtModel, line: &mut DelayLine, y: f64, u: f64, t: f64, h: f64) -> Result<f64> {
    let delayed = line.push_pop(t, u)?;
    let kp = model.kp;
    let next = integrate_step(|_, _| [kp * delayed], &[y], t, h)?;
    Ok(next[0])
}

/// Stateful IPDT process for use in [`crate::sim::run_loop`].
#[derive(Debug, Clone)]
pub struct IpdtPlant {
    model: IpdtModel,
    line: DelayLine,
    y: f64,
}

impl IpdtPlant {
    pub fn new(model: IpdtModel) -> Result<Self> {
        model.validate()?;
        Ok(Self {
            line: DelayLine::new(model.d, 0.0)?,
            model,
            y: 0.0,
        })
    }

    pub fn with_initial_output(mut self, y0: f64) -> Self {
        self.y = y0;
        self
    }

    pub fn model(&self) -> &IpdtModel {
        &self.model
    }
}

impl Plant for IpdtPlant {
    fn output(&self) -> f64 {
        self.y
    }

    fn advance(&mut self, t: f64, h: f64, input: f64) -> Result<()> {
        self.y = ipdt_step(&self.model, &mut self.line, self.y, input, t, h)?;
        Ok(())
    }
}
