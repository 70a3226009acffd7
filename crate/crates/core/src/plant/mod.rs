//! Process models driven by the simulation loop.

mod auv;
mod ipdt;

pub use auv::{auv_step, AuvCoefficients, AuvDepthModel, AuvDepthState, AuvPlant, REFERENCE_AUV_COEFFICIENTS};
pub use ipdt::{ipdt_step, IpdtModel, IpdtPlant};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Magnitude and slew constraints of a final control element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActuatorLimits {
    pub max_deflection: f64,
    #[serde(default = "unlimited")]
    pub max_rate: f64,
}

fn unlimited() -> f64 {
    f64::INFINITY
}

impl ActuatorLimits {
    pub fn new(max_deflection: f64, max_rate: f64) -> Result<Self> {
        let limits = Self {
            max_deflection,
            max_rate,
        };
        limits.validate()?;
        Ok(limits)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_deflection > 0.0) {
            return Err(Error::invalid(
                "max_deflection",
                format!("must be > 0, got {}", self.max_deflection),
            ));
        }
        if !(self.max_rate > 0.0) {
            return Err(Error::invalid(
                "max_rate",
                format!("must be > 0, got {}", self.max_rate),
            ));
        }
        Ok(())
    }

    /// Rate-limit `command` relative to `previous` over `h`, then clamp.
    pub fn apply(&self, previous: f64, command: f64, h: f64) -> f64 {
        let slew = self.max_rate * h;
        let limited = if slew.is_finite() {
            command.clamp(previous - slew, previous + slew)
        } else {
            command
        };
        limited.clamp(-self.max_deflection, self.max_deflection)
    }

    pub fn contains(&self, value: f64) -> bool {
        value.abs() <= self.max_deflection
    }
}
