use serde::{Deserialize, Serialize};

use crate::control::DEFAULT_DERIV_FILTER_N;
use crate::plant::{ActuatorLimits, IpdtModel};
use crate::sim::Signal;
use crate::tuning::{DEFAULT_K, DEFAULT_ZETA};

/// Name under which the reference AUV coefficient file is bundled.
pub const REFERENCE_COEFFICIENTS: &str = "auv-reduced.toml";

/// One scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub plant: PlantConfig,
    pub controller: ControllerConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub setpoint: Signal,
    #[serde(default)]
    pub disturbance: Signal,
    /// Actuator constraints applied by the controller. AUV plants fall back
    /// to the limits in their coefficient file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actuator: Option<ActuatorLimits>,
    /// Time the metrics are measured from; defaults to the first signal onset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PlantConfig {
    Ipdt {
        kp: f64,
        d: f64,
    },
    Auv {
        #[serde(default = "reference_coefficients")]
        coefficients: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_surge: Option<f64>,
    },
}

fn reference_coefficients() -> String {
    REFERENCE_COEFFICIENTS.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ControllerConfig {
    /// Feedforward I + feedback PI tuned from `zeta`, `k` (or `omega_n`).
    Ipi {
        #[serde(default = "default_zeta")]
        zeta: f64,
        #[serde(default = "default_k")]
        k: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_n: Option<f64>,
        /// Process model used for tuning. Defaults to the IPDT plant.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        model: Option<IpdtModel>,
        /// Obtain the tuning model from an open-loop step test instead.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        identify: Option<IdentifyConfig>,
    },
    /// Standard-form PID with explicit gains.
    Pid {
        kc: f64,
        ti: f64,
        #[serde(default)]
        td: f64,
        #[serde(default = "default_filter_n")]
        deriv_filter_n: f64,
    },
    /// No controller; the plant is driven by the disturbance input only.
    Open,
}

fn default_zeta() -> f64 {
    DEFAULT_ZETA
}
fn default_k() -> f64 {
    DEFAULT_K
}
fn default_filter_n() -> f64 {
    DEFAULT_DERIV_FILTER_N
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifyConfig {
    pub step_amplitude: f64,
    #[serde(default)]
    pub step_time: f64,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub horizon: f64,
    /// Integration step; defaults to `min(d/20, Ti/50, 0.05)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Dotted path of the numeric setting to vary, e.g. `controller.zeta`.
    pub param: String,
    pub values: Vec<f64>,
}
