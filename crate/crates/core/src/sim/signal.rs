use serde::{Deserialize, Serialize};

/// Scalar time signal used for setpoints and input disturbances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Signal {
    Constant {
        value: f64,
    },
    /// `0` before `start_time`, `amplitude` from `start_time` on.
    Step {
        amplitude: f64,
        #[serde(default)]
        start_time: f64,
    },
    /// `amplitude · (t - start_time)` from `start_time` on.
    Ramp {
        amplitude: f64,
        #[serde(default)]
        start_time: f64,
    },
    Sum {
        terms: Vec<Signal>,
    },
}

impl Default for Signal {
    fn default() -> Self {
        Signal::zero()
    }
}

impl Signal {
    pub fn zero() -> Self {
        Signal::Constant { value: 0.0 }
    }

    pub fn step(amplitude: f64, start_time: f64) -> Self {
        Signal::Step { amplitude, start_time }
    }

    pub fn ramp(amplitude: f64, start_time: f64) -> Self {
        Signal::Ramp { amplitude, start_time }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Signal::Constant { value } => *value,
            Signal::Step { amplitude, start_time } => {
                if t >= *start_time {
                    *amplitude
                } else {
                    0.0
                }
            }
            Signal::Ramp { amplitude, start_time } => {
                if t >= *start_time {
                    amplitude * (t - start_time)
                } else {
                    0.0
                }
            }
            Signal::Sum { terms } => terms.iter().map(|s| s.value(t)).sum(),
        }
    }

    /// Time of the first step or ramp onset, if any.
    pub fn onset(&self) -> Option<f64> {
        match self {
            Signal::Constant { .. } => None,
            Signal::Step { start_time, .. } | Signal::Ramp { start_time, .. } => Some(*start_time),
            Signal::Sum { terms } => terms.iter().filter_map(Signal::onset).min_by(|a, b| a.total_cmp(b)),
        }
    }

    /// True when the signal is identically zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Signal::Constant { value } => *value == 0.0,
            Signal::Step { amplitude, .. } | Signal::Ramp { amplitude, .. } => *amplitude == 0.0,
            Signal::Sum { terms } => terms.iter().all(Signal::is_zero),
        }
    }
}
