//! PI settings from damping factor, aggressiveness multiplier and an IPDT model.
//!
//! The chain is `Ts = d/|Kp|`, `ωₙ = 4k/(ζ(Ts + d))`, then
//! `Kc = 2ζωₙ/Kp` and `Ti = 2ζ/ωₙ`. A direct `ωₙ` bypasses the first two steps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::control::PiGains;
use crate::plant::IpdtModel;
use crate::{Error, Result};

pub const DEFAULT_ZETA: f64 = 0.7;
pub const DEFAULT_K: f64 = 1.0;
/// Phase margin below which [`pi_gains`] emits a warning, in degrees.
pub const PHASE_MARGIN_WARN_DEG: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuningSpec {
    pub zeta: f64,
    pub k: f64,
    /// Direct natural-frequency specification; overrides the `k` rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_n: Option<f64>,
}

impl Default for TuningSpec {
    fn default() -> Self {
        Self {
            zeta: DEFAULT_ZETA,
            k: DEFAULT_K,
            omega_n: None,
        }
    }
}

impl TuningSpec {
    pub fn new(zeta: f64, k: f64) -> Result<Self> {
        let spec = Self { zeta, k, omega_n: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_omega_n(mut self, omega_n: f64) -> Result<Self> {
        self.omega_n = Some(omega_n);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0) || !self.zeta.is_finite() {
            return Err(Error::invalid(
                "zeta",
                format!("must be finite and > 0, got {}", self.zeta),
            ));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::invalid("k", format!("must be finite and > 0, got {}", self.k)));
        }
        if let Some(wn) = self.omega_n {
            if !(wn > 0.0) || !wn.is_finite() {
                return Err(Error::invalid("omega_n", format!("must be finite and > 0, got {wn}")));
            }
        }
        Ok(())
    }
}

/// Desired settling time `Ts = d/|Kp|`.
pub fn settling_time(model: &IpdtModel) -> Result<f64> {
    if model.kp == 0.0 || !model.kp.is_finite() {
        return Err(Error::invalid(
            "process gain",
            format!("must be finite and non-zero, got {}", model.kp),
        ));
    }
    Ok(model.d / model.kp.abs())
}

/// `ωₙ = 4k/(ζ(Ts + d))`, or the directly specified value.
pub fn natural_frequency(model: &IpdtModel, spec: &TuningSpec) -> Result<f64> {
    spec.validate()?;
    if let Some(wn) = spec.omega_n {
        return Ok(wn);
    }
    let ts = settling_time(model)?;
    let horizon = ts + model.d;
    let wn = 4.0 * spec.k / (spec.zeta * horizon);
    if !(horizon > 0.0) || !wn.is_finite() || !(wn > 0.0) {
        return Err(Error::invalid(
            "tuning spec",
            format!("Ts + d = {horizon} gives no usable natural frequency; specify omega_n directly"),
        ));
    }
    Ok(wn)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TuningWarning {
    LowPhaseMargin {
        phase_margin_deg: f64,
        threshold_deg: f64,
    },
    /// The loop gain never drops below one over the searched band.
    NoCrossover,
}

impl std::fmt::Display for TuningWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TuningWarning::LowPhaseMargin {
                phase_margin_deg,
                threshold_deg,
            } => write!(
                f,
                "phase margin {phase_margin_deg:.1} deg of the delay-included loop is below {threshold_deg} deg"
            ),
            TuningWarning::NoCrossover => write!(f, "no gain crossover found for the delay-included loop"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tuning {
    pub gains: PiGains,
    pub omega_n: f64,
    /// `Ts` when the natural frequency came from the settling-time rule.
    pub settling_time: Option<f64>,
    pub margin: Option<LoopMargin>,
    pub warnings: Vec<TuningWarning>,
}

/// PI settings `Kc = 2ζωₙ/Kp`, `Ti = 2ζ/ωₙ` with a phase-margin check on
/// the dead-time loop `Kc(1 + 1/(Ti·s))·Kp·e^{-ds}/s`.
pub fn pi_gains(model: &IpdtModel, spec: &TuningSpec) -> Result<Tuning> {
    model.validate()?;
    let omega_n = natural_frequency(model, spec)?;
    let gains = PiGains::new(2.0 * spec.zeta * omega_n / model.kp, 2.0 * spec.zeta / omega_n)?;
    let margin = loop_margin(model, &gains);
    let mut warnings = Vec::new();
    match margin {
        Some(m) if m.phase_margin_deg < PHASE_MARGIN_WARN_DEG => warnings.push(TuningWarning::LowPhaseMargin {
            phase_margin_deg: m.phase_margin_deg,
            threshold_deg: PHASE_MARGIN_WARN_DEG,
        }),
        Some(_) => {}
        None => warnings.push(TuningWarning::NoCrossover),
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Tuning {
        gains,
        omega_n,
        settling_time: spec.omega_n.is_none().then(|| settling_time(model)).transpose()?,
        margin,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopMargin {
    /// Gain crossover frequency, rad/s.
    pub crossover: f64,
    pub phase_margin_deg: f64,
}

/// Open-loop frequency response `L(jω)` of the PI regulator around the IPDT
/// process, without the delay factor.
fn rational_part(model: &IpdtModel, gains: &PiGains, w: f64) -> Complex64 {
    let s = Complex64::new(0.0, w);
    gains.kc * (1.0 + 1.0 / (gains.ti * s)) * model.kp / s
}

/// Gain crossover and phase margin found by a logarithmic frequency sweep
/// refined with bisection. `None` for positive-feedback sign or no crossover.
pub fn loop_margin(model: &IpdtModel, gains: &PiGains) -> Option<LoopMargin> {
    if gains.kc * model.kp <= 0.0 {
        return None;
    }
    let mag = |w: f64| rational_part(model, gains, w).norm();
    const DECADES: (f64, f64) = (-8.0, 6.0);
    const POINTS: usize = 1400;
    let at = |i: usize| 10f64.powf(DECADES.0 + (DECADES.1 - DECADES.0) * i as f64 / POINTS as f64);

    let mut bracket = None;
    for i in 0..POINTS {
        if mag(at(i)) >= 1.0 && mag(at(i + 1)) < 1.0 {
            bracket = Some((at(i), at(i + 1)));
            break;
        }
    }
    let (mut lo, mut hi) = bracket?;
    for _ in 0..100 {
        let mid = (lo * hi).sqrt();
        if mag(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let wc = (lo * hi).sqrt();
    // The rational part's phase lies in (-180°, -90°); the delay adds -ωd unwrapped.
    let phase = rational_part(model, gains, wc).arg() - wc * model.d;
    Some(LoopMargin {
        crossover: wc,
        phase_margin_deg: 180.0 + phase.to_degrees(),
    })
}
