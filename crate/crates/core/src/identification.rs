//! Step-test identification of an IPDT model.
//!
//! A straight line is fitted by least squares to the late part of an
//! open-loop step response. Its slope divided by the step amplitude is the
//! integrator gain; the time at which the line crosses the pre-step output
//! level, less the step time, is the dead time.

use serde::Serialize;

use crate::plant::IpdtModel;
use crate::sim::SimTrace;
use crate::{Error, Result};

/// Fraction of the post-step record used for the slope fit.
pub const FIT_WINDOW: f64 = 0.4;
/// Fraction of the post-step record checked for a steady ramp.
pub const RAMP_CHECK_WINDOW: f64 = 0.25;
/// Largest relative slope change tolerated inside the ramp-check window.
pub const RAMP_TOLERANCE: f64 = 0.05;
/// Deviation from the fitted line, relative to the response span, under
/// which a sample counts as part of the linear phase.
const LINEAR_PHASE_BAND: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct StepTestRecord {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub step_amplitude: f64,
    pub step_time: f64,
}

impl StepTestRecord {
    pub fn new(t: Vec<f64>, y: Vec<f64>, step_amplitude: f64, step_time: f64) -> Result<Self> {
        let rec = Self {
            t,
            y,
            step_amplitude,
            step_time,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn from_trace(trace: &SimTrace, step_amplitude: f64, step_time: f64) -> Result<Self> {
        Self::new(trace.t.clone(), trace.y.clone(), step_amplitude, step_time)
    }

    fn validate(&self) -> Result<()> {
        if self.step_amplitude == 0.0 || !self.step_amplitude.is_finite() {
            return Err(Error::invalid(
                "step amplitude",
                format!("must be finite and non-zero, got {}", self.step_amplitude),
            ));
        }
        if self.t.len() != self.y.len() {
            return Err(Error::invalid("step test", "t and y must have equal length"));
        }
        if self.t.len() < 8 {
            return Err(Error::invalid("step test", "need at least 8 samples"));
        }
        let h = self.t[1] - self.t[0];
        if !(h > 0.0) {
            return Err(Error::invalid("step test", "time must be increasing"));
        }
        let uniform = self
            .t
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-6 * h.max(w[1].abs() * 1e-9));
        if !uniform {
            return Err(Error::invalid("step test", "samples must be uniformly spaced"));
        }
        if self.y.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("step test", "output contains non-finite samples"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitDiagnostics {
    /// Fitted output slope, output units per second.
    pub slope: f64,
    /// Time at which the fitted line crosses the pre-step output level.
    pub intercept_time: f64,
    /// RMS deviation of the fit window from the fitted line.
    pub residual_rms: f64,
    /// Share of the post-step record lying on the fitted line.
    pub linear_phase_fraction: f64,
    /// Relative slope change across the ramp-check window.
    pub slope_variation: f64,
    pub window_start: f64,
    /// The intercept fell before the step and the dead time was clamped to zero.
    pub dead_time_clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identification {
    pub model: IpdtModel,
    pub diagnostics: FitDiagnostics,
}

struct Line {
    intercept: f64,
    slope: f64,
}

fn least_squares(t: &[f64], y: &[f64]) -> Line {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (sxy, sxx) = t.iter().zip(y).fold((0.0, 0.0), |(sxy, sxx), (&ti, &yi)| {
        (sxy + (ti - tm) * (yi - ym), sxx + (ti - tm) * (ti - tm))
    });
    let slope = sxy / sxx;
    Line {
        intercept: ym - slope * tm,
        slope,
    }
}

pub fn identify_ipdt(rec: &StepTestRecord) -> Result<Identification> {
    rec.validate()?;
    let start = rec
        .t
        .iter()
        .position(|&t| t >= rec.step_time - 1e-9 * rec.step_time.abs().max(1.0))
        .ok_or_else(|| Error::invalid("step time", format!("{} lies after the record", rec.step_time)))?;
    let t = &rec.t[start..];
    let y = &rec.y[start..];
    let n = t.len();
    if n < 8 {
        return Err(Error::NotIntegrating("too few samples after the step".into()));
    }
    let y0 = y[0];

    let tail_from = |fraction: f64| n - ((n as f64 * fraction).round() as usize).clamp(4, n);

    // Ramp check: slopes over the two halves of the final quarter must agree.
    let check = tail_from(RAMP_CHECK_WINDOW);
    let mid = check + (n - check) / 2;
    let s1 = least_squares(&t[check..mid], &y[check..mid]).slope;
    let s2 = least_squares(&t[mid..], &y[mid..]).slope;
    let scale = s1.abs().max(s2.abs());
    let span = y.iter().fold(0.0f64, |m, v| m.max((v - y0).abs()));
    let duration = t[n - 1] - t[0];
    if !(scale > 0.0) || scale * duration <= 1e-9 * span.max(f64::MIN_POSITIVE) {
        return Err(Error::NotIntegrating("the response has no terminal ramp".into()));
    }
    let slope_variation = (s1 - s2).abs() / scale;
    if !(slope_variation < RAMP_TOLERANCE) {
        return Err(Error::NotIntegrating(format!(
            "terminal slope varies by {:.1} % across the last quarter",
            100.0 * slope_variation
        )));
    }

    let fit_from = tail_from(FIT_WINDOW);
    let line = least_squares(&t[fit_from..], &y[fit_from..]);
    let residual_rms = (t[fit_from..]
        .iter()
        .zip(&y[fit_from..])
        .map(|(&ti, &yi)| (yi - line.intercept - line.slope * ti).powi(2))
        .sum::<f64>()
        / (n - fit_from) as f64)
        .sqrt();
    let on_line = t
        .iter()
        .zip(y)
        .filter(|(&ti, &yi)| (yi - line.intercept - line.slope * ti).abs() <= LINEAR_PHASE_BAND * span)
        .count();

    let intercept_time = (y0 - line.intercept) / line.slope;
    let mut dead_time = intercept_time - rec.step_time;
    let dead_time_clamped = dead_time < 0.0;
    if dead_time_clamped {
        log::warn!(
            "step-test intercept {intercept_time} precedes the step at {}; dead time clamped to 0",
            rec.step_time
        );
        dead_time = 0.0;
    }

    Ok(Identification {
        model: IpdtModel::new(line.slope / rec.step_amplitude, dead_time)?,
        diagnostics: FitDiagnostics {
            slope: line.slope,
            intercept_time,
            residual_rms,
            linear_phase_fraction: on_line as f64 / n as f64,
            slope_variation,
            window_start: t[fit_from],
            dead_time_clamped,
        },
    })
}
