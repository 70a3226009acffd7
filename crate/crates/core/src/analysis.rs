//! Step-response metrics and analytic second-order reference responses.
//!
//! Conventions: rise time is 10 % → 90 % of the response span, settling time
//! is the last exit from a ±2 % band around the final value (measured from the
//! step), overshoot is relative to the span, and the final value is the mean
//! of the trailing 10 % of samples.

use serde::{Serialize, Serializer};

use crate::sim::SimTrace;
use crate::{Error, Result};

pub const RISE_LOW: f64 = 0.1;
pub const RISE_HIGH: f64 = 0.9;
pub const SETTLING_BAND: f64 = 0.02;
pub const FINAL_WINDOW: f64 = 0.1;
/// A response whose excursion exceeds this multiple of the setpoint is diverged.
pub const DIVERGENCE_RATIO: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricFlag {
    /// The ±2 % band is left within the trailing 10 % of the trace.
    NotSettled,
    /// The trace is shorter than three settling times.
    ShortTrace,
    /// No setpoint change: metrics describe disturbance recovery.
    Regulation,
    Diverged,
}

impl MetricFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricFlag::NotSettled => "not_settled",
            MetricFlag::ShortTrace => "short_trace",
            MetricFlag::Regulation => "regulation",
            MetricFlag::Diverged => "diverged",
        }
    }
}

impl Serialize for MetricFlag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepMetrics {
    pub rise_time: Option<f64>,
    pub settling_time: Option<f64>,
    pub overshoot_pct: f64,
    pub iae: f64,
    pub final_value: f64,
    /// Time of the largest excursion, measured from the step.
    pub peak_time: Option<f64>,
    #[serde(skip)]
    pub flags: Vec<MetricFlag>,
}

impl StepMetrics {
    pub fn settled(&self) -> bool {
        !self.flags.contains(&MetricFlag::NotSettled) && !self.flags.contains(&MetricFlag::Diverged)
    }

    pub fn has(&self, flag: MetricFlag) -> bool {
        self.flags.contains(&flag)
    }
}

pub fn compute_metrics(trace: &SimTrace, step_time: f64) -> Result<StepMetrics> {
    metrics_from_samples(&trace.t, &trace.y, &trace.r, step_time)
}

/// Metrics of a sampled response `y(t)` to setpoint `r(t)` stepped at `step_time`.
pub fn metrics_from_samples(t: &[f64], y: &[f64], r: &[f64], step_time: f64) -> Result<StepMetrics> {
    if t.len() != y.len() || t.len() != r.len() {
        return Err(Error::invalid("trace", "t, y and r must have equal length"));
    }
    if t.len() < 2 {
        return Err(Error::invalid("trace", "need at least two samples"));
    }
    let start = t
        .iter()
        .position(|&tk| tk >= step_time - 1e-9 * step_time.abs().max(1.0))
        .ok_or_else(|| Error::invalid("step_time", format!("{step_time} lies after the trace end")))?;
    let r_before = if start > 0 { r[start - 1] } else { 0.0 };
    let (t, y, r) = (&t[start..], &y[start..], &r[start..]);
    let n = t.len();
    let t_end = *t.last().unwrap();

    let tail = ((n as f64 * FINAL_WINDOW).ceil() as usize).clamp(1, n);
    let final_value = y[n - tail..].iter().sum::<f64>() / tail as f64;
    let y0 = y[0];
    let r_change = r[n - 1] - r_before;
    // A setpoint already at its final value before the step leaves only
    // disturbance recovery to measure.
    let regulation = r_change == 0.0;
    let r_scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let iae = t
        .windows(2)
        .zip(r.windows(2).zip(y.windows(2)))
        .map(|(tw, (rw, yw))| 0.5 * (tw[1] - tw[0]) * ((rw[0] - yw[0]).abs() + (rw[1] - yw[1]).abs()))
        .sum();

    let mut flags = Vec::new();
    let excursion = y.iter().fold(0.0f64, |m, v| m.max((v - y0).abs()));
    if !excursion.is_finite() || (r_scale > 0.0 && excursion > DIVERGENCE_RATIO * r_scale) {
        flags.push(MetricFlag::Diverged);
    }

    let span = final_value - y0;

    let (rise_time, overshoot_pct, band, peak_time) = if regulation {
        flags.push(MetricFlag::Regulation);
        let (idx, peak) = y
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - final_value).abs()))
            .fold((0, 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
        (None, 0.0, SETTLING_BAND * peak, (peak > 0.0).then(|| t[idx] - t[0]))
    } else {
        if !(span.abs() > 1e-12 * final_value.abs().max(y0.abs())) {
            return Err(Error::DegenerateMetrics(format!(
                "setpoint changes by {r_change} but the response span is {span}"
            )));
        }
        let p = |v: f64| (v - y0) / span;
        let rise = crossing(t, y, p, RISE_LOW)
            .zip(crossing(t, y, p, RISE_HIGH))
            .map(|(lo, hi)| hi - lo);
        let (idx, peak) = y
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, p(v)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        (
            rise,
            ((peak - 1.0) * 100.0).max(0.0),
            SETTLING_BAND * span.abs(),
            Some(t[idx] - t[0]),
        )
    };

    let outside = |v: f64| (v - final_value).abs() > band;
    let settling_time = match (0..n).rev().find(|&i| outside(y[i])) {
        None => Some(0.0),
        Some(i) if i + 1 == n => None,
        Some(i) => {
            let s0 = y[i] - final_value;
            let s1 = y[i + 1] - final_value;
            let edge = s0.signum() * band;
            let frac = if s0 != s1 {
                ((s0 - edge) / (s0 - s1)).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let exit = t[i] + frac * (t[i + 1] - t[i]);
            if i >= n - tail {
                flags.push(MetricFlag::NotSettled);
            }
            Some(exit - t[0])
        }
    };
    if settling_time.is_none() && !flags.contains(&MetricFlag::NotSettled) {
        flags.push(MetricFlag::NotSettled);
    }
    if let Some(ts) = settling_time {
        if ts > 0.0 && (t_end - t[0]) < 3.0 * ts {
            flags.push(MetricFlag::ShortTrace);
        }
    }

    Ok(StepMetrics {
        rise_time,
        settling_time,
        overshoot_pct,
        iae,
        final_value,
        peak_time,
        flags,
    })
}

/// First time the normalised response `p(y)` reaches `level`, interpolated.
fn crossing(t: &[f64], y: &[f64], p: impl Fn(f64) -> f64, level: f64) -> Option<f64> {
    let mut prev = p(y[0]);
    if prev >= level {
        return Some(t[0]);
    }
    for i in 1..y.len() {
        let now = p(y[i]);
        if now >= level {
            let frac = (level - prev) / (now - prev);
            return Some(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
        prev = now;
    }
    None
}

/// Tolerance under which a damping factor counts as critical.
const CRITICAL_EPS: f64 = 1e-9;

/// Unit-step response of `ωₙ²/(s² + 2ζωₙs + ωₙ²)` at time `t`.
pub fn second_order_step(zeta: f64, omega_n: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let wn = omega_n;
    if (zeta - 1.0).abs() < CRITICAL_EPS {
        return 1.0 - (-wn * t).exp() * (1.0 + wn * t);
    }
    if zeta < 1.0 {
        let root = (1.0 - zeta * zeta).sqrt();
        let wd = wn * root;
        let decay = (-zeta * wn * t).exp();
        1.0 - decay * ((wd * t).cos() + zeta / root * (wd * t).sin())
    } else {
        let root = (zeta * zeta - 1.0).sqrt();
        let p1 = -wn * (zeta - root);
        let p2 = -wn * (zeta + root);
        1.0 + (p2 * (p1 * t).exp() - p1 * (p2 * t).exp()) / (p1 - p2)
    }
}

/// Response of `kp·s/(s² + 2ζωₙs + ωₙ²)` to a unit input-disturbance step,
/// i.e. `kp/(s² + 2ζωₙs + ωₙ²)` driven by an impulse.
pub fn regulation_response(zeta: f64, omega_n: f64, kp: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let wn = omega_n;
    if (zeta - 1.0).abs() < CRITICAL_EPS {
        return kp * t * (-wn * t).exp();
    }
    if zeta < 1.0 {
        let wd = wn * (1.0 - zeta * zeta).sqrt();
        kp / wd * (-zeta * wn * t).exp() * (wd * t).sin()
    } else {
        let root = (zeta * zeta - 1.0).sqrt();
        let p1 = -wn * (zeta - root);
        let p2 = -wn * (zeta + root);
        kp * ((p1 * t).exp() - (p2 * t).exp()) / (p1 - p2)
    }
}

/// Percent overshoot of the underdamped second-order step, `100·e^{-πζ/√(1-ζ²)}`.
pub fn second_order_overshoot_pct(zeta: f64) -> f64 {
    if zeta >= 1.0 {
        return 0.0;
    }
    100.0 * (-std::f64::consts::PI * zeta / (1.0 - zeta * zeta).sqrt()).exp()
}

/// Peak time `π/(ωₙ√(1-ζ²))` of the underdamped second-order step.
pub fn second_order_peak_time(zeta: f64, omega_n: f64) -> Option<f64> {
    (zeta < 1.0).then(|| std::f64::consts::PI / (omega_n * (1.0 - zeta * zeta).sqrt()))
}
