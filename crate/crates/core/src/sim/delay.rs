use std::collections::VecDeque;

use crate::{Error, Result};

/// Relative tolerance (in units of the local sample spacing) under which a
/// query time is treated as landing exactly on a stored sample.
const SNAP: f64 = 1e-9;

/// Transport delay realised as a FIFO of timestamped samples.
///
/// `push_pop(t, u)` stores `u` at `t` and returns the input seen `delay`
/// seconds earlier, linearly interpolated between stored samples. Before any
/// input is that old the line emits `fill`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayLine {
    delay: f64,
    fill: f64,
    buf: VecDeque<(f64, f64)>,
}

impl DelayLine {
    pub fn new(delay: f64, fill: f64) -> Result<Self> {
        if !(delay >= 0.0) || !delay.is_finite() {
            return Err(Error::invalid("delay", format!("must be finite and >= 0, got {delay}")));
        }
        Ok(Self {
            delay,
            fill,
            buf: VecDeque::new(),
        })
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// Number of samples currently retained.
    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn reset(&mut self) {
        self.buf.clear();
    }

    pub fn push_pop(&mut self, t: f64, u: f64) -> Result<f64> {
        if let Some(&(prev, _)) = self.buf.back() {
            if !(t > prev) {
                return Err(Error::NonMonotoneTime { t, prev });
            }
        }
        self.buf.push_back((t, u));

        let target = t - self.delay;
        // Keep the newest sample at or before `target` at the front.
        while self.buf.len() >= 2 {
            let (t0, _) = self.buf[0];
            let (t1, _) = self.buf[1];
            if t1 - target <= SNAP * (t1 - t0) {
                self.buf.pop_front();
            } else {
                break;
            }
        }

        let (t0, v0) = self.buf[0];
        if self.buf.len() == 1 {
            // Only the newest sample is left, which happens when delay is zero.
            return Ok(if target < t0 - SNAP * t0.abs().max(1.0) {
                self.fill
            } else {
                v0
            });
        }
        let (t1, v1) = self.buf[1];
        let pos = (target - t0) / (t1 - t0);
        if pos < -SNAP {
            return Ok(self.fill);
        }
        if pos <= SNAP {
            return Ok(v0);
        }
        Ok(v0 + pos * (v1 - v0))
    }
}
