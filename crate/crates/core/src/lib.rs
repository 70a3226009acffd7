//! Simulation and tuning toolkit for integrating-plus-dead-time (IPDT) processes.
//!
//! The crate is organised around a feedforward-I plus feedback-PI controller
//! structure for plants of the form `G(s) = Kp·e^{-ds}/s`:
//!
//! - [`sim`]: fixed-step simulation engine (time grid, delay line, RK4, closed loop).
//! - [`plant`]: the IPDT process and a reduced nonlinear AUV depth-plane model.
//! - [`control`]: feedforward I, feedback PI, the composite I+PI law and a
//!   standard-form PID for comparison runs, with actuator limiting.
//! - [`tuning`]: PI gains from damping factor, aggressiveness multiplier and the
//!   process model, plus a phase-margin diagnostic.
//! - [`identification`]: step-test fitting of an IPDT model.
//! - [`analysis`]: step-response metrics and analytic second-order responses.
//! - [`scenario`]: TOML scenarios, bundled experiments, CSV/JSON/SVG output.
//!
//! ```
//! use ipdt::plant::IpdtModel;
//! use ipdt::tuning::{pi_gains, TuningSpec};
//!
//! let model = IpdtModel::new(0.0506, 6.0).unwrap();
//! let tuned = pi_gains(&model, &TuningSpec::new(0.7, 1.0).unwrap()).unwrap();
//! assert!((tuned.omega_n - 0.04587).abs() < 1e-4);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod control;
pub mod error;
pub mod identification;
pub mod plant;
pub mod scenario;
pub mod sim;
pub mod tuning;

pub use error::{Error, Result};
