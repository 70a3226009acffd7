mod common;

use common::{benchmark, ipi_loop, percent_overshoot};
use ipdt::analysis::compute_metrics;
use ipdt::plant::IpdtModel;
use ipdt::sim::Signal;
use ipdt::tuning::{loop_margin, pi_gains, TuningSpec, TuningWarning};
use proptest::prelude::*;

fn overshoot(model: IpdtModel, spec: TuningSpec, horizon: f64) -> f64 {
    let tuned = pi_gains(&model, &spec).unwrap();
    let tr = ipi_loop(
        model,
        tuned.gains,
        Signal::step(1.0, 0.0),
        Signal::zero(),
        0.05,
        horizon,
    );
    compute_metrics(&tr, 0.0).unwrap().overshoot_pct
}

#[test]
fn overshoot_falls_with_damping() {
    let values: Vec<f64> = [0.4, 0.55, 0.7, 0.85, 1.0]
        .into_iter()
        .map(|z| overshoot(benchmark(), TuningSpec::new(z, 1.0).unwrap(), 1500.0))
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0] || w[1] == 0.0), "{values:?}");
}

#[test]
fn overshoot_grows_with_aggressiveness() {
    let values: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
        .into_iter()
        .map(|k| overshoot(benchmark(), TuningSpec::new(0.7, k).unwrap(), 1500.0))
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn phase_margin_shrinks_with_aggressiveness() {
    let margins: Vec<f64> = [0.5, 1.0, 1.5, 2.0, 3.0]
        .into_iter()
        .map(|k| {
            let tuned = pi_gains(&benchmark(), &TuningSpec::new(0.7, k).unwrap()).unwrap();
            tuned.margin.unwrap().phase_margin_deg
        })
        .collect();
    assert!(margins.windows(2).all(|w| w[1] < w[0]), "{margins:?}");
    assert!(*margins.last().unwrap() < 0.0);
}

#[test]
fn warning_precedes_instability() {
    let tuned = pi_gains(&benchmark(), &TuningSpec::new(0.7, 2.0).unwrap()).unwrap();
    assert!(matches!(tuned.warnings[..], [TuningWarning::LowPhaseMargin { .. }]));
    let calm = pi_gains(&benchmark(), &TuningSpec::new(0.7, 1.0).unwrap()).unwrap();
    assert!(calm.warnings.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zero_delay_overshoot_follows_damping_law(zeta in 0.4f64..1.0) {
        let model = IpdtModel::new(0.0506, 0.0).unwrap();
        let spec = TuningSpec::new(zeta, 1.0).unwrap().with_omega_n(0.05).unwrap();
        let measured = overshoot(model, spec, 12.0 / (zeta * 0.05));
        prop_assert!((measured - percent_overshoot(zeta)).abs() <= 0.5, "measured {}", measured);
    }

    #[test]
    fn gains_place_the_poles(kp in -10.0f64..10.0, d in 0.0f64..30.0, zeta in 0.3f64..2.0, k in 0.1f64..3.0) {
        prop_assume!(kp.abs() > 1e-3 && d > 1e-3);
        let model = IpdtModel::new(kp, d).unwrap();
        let tuned = pi_gains(&model, &TuningSpec::new(zeta, k).unwrap()).unwrap();
        let ts = d / kp.abs();
        let wn = 4.0 * k / (zeta * (ts + d));
        let g = tuned.gains;
        prop_assert!((tuned.omega_n - wn).abs() <= 1e-12 * wn);
        // Characteristic polynomial s² + Kp·Kc·s + Kp·Kc/Ti.
        prop_assert!((kp * g.kc - 2.0 * zeta * wn).abs() <= 1e-9 * wn);
        prop_assert!((kp * g.kc / g.ti - wn * wn).abs() <= 1e-9 * wn * wn);
    }

    #[test]
    fn margin_is_a_true_crossover(kp in 0.01f64..5.0, d in 0.1f64..20.0, k in 0.3f64..3.0) {
        let model = IpdtModel::new(kp, d).unwrap();
        let g = pi_gains(&model, &TuningSpec::new(0.7, k).unwrap()).unwrap().gains;
        let m = loop_margin(&model, &g).unwrap();
        let w = m.crossover;
        let mag = kp * g.kc * (1.0 + 1.0 / (g.ti * w).powi(2)).sqrt() / w;
        prop_assert!((mag - 1.0).abs() < 1e-6);
        let phase = (-std::f64::consts::FRAC_PI_2 - (1.0 / (g.ti * w)).atan() - w * d).to_degrees();
        prop_assert!((m.phase_margin_deg - (180.0 + phase)).abs() < 1e-4);
    }
}
