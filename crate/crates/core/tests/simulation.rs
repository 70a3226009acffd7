mod common;

use common::{benchmark, disturbance_response, ipi_loop, placed_gains, step_response};
use ipdt::analysis::{compute_metrics, regulation_response, second_order_step};
use ipdt::control::Controller;
use ipdt::plant::{ipdt_step, IpdtModel, IpdtPlant};
use ipdt::sim::{run_loop, DelayLine, Signal, TimeGrid};
use ipdt::tuning::{pi_gains, TuningSpec};
use proptest::prelude::*;

fn open_loop(model: IpdtModel, input: Signal, h: f64, horizon: f64) -> ipdt::sim::SimTrace {
    let mut plant = IpdtPlant::new(model).unwrap();
    let grid = TimeGrid::new(h, horizon).unwrap();
    run_loop(&mut plant, &mut Controller::open_loop(), &grid, &Signal::zero(), &input).unwrap()
}

#[test]
fn zero_inputs_give_zero_trace() {
    let tr = open_loop(benchmark(), Signal::zero(), 0.05, 50.0);
    assert_eq!(tr.len(), 1001);
    assert!(tr.y.iter().chain(&tr.u_applied).all(|&v| v == 0.0));
}

#[test]
fn open_loop_step_ramps_after_dead_time() {
    let tr = open_loop(benchmark(), Signal::step(1.0, 0.0), 0.05, 60.0);
    for (&t, &y) in tr.t.iter().zip(&tr.y) {
        let expected = 0.0506 * (t - 6.0).max(0.0);
        assert!((y - expected).abs() < 1e-9, "t={t}: {y} vs {expected}");
    }
}

#[test]
fn pure_integrator_is_exact() {
    let tr = open_loop(IpdtModel::new(2.5, 0.0).unwrap(), Signal::step(0.4, 0.0), 0.1, 10.0);
    assert!((tr.y.last().unwrap() - 2.5 * 0.4 * 10.0).abs() < 1e-10);
}

#[test]
fn closed_loop_tracks_unit_step() {
    let tuned = pi_gains(&benchmark(), &TuningSpec::default()).unwrap();
    let tr = ipi_loop(
        benchmark(),
        tuned.gains,
        Signal::step(1.0, 0.0),
        Signal::zero(),
        0.05,
        600.0,
    );
    assert!((tr.y.last().unwrap() - 1.0).abs() <= 1e-3);
}

#[test]
fn runs_are_bit_identical() {
    let tuned = pi_gains(&benchmark(), &TuningSpec::default()).unwrap();
    let a = ipi_loop(
        benchmark(),
        tuned.gains,
        Signal::step(1.0, 0.0),
        Signal::step(0.2, 100.0),
        0.05,
        300.0,
    );
    let b = ipi_loop(
        benchmark(),
        tuned.gains,
        Signal::step(1.0, 0.0),
        Signal::step(0.2, 100.0),
        0.05,
        300.0,
    );
    assert_eq!(a, b);
}

#[test]
fn library_oracles_agree_with_partial_fractions() {
    for zeta in [0.3, 0.7, 1.0, 1.6] {
        for t in [0.0, 5.0, 20.0, 77.0, 300.0] {
            let a = second_order_step(zeta, 0.05, t);
            let b = step_response(zeta, 0.05, t);
            assert!((a - b).abs() < 1e-9, "zeta={zeta} t={t}");
            let a = regulation_response(zeta, 0.05, 0.0506, t);
            let b = disturbance_response(zeta, 0.05, 0.0506, t);
            assert!((a - b).abs() < 1e-9, "zeta={zeta} t={t}");
        }
    }
}

#[test]
fn zero_delay_regulation_matches_closed_form() {
    let kp = 0.0506;
    let model = IpdtModel::new(kp, 0.0).unwrap();
    let tr = ipi_loop(
        model,
        placed_gains(kp, 0.7, 0.05),
        Signal::zero(),
        Signal::step(1.0, 0.0),
        0.05,
        400.0,
    );
    let err =
        tr.t.iter()
            .zip(&tr.y)
            .map(|(&t, &y)| (y - disturbance_response(0.7, 0.05, kp, t)).abs())
            .fold(0.0, f64::max);
    assert!(err <= 0.005, "max error {err}");
}

#[test]
fn metrics_stable_under_step_halving() {
    let tuned = pi_gains(&benchmark(), &TuningSpec::default()).unwrap();
    let run = |h| {
        let tr = ipi_loop(
            benchmark(),
            tuned.gains,
            Signal::step(1.0, 0.0),
            Signal::zero(),
            h,
            600.0,
        );
        compute_metrics(&tr, 0.0).unwrap()
    };
    let (a, b) = (run(0.05), run(0.025));
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
    assert!(rel(a.rise_time.unwrap(), b.rise_time.unwrap()) < 0.01);
    assert!(rel(a.settling_time.unwrap(), b.settling_time.unwrap()) < 0.01);
    assert!(rel(a.overshoot_pct, b.overshoot_pct) < 0.01);
}

#[test]
fn delay_line_rejects_time_reversal() {
    let mut line = DelayLine::new(1.0, 0.0).unwrap();
    line.push_pop(1.0, 0.0).unwrap();
    assert!(line.push_pop(1.0, 0.0).is_err());
    assert!(DelayLine::new(-1.0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delay_line_shifts_by_whole_samples(
        inputs in prop::collection::vec(-10.0f64..10.0, 1..200),
        m in 0usize..40,
        fill in -1.0f64..1.0,
    ) {
        let h = 0.05;
        let mut line = DelayLine::new(m as f64 * h, fill).unwrap();
        for (k, &u) in inputs.iter().enumerate() {
            let out = line.push_pop(k as f64 * h, u).unwrap();
            let expected = if k >= m { inputs[k - m] } else { fill };
            prop_assert!((out - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn ipdt_is_linear(
        u1 in prop::collection::vec(-5.0f64..5.0, 50..150),
        u2 in prop::collection::vec(-5.0f64..5.0, 150),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        kp in 0.01f64..10.0,
        d in 0.0f64..3.0,
    ) {
        let model = IpdtModel::new(kp, d).unwrap();
        let h = 0.05;
        let simulate = |u: &dyn Fn(usize) -> f64| {
            let mut line = DelayLine::new(d, 0.0).unwrap();
            let mut y = 0.0;
            let mut out = Vec::with_capacity(u1.len());
            for k in 0..u1.len() {
                y = ipdt_step(&model, &mut line, y, u(k), k as f64 * h, h).unwrap();
                out.push(y);
            }
            out
        };
        let y1 = simulate(&|k| u1[k]);
        let y2 = simulate(&|k| u2[k]);
        let ys = simulate(&|k| a * u1[k] + b * u2[k]);
        for k in 0..ys.len() {
            let expected = a * y1[k] + b * y2[k];
            prop_assert!((ys[k] - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn zero_delay_loop_matches_second_order(zeta in 0.4f64..1.2, wn in 0.01f64..1.0) {
        let kp = 0.0506;
        let model = IpdtModel::new(kp, 0.0).unwrap();
        let h = (0.01 / wn).min(0.05);
        let tr = ipi_loop(model, placed_gains(kp, zeta, wn), Signal::step(1.0, 0.0), Signal::zero(), h, 10.0 / (zeta * wn));
        for (&t, &y) in tr.t.iter().zip(&tr.y) {
            prop_assert!((y - step_response(zeta, wn, t)).abs() <= 0.005, "t={} y={}", t, y);
        }
    }

    #[test]
    fn regulation_removes_step_disturbance(zeta in 0.5f64..1.2, wn in 0.02f64..0.5, kp in 0.01f64..5.0, dist in -2.0f64..2.0) {
        let model = IpdtModel::new(kp, 0.0).unwrap();
        let h = (0.01 / wn).min(0.05);
        let tr = ipi_loop(model, placed_gains(kp, zeta, wn), Signal::zero(), Signal::step(dist, 0.0), h, 20.0 / (zeta * wn));
        let peak = tr.y.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        prop_assert!(tr.y.last().unwrap().abs() <= 1e-3 * peak.max(1e-12) + 1e-9);
    }
}
