use std::path::PathBuf;

use ipdt::control::{Controller, PiGains};
use ipdt::identification::{identify_ipdt, StepTestRecord};
use ipdt::plant::{ActuatorLimits, AuvDepthModel, AuvPlant, IpdtPlant, REFERENCE_AUV_COEFFICIENTS};
use ipdt::scenario::{run_scenario, Scenario};
use ipdt::sim::{run_loop, Signal, TimeGrid};
use ipdt::tuning::{pi_gains, TuningSpec};
use ipdt::Error;

fn auv_step_test(model: AuvDepthModel, amplitude: f64, horizon: f64) -> ipdt::sim::SimTrace {
    let mut plant = AuvPlant::new(model);
    let grid = TimeGrid::new(0.05, horizon).unwrap();
    run_loop(
        &mut plant,
        &mut Controller::open_loop(),
        &grid,
        &Signal::zero(),
        &Signal::step(amplitude, 0.0),
    )
    .unwrap()
}

#[test]
fn stern_step_produces_terminal_ramp() {
    let tr = auv_step_test(AuvDepthModel::reference(), 0.03491, 300.0);
    let n = tr.len();
    let slope = |a: usize, b: usize| (tr.y[b] - tr.y[a]) / (tr.t[b] - tr.t[a]);
    let late = slope(n - 1000, n - 1);
    let later = slope(n - 500, n - 1);
    assert!(late > 0.0);
    assert!((late - later).abs() / late < 0.01);
    let theta = tr.aux("theta").unwrap();
    assert!((theta[n - 1] - theta[n - 200]).abs() < 1e-4, "pitch should settle");
}

#[test]
fn identified_gain_rises_with_surge() {
    let identify = |u: f64| {
        let model = AuvDepthModel::reference().with_surge(u).unwrap();
        let tr = auv_step_test(model, 0.03491, 400.0);
        identify_ipdt(&StepTestRecord::from_trace(&tr, 0.03491, 0.0).unwrap())
            .unwrap()
            .model
            .kp
    };
    let slow = identify(0.8);
    assert!((slow - 0.7918).abs() <= 0.2 * 0.7918, "Kp {slow}");
    assert!(identify(1.2) > slow);
}

#[test]
fn stern_never_exceeds_limits_under_large_command() {
    let model = AuvDepthModel::reference();
    let limits = model.actuator;
    let tuned = pi_gains(
        &ipdt::plant::IpdtModel::new(0.79, 6.2).unwrap(),
        &TuningSpec::new(0.7, 1.0).unwrap().with_omega_n(0.03).unwrap(),
    )
    .unwrap();
    let mut plant = AuvPlant::new(model);
    let mut ctl = Controller::ipi(tuned.gains).with_limits(limits);
    let grid = TimeGrid::new(0.05, 1500.0).unwrap();
    let tr = run_loop(&mut plant, &mut ctl, &grid, &Signal::step(60.0, 0.0), &Signal::zero()).unwrap();
    let stern = tr.aux("stern").unwrap();
    assert!(
        stern.iter().any(|s| (s.abs() - limits.max_deflection).abs() < 1e-9),
        "command should saturate"
    );
    assert!(stern.iter().all(|&s| limits.contains(s)));
    assert!(stern
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() <= limits.max_rate * 0.05 * (1.0 + 1e-9)));
    assert!((tr.y.last().unwrap() - 60.0).abs() < 0.02 * 60.0);
}

#[test]
fn windup_protection_limits_overshoot_on_ipdt() {
    let model = ipdt::plant::IpdtModel::new(0.0506, 6.0).unwrap();
    let gains: PiGains = pi_gains(&model, &TuningSpec::default()).unwrap().gains;
    let limits = ActuatorLimits::new(1.0, f64::INFINITY).unwrap();
    let mut plant = IpdtPlant::new(model).unwrap();
    let mut ctl = Controller::ipi(gains).with_limits(limits);
    let grid = TimeGrid::new(0.05, 1500.0).unwrap();
    let tr = run_loop(&mut plant, &mut ctl, &grid, &Signal::step(10.0, 0.0), &Signal::zero()).unwrap();
    let peak = tr.y.iter().cloned().fold(f64::MIN, f64::max);
    assert!(tr.u_applied.iter().all(|u| u.abs() <= 1.0 + 1e-12));
    assert!(peak < 10.0 * 1.25, "peak {peak}");
    assert!((tr.y.last().unwrap() - 10.0).abs() < 0.02);
}

#[test]
fn coefficient_file_errors_name_the_problem() {
    let bad = REFERENCE_AUV_COEFFICIENTS.replace("m_q = ", "m_qq = ");
    assert!(matches!(AuvDepthModel::from_toml_str(&bad), Err(Error::Config { .. })));
    // Positive pitch damping makes the unforced vehicle unstable.
    let unstable = REFERENCE_AUV_COEFFICIENTS.replace("m_q = -", "m_q = ");
    assert!(AuvDepthModel::from_toml_str(&unstable).is_err());
    let missing = AuvDepthModel::from_file(&PathBuf::from("/nonexistent/auv.toml")).unwrap_err();
    assert!(matches!(missing, Error::Io { .. }));
}

#[test]
fn pitch_beyond_model_validity_is_a_fault() {
    let model = AuvDepthModel::reference()
        .with_actuator(ActuatorLimits::new(1.5, f64::INFINITY).unwrap())
        .unwrap();
    let mut plant = AuvPlant::new(model);
    let mut ctl = Controller::pid(ipdt::control::PidGains::new(500.0, 1.0, 0.0, 10.0).unwrap());
    let grid = TimeGrid::new(0.05, 600.0).unwrap();
    let err = run_loop(&mut plant, &mut ctl, &grid, &Signal::step(100.0, 0.0), &Signal::zero()).unwrap_err();
    assert_eq!(err.exit_code(), 3, "{err}");
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/benchmark-pid-moderate.csv")
}

#[test]
fn pid_comparison_trace_is_regression_locked() {
    let run = &run_scenario(&Scenario::bundled("benchmark-pid-moderate").unwrap())
        .unwrap()
        .runs[0];
    let tr = &run.trace;
    let rows: Vec<(f64, f64, f64)> = (0..tr.len())
        .step_by(200)
        .map(|i| (tr.t[i], tr.y[i], tr.u_applied[i]))
        .collect();
    let path = golden_path();
    if std::env::var_os("IPDT_BLESS").is_some() {
        let mut w = csv::Writer::from_path(&path).unwrap();
        w.write_record(["t", "y", "u_applied"]).unwrap();
        for (t, y, u) in &rows {
            w.write_record([t.to_string(), y.to_string(), u.to_string()]).unwrap();
        }
        w.flush().unwrap();
    }
    let mut r = csv::Reader::from_path(&path).unwrap();
    let golden: Vec<(f64, f64, f64)> = r.deserialize().map(|rec| rec.unwrap()).collect();
    assert_eq!(golden.len(), rows.len());
    for (g, a) in golden.iter().zip(&rows) {
        assert_eq!(g.0, a.0);
        assert!(
            (g.1 - a.1).abs() <= 1e-9 * (1.0 + g.1.abs()),
            "y at t={}: {} vs {}",
            a.0,
            a.1,
            g.1
        );
        assert!(
            (g.2 - a.2).abs() <= 1e-9 * (1.0 + g.2.abs()),
            "u at t={}: {} vs {}",
            a.0,
            a.2,
            g.2
        );
    }
}
