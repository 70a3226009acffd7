use std::process::{Command, Output};

fn ipdt(args: &[&str], out_dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipdt"))
        .args(args)
        .env("IPDT_OUTPUT_DIR", out_dir)
        .output()
        .unwrap()
}

fn write_scenario(dir: &std::path::Path, body: &str) -> String {
    let path = dir.join("case.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const PID_CASE: &str = r#"
name = "case"
[plant]
kind = "ipdt"
kp = 0.0506
d = 6.0
[controller]
kind = "pid"
kc = 10000.0
ti = 1.0
td = 0.0
[grid]
horizon = 3000.0
[setpoint]
kind = "step"
amplitude = 1.0
"#;

#[test]
fn run_writes_into_output_root_from_env() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ipdt(&["run", "benchmark-tracking"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("benchmark-tracking");
    for f in [
        "benchmark-tracking.csv",
        "benchmark-tracking.json",
        "benchmark-tracking.svg",
    ] {
        assert!(dir.join(f).is_file(), "{f}");
    }
}

#[test]
fn sweep_subcommand_replaces_sweeps() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ipdt(
        &[
            "sweep",
            "benchmark-tracking",
            "--param",
            "controller.k",
            "--values",
            "0.5,1,1.5",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csvs = std::fs::read_dir(tmp.path().join("benchmark-tracking"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(csvs, 3);
}

#[test]
fn tune_prints_gains() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ipdt(
        &[
            "tune", "--kp", "0.0506", "--d", "6", "--zeta", "0.7", "--k", "1", "--json",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ts = v["settling_time"].as_f64().unwrap();
    assert!((ts - 6.0 / 0.0506).abs() < 1e-9);
    let wn = 4.0 / (0.7 * (ts + 6.0));
    assert!((v["gains"]["kc"].as_f64().unwrap() - 1.4 * wn / 0.0506).abs() < 1e-9);
}

#[test]
fn identify_reads_a_written_trace() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(ipdt(&["run", "auv-step-test"], tmp.path()).status.success());
    let csv = tmp.path().join("auv-step-test/auv-step-test.csv");
    let out = ipdt(
        &[
            "identify",
            csv.to_str().unwrap(),
            "--step-amplitude",
            "0.03491",
            "--json",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let kp = v["model"]["kp"].as_f64().unwrap();
    assert!((kp - 0.7918).abs() < 0.2 * 0.7918);
}

#[test]
fn validation_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        ipdt(&["tune", "--kp", "0", "--d", "6"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        ipdt(&["tune", "--kp", "0.05", "--zeta", "-1"], tmp.path())
            .status
            .code(),
        Some(2)
    );
    let out = ipdt(
        &[
            "sweep",
            "benchmark-tracking",
            "--param",
            "controller.nope",
            "--values",
            "1",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("controller.nope"));
    let path = write_scenario(tmp.path(), &PID_CASE.replace("kind = \"step\"", "kind = \"stepp\""));
    assert_eq!(ipdt(&["run", &path], tmp.path()).status.code(), Some(2));
}

#[test]
fn numeric_blow_up_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_scenario(tmp.path(), PID_CASE);
    let out = ipdt(&["run", &path], tmp.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
