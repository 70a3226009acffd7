use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ipdt::identification::{identify_ipdt, StepTestRecord};
use ipdt::plant::IpdtModel;
use ipdt::scenario::{self, emit_outputs, read_trace_csv, run_scenario, Scenario, OUTPUT_DIR_ENV};
use ipdt::tuning::{pi_gains, TuningSpec, DEFAULT_K, DEFAULT_ZETA};
use ipdt::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ipdt",
    version,
    about = "Tuning and simulation of integrating dead-time processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a bundled scenario by name) and write its outputs.
    Run {
        scenario: String,
        /// Output root; a subdirectory named after the scenario is created.
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "runs")]
        out: PathBuf,
    },
    /// Run a scenario with its sweeps replaced by one parameter sweep.
    Sweep {
        scenario: String,
        /// Dotted config path, e.g. controller.zeta or plant.d.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "runs")]
        out: PathBuf,
    },
    /// PI gains from process gain, dead time, damping and aggressiveness.
    Tune {
        #[arg(long, allow_hyphen_values = true)]
        kp: f64,
        #[arg(long, default_value_t = 0.0)]
        d: f64,
        #[arg(long, default_value_t = DEFAULT_ZETA)]
        zeta: f64,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: f64,
        /// Specify the natural frequency directly instead of through k.
        #[arg(long)]
        omega_n: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Fit an IPDT model to an open-loop step-test CSV (needs `t` and `y` columns).
    Identify {
        trace: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        step_amplitude: f64,
        #[arg(long, default_value_t = 0.0)]
        step_time: f64,
        #[arg(long)]
        json: bool,
    },
    /// List the bundled scenarios.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { scenario, out } => run(Scenario::open(&scenario)?, &out),
        Command::Sweep {
            scenario,
            param,
            values,
            out,
        } => run(Scenario::open(&scenario)?.with_sweep(&param, values)?, &out),
        Command::Tune {
            kp,
            d,
            zeta,
            k,
            omega_n,
            json,
        } => {
            let model = IpdtModel::new(kp, d)?;
            let mut spec = TuningSpec::new(zeta, k)?;
            if let Some(w) = omega_n {
                spec = spec.with_omega_n(w)?;
            }
            let tuned = pi_gains(&model, &spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&tuned)?);
                return Ok(());
            }
            if let Some(ts) = tuned.settling_time {
                println!("Ts      = {ts:.6} s");
            }
            println!("omega_n = {:.6} rad/s", tuned.omega_n);
            println!("Kc      = {:.6}", tuned.gains.kc);
            println!("Ti      = {:.6} s", tuned.gains.ti);
            if let Some(m) = tuned.margin {
                println!(
                    "phase margin = {:.2} deg at {:.6} rad/s",
                    m.phase_margin_deg, m.crossover
                );
            }
            for w in &tuned.warnings {
                println!("warning: {w}");
            }
            Ok(())
        }
        Command::Identify {
            trace,
            step_amplitude,
            step_time,
            json,
        } => {
            let file = std::fs::File::open(&trace).map_err(|e| Error::io(&trace, e))?;
            let data = read_trace_csv(std::io::BufReader::new(file))?;
            let id = identify_ipdt(&StepTestRecord::new(data.t, data.y, step_amplitude, step_time)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&id)?);
                return Ok(());
            }
            println!("Kp = {:.6}", id.model.kp);
            println!("d  = {:.6} s", id.model.d);
            println!("slope residual (rms) = {:.3e}", id.diagnostics.residual_rms);
            println!("linear-phase fraction = {:.3}", id.diagnostics.linear_phase_fraction);
            if id.diagnostics.dead_time_clamped {
                println!("warning: intercept precedes the step; dead time clamped to 0");
            }
            Ok(())
        }
        Command::List => {
            for name in scenario::bundled::names() {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn run(scenario: Scenario, out: &std::path::Path) -> Result<()> {
    let results = run_scenario(&scenario)?;
    let dir = out.join(scenario.name());
    for run in &results.runs {
        let m = &run.metrics;
        println!(
            "{:<40} rise {:>9} settle {:>9} overshoot {:>7.2}% iae {:>9.3}{}",
            run.sweep_point,
            fmt_opt(m.rise_time),
            fmt_opt(m.settling_time),
            m.overshoot_pct,
            m.iae,
            if run.flags.is_empty() {
                String::new()
            } else {
                format!("  [{}]", run.flags.join(", "))
            }
        );
    }
    for path in emit_outputs(&results, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}s"))
}
