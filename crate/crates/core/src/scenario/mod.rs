//! Scenario documents, sweeps, batch execution and file output.
//!
//! A scenario is a TOML document with one plant, one controller, a time
//! grid, setpoint and disturbance signals and an optional list of sweeps.
//! Each sweep names a dotted path into the document and a list of values;
//! several sweeps expand to their cartesian product. Tuning models are
//! resolved before sweeps apply, so sweeping `plant.d` changes the simulated
//! process while the gains stay fixed.

pub mod bundled;
mod config;
mod output;
mod plot;

pub use config::{
    ControllerConfig, GridConfig, IdentifyConfig, PlantConfig, ScenarioConfig, SweepConfig, REFERENCE_COEFFICIENTS,
};
pub use output::{emit_outputs, read_trace_csv, report_json, write_trace_csv, OUTPUT_DIR_ENV};
pub use plot::render_svg;

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{compute_metrics, MetricFlag, StepMetrics};
use crate::control::{Controller, PiGains, PidGains};
use crate::identification::{identify_ipdt, Identification, StepTestRecord};
use crate::plant::{AuvDepthModel, AuvPlant, IpdtModel, IpdtPlant};
use crate::sim::{run_loop, Plant, Signal, SimTrace, TimeGrid, MAX_DEFAULT_STEP};
use crate::tuning::{pi_gains, Tuning, TuningSpec, TuningWarning};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Scenario {
    config: ScenarioConfig,
    base_dir: Option<PathBuf>,
}

/// One resolved point of a scenario's sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    pub overrides: Vec<(String, f64)>,
    pub config: ScenarioConfig,
}

impl Scenario {
    /// Parse a scenario document. Relative file references resolve against
    /// `base_dir`, then against the bundled files.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text)
            .map_err(|e| Error::config("scenario", e.message().to_string() + &span_hint(text, e.span())))?;
        let mut scenario = Self {
            config,
            base_dir: base_dir.map(Path::to_path_buf),
        };
        scenario.resolve_tuning_model()?;
        // Validate every point up front so errors surface before any run.
        for point in scenario.sweep_points()? {
            scenario.validate(&point.config)?;
        }
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let text = bundled::scenario(name)
            .ok_or_else(|| Error::config("scenario", format!("no bundled scenario named `{name}`")))?;
        Self::from_toml_str(text, None)
    }

    /// A file path if it exists, otherwise a bundled scenario name.
    pub fn open(spec: &str) -> Result<Self> {
        let path = Path::new(spec);
        if path.exists() {
            Self::load(path)
        } else if let Some(text) = bundled::scenario(spec.trim_end_matches(".toml")) {
            Self::from_toml_str(text, None)
        } else {
            Err(Error::io(
                path,
                std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "no such scenario file or bundled scenario",
                ),
            ))
        }
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    /// Replace the sweep list with a single sweep over `param`.
    pub fn with_sweep(mut self, param: &str, values: Vec<f64>) -> Result<Self> {
        self.config.sweep = vec![SweepConfig {
            param: param.to_string(),
            values,
        }];
        for point in self.sweep_points()? {
            self.validate(&point.config)?;
        }
        Ok(self)
    }

    /// Fill in the I+PI tuning model from an IPDT plant when none is given.
    fn resolve_tuning_model(&mut self) -> Result<()> {
        if let ControllerConfig::Ipi { model, identify, .. } = &mut self.config.controller {
            if model.is_some() && identify.is_some() {
                return Err(Error::config(
                    "controller",
                    "give either `model` or `identify`, not both",
                ));
            }
            if model.is_none() && identify.is_none() {
                match &self.config.plant {
                    PlantConfig::Ipdt { kp, d } => *model = Some(IpdtModel { kp: *kp, d: *d }),
                    PlantConfig::Auv { .. } => {
                        return Err(Error::config(
                            "controller.model",
                            "an AUV plant needs `controller.model` or `controller.identify`",
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    /// Expand the sweeps into resolved configurations, in declaration order.
    pub fn sweep_points(&self) -> Result<Vec<SweepPoint>> {
        let mut base = self.config.clone();
        let sweeps = std::mem::take(&mut base.sweep);
        let doc = toml::Value::try_from(&base).map_err(|e| Error::config("scenario", e.to_string()))?;

        let mut combos: Vec<Vec<(String, f64)>> = vec![Vec::new()];
        for sweep in &sweeps {
            if sweep.values.is_empty() {
                return Err(Error::config(format!("sweep `{}`", sweep.param), "no values"));
            }
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    sweep.values.iter().map(move |v| {
                        let mut c = prefix.clone();
                        c.push((sweep.param.clone(), *v));
                        c
                    })
                })
                .collect();
        }

        combos
            .into_iter()
            .map(|overrides| {
                let mut doc = doc.clone();
                for (path, value) in &overrides {
                    set_path(&mut doc, path, *value)?;
                }
                let config: ScenarioConfig = doc.try_into().map_err(|e: toml::de::Error| {
                    Error::config(
                        overrides.first().map_or("scenario", |o| o.0.as_str()).to_string(),
                        e.message().to_string(),
                    )
                })?;
                let label = if overrides.is_empty() {
                    "base".to_string()
                } else {
                    overrides
                        .iter()
                        .map(|(p, v)| format!("{p}={v}"))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                Ok(SweepPoint {
                    label,
                    overrides,
                    config,
                })
            })
            .collect()
    }

    fn validate(&self, c: &ScenarioConfig) -> Result<()> {
        let positive = |path: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(path, format!("must be finite and > 0, got {v}")))
            }
        };
        if c.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        if c.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must not contain path separators"));
        }
        match &c.plant {
            PlantConfig::Ipdt { kp, d } => {
                IpdtModel::new(*kp, *d).map_err(|e| {
                    Error::config(
                        if *kp == 0.0 || !kp.is_finite() {
                            "plant.kp"
                        } else {
                            "plant.d"
                        },
                        e.to_string(),
                    )
                })?;
            }
            PlantConfig::Auv { u_surge, .. } => {
                if let Some(u) = u_surge {
                    positive("plant.u_surge", *u)?;
                }
                self.auv_model(c)?;
            }
        }
        match &c.controller {
            ControllerConfig::Ipi {
                zeta,
                k,
                omega_n,
                model,
                identify,
            } => {
                positive("controller.zeta", *zeta)?;
                positive("controller.k", *k)?;
                if let Some(w) = omega_n {
                    positive("controller.omega_n", *w)?;
                }
                if let Some(m) = model {
                    m.validate()
                        .map_err(|e| Error::config("controller.model", e.to_string()))?;
                    if omega_n.is_none() {
                        crate::tuning::natural_frequency(m, &spec(*zeta, *k, *omega_n))
                            .map_err(|e| Error::config("controller.omega_n", e.to_string()))?;
                    }
                }
                if let Some(id) = identify {
                    if id.step_amplitude == 0.0 || !id.step_amplitude.is_finite() {
                        return Err(Error::config(
                            "controller.identify.step_amplitude",
                            "must be finite and non-zero",
                        ));
                    }
                    positive("controller.identify.horizon", id.horizon)?;
                }
            }
            ControllerConfig::Pid {
                kc,
                ti,
                td,
                deriv_filter_n,
            } => {
                PidGains::new(*kc, *ti, *td, *deriv_filter_n)
                    .map_err(|e| Error::config("controller", e.to_string()))?;
            }
            ControllerConfig::Open => {}
        }
        positive("grid.horizon", c.grid.horizon)?;
        if let Some(h) = c.grid.step {
            positive("grid.step", h)?;
            TimeGrid::new(h, c.grid.horizon).map_err(|e| Error::config("grid", e.to_string()))?;
        }
        if let Some(a) = &c.actuator {
            a.validate().map_err(|e| Error::config("actuator", e.to_string()))?;
        }
        Ok(())
    }

    fn auv_model(&self, c: &ScenarioConfig) -> Result<AuvDepthModel> {
        let PlantConfig::Auv { coefficients, u_surge } = &c.plant else {
            return Err(Error::config("plant.kind", "not an AUV plant"));
        };
        let local = self.base_dir.as_ref().map(|d| d.join(coefficients));
        let mut model = match local.filter(|p| p.exists()) {
            Some(path) => AuvDepthModel::from_file(&path),
            None => match bundled::file(coefficients) {
                Some(text) => AuvDepthModel::from_toml_str(text),
                None => AuvDepthModel::from_file(Path::new(coefficients)),
            },
        }
        .map_err(|e| Error::config("plant.coefficients", e.to_string()))?;
        if let Some(u) = u_surge {
            model = model
                .with_surge(*u)
                .map_err(|e| Error::config("plant.u_surge", e.to_string()))?;
        }
        if let Some(a) = c.actuator {
            model = model
                .with_actuator(a)
                .map_err(|e| Error::config("actuator", e.to_string()))?;
        }
        Ok(model)
    }

    fn build_plant(&self, c: &ScenarioConfig) -> Result<Box<dyn Plant + Send>> {
        Ok(match &c.plant {
            PlantConfig::Ipdt { kp, d } => Box::new(IpdtPlant::new(IpdtModel::new(*kp, *d)?)?),
            PlantConfig::Auv { .. } => Box::new(AuvPlant::new(self.auv_model(c)?)),
        })
    }

    fn run_point(&self, point: &SweepPoint) -> Result<RunResult> {
        let c = &point.config;
        let mut identification = None;
        let mut tuning = None;
        let (mut controller, gains, tuning_d) = match &c.controller {
            ControllerConfig::Ipi {
                zeta,
                k,
                omega_n,
                model,
                identify,
            } => {
                let model = match (model, identify) {
                    (Some(m), _) => *m,
                    (None, Some(id)) => {
                        let found = self.step_test(c, id)?;
                        let m = found.model;
                        identification = Some(found);
                        m
                    }
                    (None, None) => unreachable!("tuning model resolved at load"),
                };
                let t = pi_gains(&model, &spec(*zeta, *k, *omega_n))?;
                let g = t.gains;
                tuning = Some(t);
                (Controller::ipi(g), GainsReport::from(g), model.d)
            }
            ControllerConfig::Pid {
                kc,
                ti,
                td,
                deriv_filter_n,
            } => {
                let g = PidGains::new(*kc, *ti, *td, *deriv_filter_n)?;
                (Controller::pid(g), GainsReport::from(g), 0.0)
            }
            ControllerConfig::Open => (Controller::open_loop(), GainsReport::default(), 0.0),
        };

        let limits = match &c.plant {
            PlantConfig::Auv { .. } => Some(self.auv_model(c)?.actuator),
            PlantConfig::Ipdt { .. } => c.actuator,
        };
        if let Some(l) = limits {
            controller = controller.with_limits(l);
        }

        let plant_d = match &c.plant {
            PlantConfig::Ipdt { d, .. } => *d,
            PlantConfig::Auv { .. } => tuning_d,
        };
        let step = c.grid.step.unwrap_or_else(|| {
            let d = if plant_d > 0.0 && tuning_d > 0.0 {
                plant_d.min(tuning_d)
            } else {
                plant_d.max(tuning_d)
            };
            TimeGrid::default_step(d, gains.ti)
        });
        let grid = TimeGrid::new(step, c.grid.horizon)?;
        let mut plant = self.build_plant(c)?;
        let trace = run_loop(plant.as_mut(), &mut controller, &grid, &c.setpoint, &c.disturbance)?;

        let step_time = c
            .step_time
            .or_else(|| c.setpoint.onset())
            .or_else(|| c.disturbance.onset())
            .unwrap_or(0.0);
        let metrics = compute_metrics(&trace, step_time)?;

        let mut flags: Vec<String> = metrics.flags.iter().map(|f| f.as_str().to_string()).collect();
        if let Some(t) = &tuning {
            for w in &t.warnings {
                flags.push(
                    match w {
                        TuningWarning::LowPhaseMargin { .. } => "low_phase_margin",
                        TuningWarning::NoCrossover => "no_crossover",
                    }
                    .to_string(),
                );
            }
        }
        if let Some(l) = limits {
            if trace.u_applied.iter().any(|u| u.abs() >= l.max_deflection) {
                flags.push("actuator_saturated".into());
            }
        }
        if identification
            .as_ref()
            .is_some_and(|i: &Identification| i.diagnostics.dead_time_clamped)
        {
            flags.push("dead_time_clamped".into());
        }

        Ok(RunResult {
            scenario: c.name.clone(),
            sweep_point: point.label.clone(),
            overrides: point.overrides.clone(),
            step,
            gains,
            tuning,
            identification,
            metrics,
            flags,
            trace,
        })
    }

    fn step_test(&self, c: &ScenarioConfig, id: &IdentifyConfig) -> Result<Identification> {
        let grid = TimeGrid::new(MAX_DEFAULT_STEP, id.horizon)?;
        let mut plant = self.build_plant(c)?;
        let trace = run_loop(
            plant.as_mut(),
            &mut Controller::open_loop(),
            &grid,
            &Signal::zero(),
            &Signal::step(id.step_amplitude, id.step_time),
        )?;
        identify_ipdt(&StepTestRecord::from_trace(&trace, id.step_amplitude, id.step_time)?)
    }
}

fn spec(zeta: f64, k: f64, omega_n: Option<f64>) -> TuningSpec {
    TuningSpec { zeta, k, omega_n }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(s) => {
            let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

fn set_path(doc: &mut toml::Value, path: &str, value: f64) -> Result<()> {
    let mut node = doc;
    let mut parts = path.split('.').peekable();
    while let Some(part) = parts.next() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::config(path, "does not resolve to an existing setting"))?;
        let child = table
            .get_mut(part)
            .ok_or_else(|| Error::config(path, "does not resolve to an existing setting"))?;
        if parts.peek().is_none() {
            if !matches!(child, toml::Value::Float(_) | toml::Value::Integer(_)) {
                return Err(Error::config(path, "is not a numeric setting"));
            }
            *child = toml::Value::Float(value);
            return Ok(());
        }
        node = child;
    }
    Err(Error::config(path, "empty parameter path"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GainsReport {
    pub kc: Option<f64>,
    pub ti: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub td: Option<f64>,
}

impl From<PiGains> for GainsReport {
    fn from(g: PiGains) -> Self {
        Self {
            kc: Some(g.kc),
            ti: Some(g.ti),
            td: None,
        }
    }
}

impl From<PidGains> for GainsReport {
    fn from(g: PidGains) -> Self {
        Self {
            kc: Some(g.kc),
            ti: Some(g.ti),
            td: Some(g.td),
        }
    }
}

/// Outcome of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scenario: String,
    pub sweep_point: String,
    pub overrides: Vec<(String, f64)>,
    pub step: f64,
    pub gains: GainsReport,
    pub tuning: Option<Tuning>,
    pub identification: Option<Identification>,
    pub metrics: StepMetrics,
    pub flags: Vec<String>,
    pub trace: SimTrace,
}

impl RunResult {
    pub fn diverged(&self) -> bool {
        self.metrics.has(MetricFlag::Diverged)
    }

    pub fn override_value(&self, param: &str) -> Option<f64> {
        self.overrides.iter().find(|(p, _)| p == param).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResults {
    pub scenario: String,
    pub runs: Vec<RunResult>,
}

/// Run every sweep point. Points run on separate threads; results keep
/// declaration order.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioResults> {
    let points = scenario.sweep_points()?;
    let runs = std::thread::scope(|s| {
        let handles: Vec<_> = points.iter().map(|p| s.spawn(move || scenario.run_point(p))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep point thread panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ScenarioResults {
        scenario: scenario.name().to_string(),
        runs,
    })
}
