use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{GainsReport, RunResult, ScenarioResults};
use crate::analysis::StepMetrics;
use crate::identification::Identification;
use crate::sim::SimTrace;
use crate::tuning::LoopMargin;
use crate::{Error, Result};

/// Environment variable naming the root directory for run output.
pub const OUTPUT_DIR_ENV: &str = "IPDT_OUTPUT_DIR";

const COLUMNS: [&str; 7] = ["t", "r", "d_in", "u_ff", "u_fb", "u_applied", "y"];

pub fn write_trace_csv<W: Write>(trace: &SimTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for i in 0..trace.len() {
        let row = [
            trace.t[i],
            trace.r[i],
            trace.d_in[i],
            trace.u_ff[i],
            trace.u_fb[i],
            trace.u_applied[i],
            trace.y[i],
        ];
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

fn write_aux_csv<W: Write>(trace: &SimTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(trace.aux.iter().map(|c| c.name.clone()));
    w.write_record(&header)?;
    for i in 0..trace.len() {
        let mut row = vec![trace.t[i].to_string()];
        row.extend(trace.aux.iter().map(|c| c.values[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Read a trace CSV. Columns are matched by header name; only `t` and `y`
/// are required, missing signal columns read as zero.
pub fn read_trace_csv<R: Read>(input: R) -> Result<SimTrace> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(ti), Some(yi)) = (col("t"), col("y")) else {
        return Err(Error::invalid("trace csv", "needs `t` and `y` columns"));
    };
    let others: Vec<Option<usize>> = ["r", "d_in", "u_ff", "u_fb", "u_applied"]
        .iter()
        .map(|n| col(n))
        .collect();

    let mut trace = SimTrace::default();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |i: Option<usize>| -> Result<f64> {
            match i {
                None => Ok(0.0),
                Some(i) => {
                    let raw = record.get(i).unwrap_or("").trim();
                    raw.parse::<f64>()
                        .map_err(|_| Error::invalid("trace csv", format!("row {}: `{raw}` is not a number", line + 2)))
                }
            }
        };
        trace.t.push(field(Some(ti))?);
        trace.y.push(field(Some(yi))?);
        trace.r.push(field(others[0])?);
        trace.d_in.push(field(others[1])?);
        trace.u_ff.push(field(others[2])?);
        trace.u_fb.push(field(others[3])?);
        trace.u_applied.push(field(others[4])?);
    }
    Ok(trace)
}

#[derive(Serialize)]
struct Report<'a> {
    scenario: &'a str,
    runs: Vec<RunReport<'a>>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    scenario: &'a str,
    sweep_point: &'a str,
    overrides: serde_json::Map<String, serde_json::Value>,
    step: f64,
    gains: GainsReport,
    metrics: &'a StepMetrics,
    flags: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    loop_margin: Option<LoopMargin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identification: Option<&'a Identification>,
    max_control_increment: f64,
}

/// The combined JSON report for all runs of a scenario.
pub fn report_json(results: &ScenarioResults) -> Result<String> {
    let report = Report {
        scenario: &results.scenario,
        runs: results.runs.iter().map(run_report).collect(),
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(text)
}

fn run_report(run: &RunResult) -> RunReport<'_> {
    RunReport {
        scenario: &run.scenario,
        sweep_point: &run.sweep_point,
        overrides: run
            .overrides
            .iter()
            .map(|(p, v)| (p.clone(), serde_json::json!(v)))
            .collect(),
        step: run.step,
        gains: run.gains,
        metrics: &run.metrics,
        flags: &run.flags,
        omega_n: run.tuning.as_ref().map(|t| t.omega_n),
        loop_margin: run.tuning.as_ref().and_then(|t| t.margin),
        identification: run.identification.as_ref(),
        max_control_increment: run.trace.max_control_increment(),
    }
}

fn file_stem(run: &RunResult, single: bool) -> String {
    if single {
        return run.scenario.clone();
    }
    let label: String = run
        .sweep_point
        .chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '.' | '-' | '_' => c,
            _ => '_',
        })
        .collect();
    format!("{}__{label}", run.scenario)
}

/// Write one CSV per run (plus a states CSV for plants with extra
/// channels), one combined JSON report and one overlay SVG into `dir`.
pub fn emit_outputs(results: &ScenarioResults, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let single = results.runs.len() == 1;
    let create = |path: &Path| std::fs::File::create(path).map_err(|e| Error::io(path, e));

    for run in &results.runs {
        let stem = file_stem(run, single);
        let path = dir.join(format!("{stem}.csv"));
        write_trace_csv(&run.trace, std::io::BufWriter::new(create(&path)?)).map_err(|e| with_path(e, &path))?;
        written.push(path);
        if !run.trace.aux.is_empty() {
            let path = dir.join(format!("{stem}.states.csv"));
            write_aux_csv(&run.trace, std::io::BufWriter::new(create(&path)?)).map_err(|e| with_path(e, &path))?;
            written.push(path);
        }
    }

    let path = dir.join(format!("{}.json", results.scenario));
    std::fs::write(&path, report_json(results)?).map_err(|e| Error::io(&path, e))?;
    written.push(path);

    let path = dir.join(format!("{}.svg", results.scenario));
    std::fs::write(&path, super::plot::render_svg(results)).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Csv(c) => Error::io(path, std::io::Error::other(c.to_string())),
        other => other,
    }
}
