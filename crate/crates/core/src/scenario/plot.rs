//! Static SVG line charts: process output over time and the applied control.

use std::fmt::Write;

use super::ScenarioResults;

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 260.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const GAP: f64 = 60.0;
const MAX_POINTS: usize = 1500;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Panel<'a> {
    title: &'a str,
    y_label: &'a str,
    top: f64,
}

pub fn render_svg(results: &ScenarioResults) -> String {
    let height = TOP + 2.0 * PANEL_HEIGHT + GAP + 50.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&results.scenario)
    );

    let t_max = results
        .runs
        .iter()
        .filter_map(|r| r.trace.t.last().copied())
        .fold(0.0, f64::max);
    let mut output: Vec<(String, &[f64], &[f64], bool)> = Vec::new();
    let mut control: Vec<(String, &[f64], &[f64], bool)> = Vec::new();
    if let Some(first) = results.runs.first() {
        if first.trace.r.iter().any(|v| *v != 0.0) {
            output.push(("setpoint".into(), &first.trace.t, &first.trace.r, true));
        }
    }
    for run in &results.runs {
        output.push((run.sweep_point.clone(), &run.trace.t, &run.trace.y, false));
        control.push((run.sweep_point.clone(), &run.trace.t, &run.trace.u_applied, false));
    }

    draw_panel(
        &mut svg,
        &Panel {
            title: "output",
            y_label: "y",
            top: TOP,
        },
        t_max,
        &output,
    );
    draw_panel(
        &mut svg,
        &Panel {
            title: "applied control",
            y_label: "u",
            top: TOP + PANEL_HEIGHT + GAP,
        },
        t_max,
        &control,
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">time (s)</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        height - 12.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn draw_panel(svg: &mut String, panel: &Panel, t_max: f64, series: &[(String, &[f64], &[f64], bool)]) {
    let plot_w = WIDTH - LEFT - RIGHT;
    let (mut lo, mut hi) = series
        .iter()
        .flat_map(|(_, _, v, _)| v.iter())
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let t_max = if t_max > 0.0 { t_max } else { 1.0 };
    let x = |t: f64| LEFT + t / t_max * plot_w;
    let y = |v: f64| panel.top + PANEL_HEIGHT - (v - lo) / (hi - lo) * PANEL_HEIGHT;

    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{}" width="{plot_w}" height="{PANEL_HEIGHT}" fill="none" stroke="#444"/>"##,
        panel.top
    );
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT}" y="{}">{}</text>"#,
        panel.top - 6.0,
        panel.title
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{0}" transform="rotate(-90 18 {0})" text-anchor="middle">{1}</text>"#,
        panel.top + PANEL_HEIGHT / 2.0,
        panel.y_label
    );
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let tv = frac * t_max;
        let vv = lo + frac * (hi - lo);
        let _ = writeln!(
            svg,
            r##"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="#ddd"/><text x="{0:.2}" y="{3}" text-anchor="middle">{4}</text>"##,
            x(tv),
            panel.top,
            panel.top + PANEL_HEIGHT,
            panel.top + PANEL_HEIGHT + 15.0,
            tick(tv)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="#ddd"/><text x="{2}" y="{3:.2}" text-anchor="end">{4}</text>"##,
            y(vv),
            LEFT + plot_w,
            LEFT - 6.0,
            y(vv) + 4.0,
            tick(vv)
        );
    }

    let mut colour = 0;
    for (i, (name, t, v, dashed)) in series.iter().enumerate() {
        let stride = (t.len() / MAX_POINTS).max(1);
        let mut points = String::new();
        for k in (0..t.len()).step_by(stride).chain(t.len().checked_sub(1)) {
            if v[k].is_finite() {
                let _ = write!(points, "{:.2},{:.2} ", x(t[k]), y(v[k].clamp(lo, hi)));
            }
        }
        let stroke = if *dashed {
            "#000"
        } else {
            PALETTE[colour % PALETTE.len()]
        };
        if !dashed {
            colour += 1;
        }
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5"{dash} points="{}"/>"#,
            points.trim_end()
        );
        let ly = panel.top + 14.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{stroke}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            escape(name)
        );
    }
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 {
        "0".into()
    } else if !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
