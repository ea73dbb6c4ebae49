use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use muntz::{rate_estimate, ConvergenceReport, GapDelta, GeneratorSpec, MuntzReport, Polygon};
use serde::Serialize;

use crate::config::OutputKind;
use crate::error::{CliError, Result};
use crate::experiment::{Experiment, Outcome, ReferenceCurve};

/// Round-trip float formatting: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(path: &Path, err: csv::Error) -> CliError {
    CliError::io(path, err.into())
}

/// `level,index,x1..xs`, one row per point of every stored polygon.
pub fn write_polygons<W: Write>(out: W, polygons: &[Polygon]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dim = polygons.first().map_or(0, |p| p.dim());
    let mut header = vec!["level".to_string(), "index".to_string()];
    header.extend((1..=dim).map(|c| format!("x{c}")));
    w.write_record(&header)?;
    for poly in polygons {
        for (i, p) in poly.points().enumerate() {
            let mut row = vec![poly.level().to_string(), i.to_string()];
            row.extend(p.iter().map(|&x| fmt_float(x)));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `m,coeff_error,hausdorff,delta_partial,max_eta_gap`, one row per measured level.
pub fn write_report_csv<W: Write>(out: W, report: &ConvergenceReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "coeff_error", "hausdorff", "delta_partial", "max_eta_gap"])?;
    for r in report.rows() {
        w.write_record([
            r.m.to_string(),
            fmt_float(r.coeff_error),
            fmt_float(r.hausdorff),
            fmt_float(r.delta_partial),
            fmt_float(r.max_eta_gap),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    name: &'a str,
    generator: &'a GeneratorSpec,
    iterations: usize,
    control_points: Vec<Vec<f64>>,
    final_points: usize,
    exponents: Vec<f64>,
    levels: Vec<muntz::convergence::ReportRow>,
    rate_estimate: Option<f64>,
    muntz: Option<&'a MuntzReport>,
    gap_delta: Option<&'a GapDelta>,
    reference_curves: Vec<&'a [f64]>,
}

/// Summary of the run, including the Müntz verdict, as pretty-printed JSON.
pub fn report_json(experiment: &Experiment, outcome: &Outcome) -> String {
    let report = JsonReport {
        name: &experiment.name,
        generator: &experiment.generator,
        iterations: experiment.iterations,
        control_points: experiment.polygon.to_f64(),
        final_points: outcome.trace.last().len(),
        exponents: outcome.trace.exponents.to_f64(),
        levels: outcome.report.rows(),
        rate_estimate: rate_estimate(&outcome.report).ok(),
        muntz: outcome.report.muntz.as_ref(),
        gap_delta: outcome.gap.as_ref(),
        reference_curves: outcome.curves.iter().map(|c| c.exponents.as_slice()).collect(),
    };
    serde_json::to_string_pretty(&report).expect("report is plain data")
}

const SVG_SIZE: f64 = 800.0;
const SVG_MARGIN: f64 = 40.0;

/// Black polylines for the stored polygons (older levels fainter) under red reference curves.
pub fn render_svg(polygons: &[Polygon], curves: &[ReferenceCurve]) -> String {
    let all = polygons
        .iter()
        .flat_map(|p| p.points().map(|q| (q[0], q[1])).collect::<Vec<_>>())
        .chain(curves.iter().flat_map(|c| c.points.iter().map(|q| (q[0], q[1]))));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SVG_SIZE - 2.0 * SVG_MARGIN) / span;
    let map = |x: f64, y: f64| (SVG_MARGIN + (x - x0) * scale, SVG_SIZE - SVG_MARGIN - (y - y0) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let count = polygons.len();
    for (k, poly) in polygons.iter().enumerate() {
        let opacity = if k + 1 == count { 1.0 } else { 0.15 + 0.6 * k as f64 / count as f64 };
        let points: Vec<String> = poly
            .points()
            .map(|q| {
                let (x, y) = map(q[0], q[1]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="polygon" data-level="{}" fill="none" stroke="black" stroke-width="1" stroke-opacity="{opacity:.3}" points="{}"/>"#,
            poly.level(),
            points.join(" ")
        );
    }
    for (k, curve) in curves.iter().enumerate() {
        let mut d = String::new();
        for (i, q) in curve.points.iter().enumerate() {
            let (x, y) = map(q[0], q[1]);
            let _ = write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
        }
        let label: Vec<String> = curve.exponents.iter().map(|r| r.to_string()).collect();
        let dash = ["none", "8 4", "2 3"][k % 3];
        let _ = writeln!(
            s,
            r#"<path class="curve" data-exponents="{}" fill="none" stroke="red" stroke-width="1.5" stroke-dasharray="{dash}" d="{}"/>"#,
            label.join(" "),
            d.trim_end()
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes the experiment's requested artifacts into `dir`, returning the paths written.
pub fn write_outputs(dir: &Path, experiment: &Experiment, outcome: &Outcome) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for &kind in &experiment.outputs {
        let path = dir.join(kind.file_name());
        let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut file = std::io::BufWriter::new(file);
        match kind {
            OutputKind::Polygons => write_polygons(&mut file, &outcome.trace.polygons).map_err(|e| csv_error(&path, e))?,
            OutputKind::ReportCsv => write_report_csv(&mut file, &outcome.report).map_err(|e| csv_error(&path, e))?,
            OutputKind::ReportJson => {
                let text = report_json(experiment, outcome) + "\n";
                file.write_all(text.as_bytes()).map_err(|e| CliError::io(&path, e))?;
            }
            OutputKind::Svg => {
                let svg = render_svg(&outcome.trace.polygons, &outcome.curves);
                file.write_all(svg.as_bytes()).map_err(|e| CliError::io(&path, e))?;
            }
        }
        file.flush().map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
