use muntz::{
    convergence_report, elevate_to, gap_delta, ConvergenceReport, Curve, Exponents, GapDelta, GeneratorSpec, Polygon,
    ReportOptions, StorePolicy, Trace,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, OutputKind};
use crate::error::{CliError, Result};

/// The quadrilateral every named figure starts from.
pub const DEFAULT_POLYGON: [[f64; 2]; 4] = [[0.0, 0.0], [0.25, 1.0], [0.75, 1.0], [1.0, 0.0]];

pub const FIGURES: [&str; 8] = ["fig1", "fig2", "fig3", "fig4", "fig4alt", "fig5a", "fig5b", "fig6"];

const DEFAULT_SAMPLES: usize = 200;

/// Parameters sampled along each reference curve in the SVG.
const CURVE_SAMPLES: usize = 401;

/// A fully specified run: elevate `polygon` along `generator`, compare against the reference curves.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub generator: GeneratorSpec,
    pub polygon: Polygon,
    pub iterations: usize,
    pub store: StorePolicy,
    pub samples: usize,
    /// Extra reference curves drawn over the same polygon (full exponent lists `0, r_1, ..., r_n`).
    pub extra_curves: Vec<Vec<f64>>,
    pub outputs: Vec<OutputKind>,
}

impl Experiment {
    pub fn named(name: &str, iterations: Option<usize>) -> Result<Self> {
        let prefix = |p: [f64; 3]| p.to_vec();
        let (generator, default_iterations, extra_curves) = match name {
            "fig1" => (GeneratorSpec::explicit(prefix([2.0, 5.0, 7.0]), vec![14.0]), 1, vec![]),
            "fig2" => (GeneratorSpec::linear(prefix([1.0, 2.0, 3.0]), 2.0, 0.0), 100, vec![]),
            "fig3" => (GeneratorSpec::power(prefix([1.0, 2.0, 3.0]), 2.0), 100, vec![]),
            "fig4" => (GeneratorSpec::linear(prefix([2.0, 4.0, 14.0]), 2.0, 10.0), 100, vec![]),
            "fig4alt" => (GeneratorSpec::linear(prefix([2.0, 4.0, 5.0]), 2.0, 0.0), 100, vec![]),
            "fig5a" => (GeneratorSpec::bounded(prefix([1.0, 2.0, 3.0]), 5.0), 100, vec![]),
            "fig5b" => (GeneratorSpec::bounded(prefix([1.0, 2.0, 3.0]), 50.0), 100, vec![]),
            "fig6" => (
                GeneratorSpec::linear(prefix([1.0, 2.0, 3.0]), 1.0, 0.0),
                0,
                vec![vec![0.0, 1.0, 2.0, 20.0], vec![0.0, 2.0, 50.0, 100.0]],
            ),
            other => {
                return Err(CliError::Config(format!("unknown figure `{other}`; expected one of {}", FIGURES.join(", "))))
            }
        };
        let points: Vec<Vec<f64>> = DEFAULT_POLYGON.iter().map(|p| p.to_vec()).collect();
        Ok(Experiment {
            name: name.to_string(),
            generator,
            polygon: Polygon::from_f64(&points)?,
            iterations: iterations.unwrap_or(default_iterations),
            store: StorePolicy::Auto,
            samples: DEFAULT_SAMPLES,
            extra_curves,
            outputs: OutputKind::ALL.to_vec(),
        })
    }

    pub fn from_config(name: &str, config: &ExperimentConfig) -> Result<Self> {
        let polygon = config.polygon()?;
        let outputs = match &config.outputs {
            Some(outputs) => {
                if outputs.contains(&OutputKind::Svg) && polygon.dim() < 2 {
                    return Err(CliError::Config("figure.svg needs control points of dimension >= 2".into()));
                }
                outputs.clone()
            }
            None => OutputKind::ALL.into_iter().filter(|&k| k != OutputKind::Svg || polygon.dim() >= 2).collect(),
        };
        let store = match config.store_every {
            Some(0) => return Err(CliError::Config("store_every must be positive".into())),
            Some(k) => StorePolicy::Every(k),
            None => StorePolicy::Auto,
        };
        let samples = config.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(CliError::Config("samples must be at least 2".into()));
        }
        Ok(Experiment {
            name: name.to_string(),
            generator: config.generator.clone(),
            polygon,
            iterations: config.iterations,
            store,
            samples,
            extra_curves: vec![],
            outputs,
        })
    }

    /// Elevates, measures and samples the reference curves. Deterministic.
    pub fn run(&self) -> Result<Outcome> {
        let seq = Exponents::from_generator(self.generator.clone())?;
        let n = self.polygon.len() - 1;
        let m = n + self.iterations;
        let trace = elevate_to(&self.polygon, &seq, m, self.store)?;

        let mut curves = vec![Curve::new(seq.extend(n)?, self.polygon.clone())?];
        for exps in &self.extra_curves {
            curves.push(Curve::new(Exponents::from_f64(exps)?, self.polygon.clone())?);
        }

        let levels: Vec<usize> = trace.polygons.iter().map(|p| p.len() - 1).filter(|&l| l >= n.max(1)).collect();
        let report = if levels.is_empty() {
            ConvergenceReport {
                levels: vec![],
                coeff_error: vec![],
                hausdorff: vec![],
                delta_partial: vec![],
                max_eta_gap: vec![],
                muntz: Some(muntz::muntz_condition(&self.generator)),
            }
        } else {
            let opts = ReportOptions { samples: self.samples, ..ReportOptions::default() };
            convergence_report(&curves[0], &seq, &levels, opts)?
        };
        let gap = if m >= 2 { gap_delta(&trace.exponents, m).ok() } else { None };

        let params: Vec<f64> = (0..CURVE_SAMPLES).map(|i| i as f64 / (CURVE_SAMPLES - 1) as f64).collect();
        let reference = curves
            .iter()
            .map(|c| {
                Ok(ReferenceCurve {
                    exponents: c.exponents().to_f64(),
                    points: c.sample(&params)?.chunks(c.dim()).map(|p| p.to_vec()).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Outcome { trace, report, gap, curves: reference })
    }
}

/// A reference curve sampled on a uniform parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceCurve {
    pub exponents: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub trace: Trace,
    pub report: ConvergenceReport,
    pub gap: Option<GapDelta>,
    pub curves: Vec<ReferenceCurve>,
}
