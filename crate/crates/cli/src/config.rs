use std::path::Path;

use muntz::{GeneratorSpec, Polygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// The artifacts an experiment can write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputKind {
    #[serde(rename = "polygons.csv")]
    Polygons,
    #[serde(rename = "report.csv")]
    ReportCsv,
    #[serde(rename = "report.json")]
    ReportJson,
    #[serde(rename = "figure.svg")]
    Svg,
}

impl OutputKind {
    pub const ALL: [OutputKind; 4] = [OutputKind::Polygons, OutputKind::ReportCsv, OutputKind::ReportJson, OutputKind::Svg];

    pub fn file_name(self) -> &'static str {
        match self {
            OutputKind::Polygons => "polygons.csv",
            OutputKind::ReportCsv => "report.csv",
            OutputKind::ReportJson => "report.json",
            OutputKind::Svg => "figure.svg",
        }
    }
}

fn default_dimension() -> usize {
    2
}

/// A config-driven experiment, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    /// One point per exponent `r_0..r_n`; drawn from `seed` when absent.
    #[serde(default)]
    pub control_points: Option<Vec<Vec<f64>>>,
    pub iterations: usize,
    /// Defaults to every artifact (the SVG only for `dimension >= 2`).
    #[serde(default)]
    pub outputs: Option<Vec<OutputKind>>,
    #[serde(default)]
    pub seed: u64,
    /// Dimension of randomly drawn control points.
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    /// Keep every k-th polygon instead of the default storage policy.
    #[serde(default)]
    pub store_every: Option<usize>,
    /// Curve samples per Hausdorff measurement.
    #[serde(default)]
    pub samples: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        parse_json(text, origin)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// The control polygon: the configured points, or `n + 1` seeded random points in `[0, 1]^dimension`.
    pub fn polygon(&self) -> Result<Polygon> {
        let needed = self.generator.prefix_len() + 1;
        let points = match &self.control_points {
            Some(points) => {
                if points.len() != needed {
                    return Err(CliError::Config(format!(
                        "control_points has {} points but the generator prefix needs {needed} (r_0 = 0 plus {} exponents)",
                        points.len(),
                        needed - 1
                    )));
                }
                points.clone()
            }
            None => {
                if self.dimension == 0 {
                    return Err(CliError::Config("dimension must be at least 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..needed).map(|_| (0..self.dimension).map(|_| rng.gen::<f64>()).collect()).collect()
            }
        };
        Ok(Polygon::from_f64(&points)?)
    }
}

/// Deserializes JSON, reporting the offending field path and position on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let field = err.path().to_string();
        let inner = err.into_inner();
        let (line, column) = (inner.line(), inner.column());
        let message = inner.to_string();
        let message = message.strip_suffix(&format!(" at line {line} column {column}")).unwrap_or(&message).to_string();
        CliError::ConfigParse { path: origin.to_string(), field, line, column, message }
    })
}
