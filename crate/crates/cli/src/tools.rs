//! The `basis` and `muntz` inspection verbs.

use std::io::Write;

use muntz::exponents::PARTIAL_SUM_HORIZONS;
use muntz::{basis_values, gap_delta, muntz_condition, Exponents, GapDelta, GeneratorSpec, MuntzReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::fmt_float;

/// Accepted shapes of a basis input file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum LambdaFile {
    List(Vec<f64>),
    Object { exponents: Vec<f64> },
}

impl LambdaFile {
    pub fn exponents(&self) -> &[f64] {
        match self {
            LambdaFile::List(v) | LambdaFile::Object { exponents: v } => v,
        }
    }
}

/// CSV `t,H0,...,Hn` of the basis on `grid` uniform parameters in `[0, 1]`.
pub fn write_basis_table<W: Write>(out: W, exponents: &[f64], grid: usize) -> Result<()> {
    if grid < 2 {
        return Err(CliError::Config(format!("--t-grid must be at least 2, got {grid}")));
    }
    let seq = Exponents::from_f64(exponents)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((0..seq.len()).map(|k| format!("H{k}")));
    let io = |e: csv::Error| CliError::io("<stdout>", e.into());
    w.write_record(&header).map_err(io)?;
    for i in 0..grid {
        let t = i as f64 / (grid - 1) as f64;
        let mut row = vec![fmt_float(t)];
        row.extend(basis_values(&seq, t)?.into_iter().map(fmt_float));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io("<stdout>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct MuntzSummary {
    pub generator: GeneratorSpec,
    #[serde(flatten)]
    pub report: MuntzReport,
    /// `∏_{j=2}^{m} (1 - r_1/r_j)` at the largest horizon the generator reaches.
    pub gap_delta: Option<GapDelta>,
}

/// Verdict, partial sums and gap product for a generator.
pub fn muntz_summary(generator: GeneratorSpec) -> Result<MuntzSummary> {
    generator.validate()?;
    let report = muntz_condition(&generator);
    let horizon = PARTIAL_SUM_HORIZONS[PARTIAL_SUM_HORIZONS.len() - 1];
    let m = generator.max_index().map_or(horizon, |max| max.min(horizon));
    let gap = if m >= 2 {
        let seq = Exponents::from_generator(generator.clone())?.extend(m)?;
        Some(gap_delta(&seq, m)?)
    } else {
        None
    };
    Ok(MuntzSummary { generator, report, gap_delta: gap })
}
