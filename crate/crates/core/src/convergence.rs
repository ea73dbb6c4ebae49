//! Convergence diagnostics for the elevated polygons: coefficient error at the
//! η-nodes, Hausdorff distance to the curve, log-log rate fits, the gap probe
//! witnessing non-convergence and η-node density.

use serde::{Deserialize, Serialize};

use crate::elevation::{elevate_once, elevate_to, ControlPolygon, StorePolicy};
use crate::error::{Error, Result};
use crate::exponents::{eta_nodes, gap_product, muntz_condition, ExponentSequence, MuntzReport};
use crate::gelfond::GelfondCurve;
use crate::scalar::Real;

/// Point sets larger than this are strided down before the brute-force Hausdorff pass.
pub const HAUSDORFF_CAP: usize = 2000;

/// Tail spacing of the gap-probe polygon: `P_j = 1 + STEP (j - 1)` for `j >= 2`.
pub const PROBE_TAIL_STEP: f64 = 0.1;

fn curve_sequence<T: Real>(curve: &GelfondCurve<T>, seq: &ExponentSequence<T>, m: usize) -> Result<ExponentSequence<T>> {
    let n = curve.degree();
    if m < n.max(1) {
        return Err(Error::IndexOutOfRange { index: m as i64, max: n.max(1) as i64 });
    }
    let full = seq.extend(m)?;
    if let Some(index) = curve.exponents().prefix_mismatch(&full) {
        return Err(Error::PrefixMismatch { index });
    }
    Ok(full)
}

/// Curve parameters `η_i(Λ_m)^{1/r_1}`, `i = 0..=m`.
pub fn eta_parameters<T: Real>(seq_m: &ExponentSequence<T>) -> Result<Vec<T>> {
    let inv_r1 = T::one() / *seq_m.r(1);
    Ok(eta_nodes(seq_m, 0)?.into_iter().map(|e| e.powf(inv_r1)).collect())
}

/// `max_i max_c |b^m_{i,c} - P_c(η_i(Λ_m)^{1/r_1})|` for an elevated polygon at last index `m`.
fn coefficient_error_at<T: Real>(curve: &GelfondCurve<T>, seq_m: &ExponentSequence<T>, elevated: &ControlPolygon<T>) -> Result<T> {
    let params = eta_parameters(seq_m)?;
    let mut worst = T::zero();
    for (i, &x) in params.iter().enumerate() {
        let p = curve.eval(x)?;
        for (a, b) in p.iter().zip(elevated.point(i)) {
            worst = worst.max((*a - *b).abs());
        }
    }
    Ok(worst)
}

/// Distance between the elevated control points and the curve at the η-nodes.
pub fn coefficient_error<T: Real>(curve: &GelfondCurve<T>, seq: &ExponentSequence<T>, m: usize) -> Result<T> {
    let seq_m = curve_sequence(curve, seq, m)?;
    let elevated = elevate_to(curve.control_points(), &seq_m, m, StorePolicy::Ends)?;
    coefficient_error_at(curve, &seq_m, elevated.last())
}

/// At most `cap` rows of a flat point list, evenly strided, end points kept.
fn subsample<T: Real>(coords: &[T], dim: usize, cap: usize) -> Vec<T> {
    let len = coords.len() / dim;
    if len <= cap {
        return coords.to_vec();
    }
    let mut out = Vec::with_capacity(cap * dim);
    for k in 0..cap {
        let i = (k * (len - 1)) / (cap - 1);
        out.extend_from_slice(&coords[i * dim..(i + 1) * dim]);
    }
    out
}

fn directed<T: Real>(from: &[T], to: &[T], dim: usize) -> T {
    let mut worst = T::zero();
    for p in from.chunks(dim) {
        let mut best = T::infinity();
        for q in to.chunks(dim) {
            let d2 = p.iter().zip(q).fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
            if d2 < best {
                best = d2;
            }
        }
        worst = worst.max(best);
    }
    worst.sqrt()
}

/// Symmetric Hausdorff distance between two flat point sets of dimension `dim`.
pub fn point_set_hausdorff<T: Real>(a: &[T], b: &[T], dim: usize) -> T {
    if a.is_empty() || b.is_empty() {
        return T::infinity();
    }
    directed(a, b, dim).max(directed(b, a, dim))
}

/// Polygon vertices plus points along each edge, at least `samples` in total.
/// Edges are subdivided in proportion to their length, so a single long edge
/// among many short ones is still resolved.
pub fn densify<T: Real>(poly: &ControlPolygon<T>, samples: usize) -> Vec<T> {
    let edges = poly.len() - 1;
    if edges == 0 {
        return poly.coords().to_vec();
    }
    let lengths: Vec<T> = (0..edges).map(|e| dist(poly.point(e), poly.point(e + 1))).collect();
    let total = lengths.iter().fold(T::zero(), |acc, &l| acc + l);
    let budget = T::from_count(samples.max(edges + 1) - 1);
    let mut out = Vec::new();
    for (e, &len) in lengths.iter().enumerate() {
        let pieces = if total > T::zero() {
            (len / total * budget).ceil().to_usize().unwrap_or(1).max(1)
        } else {
            1
        };
        let (a, b) = (poly.point(e), poly.point(e + 1));
        for s in 0..pieces {
            let w = T::from_count(s) / T::from_count(pieces);
            out.extend(a.iter().zip(b).map(|(&x, &y)| x + w * (y - x)));
        }
    }
    out.extend_from_slice(poly.last());
    out
}

fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

/// Squared distance from `p` to the segment `[a, b]`.
fn segment_dist2<T: Real>(p: &[T], a: &[T], b: &[T]) -> T {
    let mut ab2 = T::zero();
    let mut dot = T::zero();
    for ((&pi, &ai), &bi) in p.iter().zip(a).zip(b) {
        ab2 = ab2 + (bi - ai) * (bi - ai);
        dot = dot + (pi - ai) * (bi - ai);
    }
    let w = if ab2 > T::zero() { (dot / ab2).max(T::zero()).min(T::one()) } else { T::zero() };
    p.iter().zip(a).zip(b).fold(T::zero(), |acc, ((&pi, &ai), &bi)| {
        let d = pi - (ai + w * (bi - ai));
        acc + d * d
    })
}

/// Largest distance from a point of `from` to the polyline through `to`.
fn directed_to_polyline<T: Real>(from: &[T], to: &[T], dim: usize) -> T {
    let verts: Vec<&[T]> = to.chunks(dim).collect();
    if verts.len() == 1 {
        return directed(from, to, dim);
    }
    let mut worst = T::zero();
    for p in from.chunks(dim) {
        let best = verts
            .windows(2)
            .map(|w| segment_dist2(p, w[0], w[1]))
            .fold(T::infinity(), |acc, d| acc.min(d));
        worst = worst.max(best);
    }
    worst.sqrt()
}

/// Symmetric Hausdorff distance between two polylines given as flat vertex
/// lists, measured from the vertices of each to the segments of the other.
pub fn polyline_hausdorff<T: Real>(a: &[T], b: &[T], dim: usize) -> T {
    if a.is_empty() || b.is_empty() {
        return T::infinity();
    }
    directed_to_polyline(a, b, dim).max(directed_to_polyline(b, a, dim))
}

fn uniform_grid<T: Real>(samples: usize) -> Vec<T> {
    let last = T::from_count(samples - 1);
    (0..samples).map(|i| T::from_count(i) / last).collect()
}

/// Hausdorff distance between the densified polygon and the curve sampled at
/// `samples` uniform parameters plus `extra_params`.
pub fn hausdorff_with_params<T: Real>(
    poly: &ControlPolygon<T>,
    curve: &GelfondCurve<T>,
    samples: usize,
    extra_params: &[T],
) -> Result<T> {
    if samples < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 samples, got {samples}")));
    }
    let dim = poly.dim();
    let mut params = uniform_grid::<T>(samples);
    params.extend_from_slice(extra_params);
    params.sort_by(|a, b| a.partial_cmp(b).expect("finite parameters"));
    let curve_pts = subsample(&curve.sample(&params)?, dim, HAUSDORFF_CAP);
    let poly_pts = subsample(&densify(poly, samples), dim, HAUSDORFF_CAP);
    Ok(polyline_hausdorff(&poly_pts, &curve_pts, dim))
}

pub fn hausdorff_distance<T: Real>(poly: &ControlPolygon<T>, curve: &GelfondCurve<T>, samples: usize) -> Result<T> {
    hausdorff_with_params(poly, curve, samples, &[])
}

/// Per-level diagnostics for one elevation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub levels: Vec<usize>,
    pub coeff_error: Vec<f64>,
    pub hausdorff: Vec<f64>,
    /// `∏_{j=2}^{m} (1 - r_1/r_j)` at each level.
    pub delta_partial: Vec<f64>,
    /// Largest gap between consecutive η-node parameters at each level.
    pub max_eta_gap: Vec<f64>,
    pub muntz: Option<MuntzReport>,
}

/// One CSV row of a [`ConvergenceReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub m: usize,
    pub coeff_error: f64,
    pub hausdorff: f64,
    pub delta_partial: f64,
    pub max_eta_gap: f64,
}

impl ConvergenceReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        (0..self.levels.len())
            .map(|i| ReportRow {
                m: self.levels[i],
                coeff_error: self.coeff_error[i],
                hausdorff: self.hausdorff[i],
                delta_partial: self.delta_partial[i],
                max_eta_gap: self.max_eta_gap[i],
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Uniform curve samples (and minimum densified polygon points) for Hausdorff.
    pub samples: usize,
    pub hausdorff: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { samples: 200, hausdorff: true }
    }
}

/// Elevates the curve's polygon once through all requested levels, measuring at each.
///
/// `levels` are target last indices; they must be strictly increasing and `>= max(n, 1)`.
pub fn convergence_report<T: Real>(
    curve: &GelfondCurve<T>,
    seq: &ExponentSequence<T>,
    levels: &[usize],
    opts: ReportOptions,
) -> Result<ConvergenceReport> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InsufficientData("levels must be strictly increasing".into()));
    }
    let Some(&top) = levels.last() else {
        return Err(Error::InsufficientData("no levels requested".into()));
    };
    let full = curve_sequence(curve, seq, top)?;
    if let Some(&first) = levels.first() {
        curve_sequence(curve, seq, first)?;
    }
    let mut report = ConvergenceReport {
        levels: levels.to_vec(),
        coeff_error: Vec::with_capacity(levels.len()),
        hausdorff: Vec::with_capacity(levels.len()),
        delta_partial: Vec::with_capacity(levels.len()),
        max_eta_gap: Vec::with_capacity(levels.len()),
        muntz: seq.generator().map(muntz_condition),
    };
    let mut poly = curve.control_points().clone();
    for &m in levels {
        while poly.len() < m + 1 {
            poly = elevate_once(&poly, &full)?;
        }
        let seq_m = full.extend(m)?;
        let params = eta_parameters(&seq_m)?;
        report.coeff_error.push(coefficient_error_at(curve, &seq_m, &poly)?.to_f64_lossy());
        report.hausdorff.push(if opts.hausdorff {
            hausdorff_with_params(&poly, curve, opts.samples, &params)?.to_f64_lossy()
        } else {
            f64::NAN
        });
        report.delta_partial.push(gap_product(&full, 2, m)?.to_f64_lossy());
        report.max_eta_gap.push(max_gap(&params).0.to_f64_lossy());
    }
    Ok(report)
}

/// Least-squares slope of `ln(coeff_error)` against `ln(m)` over levels with positive error.
pub fn rate_estimate(report: &ConvergenceReport) -> Result<f64> {
    let points: Vec<(f64, f64)> = report
        .levels
        .iter()
        .zip(&report.coeff_error)
        .filter(|(&m, &e)| m > 0 && e > 0.0 && e.is_finite())
        .map(|(&m, &e)| ((m as f64).ln(), e.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!("{} levels with positive error, need 3", points.len())));
    }
    let count = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / count;
    let my = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapProbe {
    /// The second elevated coefficient `b_1^m`.
    pub b1: f64,
    /// `∏_{j=n+1}^{m} (1 - r_1/r_j)`, which `b_1^m` equals in the probe configuration.
    pub delta_partial: f64,
    /// `min_i |b_i^m - delta_partial/2|`.
    pub min_distance_to_probe: f64,
}

/// The scalar polygon `P_0 = 0, P_1 = 1, P_j = 1 + 0.1 (j - 1)`.
pub fn probe_polygon<T: Real>(n: usize) -> Result<ControlPolygon<T>> {
    let step = T::lit(PROBE_TAIL_STEP);
    let values = (0..=n)
        .map(|j| if j == 0 { T::zero() } else { T::one() + step * T::from_count(j - 1) })
        .collect();
    ControlPolygon::from_scalars(values)
}

/// Elevates the probe polygon of length `n + 1` to last index `m`.
pub fn gap_probe<T: Real>(seq: &ExponentSequence<T>, n: usize, m: usize) -> Result<GapProbe> {
    if n == 0 || m < n {
        return Err(Error::IndexOutOfRange { index: m as i64, max: n as i64 });
    }
    let poly = probe_polygon::<T>(n)?;
    let trace = elevate_to(&poly, seq, m, StorePolicy::Ends)?;
    let b = trace.last().coords();
    let delta = gap_product(&trace.exponents, n + 1, m)?;
    let probe = delta / T::lit(2.0);
    let min_distance = b.iter().map(|&v| (v - probe).abs()).fold(T::infinity(), T::min);
    Ok(GapProbe {
        b1: b[1].to_f64_lossy(),
        delta_partial: delta.to_f64_lossy(),
        min_distance_to_probe: min_distance.to_f64_lossy(),
    })
}

/// `(gap, left end)` of the widest interval between consecutive sorted values.
fn max_gap<T: Real>(sorted: &[T]) -> (T, T) {
    sorted
        .windows(2)
        .map(|w| (w[1] - w[0], w[0]))
        .fold((T::zero(), T::zero()), |best, cur| if cur.0 > best.0 { cur } else { best })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub m: usize,
    /// `η_i(Λ_m)^{1/r_1}`, nondecreasing, from 0 to 1.
    pub nodes: Vec<f64>,
    pub max_gap: f64,
    /// Left end of the largest empty sub-interval.
    pub max_gap_start: f64,
}

impl DensityReport {
    /// Node counts over `bins` equal sub-intervals of `[0, 1]`.
    pub fn histogram(&self, bins: usize) -> Vec<usize> {
        let mut counts = vec![0; bins.max(1)];
        for &x in &self.nodes {
            let b = ((x * bins as f64) as usize).min(counts.len() - 1);
            counts[b] += 1;
        }
        counts
    }
}

pub fn density_report<T: Real>(seq: &ExponentSequence<T>, m: usize) -> Result<DensityReport> {
    let seq_m = seq.extend(m)?;
    let params = eta_parameters(&seq_m)?;
    let (gap, start) = max_gap(&params);
    Ok(DensityReport {
        m,
        nodes: params.iter().map(|x| x.to_f64_lossy()).collect(),
        max_gap: gap.to_f64_lossy(),
        max_gap_start: start.to_f64_lossy(),
    })
}
