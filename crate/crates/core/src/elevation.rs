//! The corner-cutting scheme: each step keeps the end points and replaces
//! `P_i` by `(r_i/r_L) P_{i-1} + (1 - r_i/r_L) P_i`, where `L` is the current
//! polygon's last index plus one. It is exactly dimension elevation of a
//! Gelfond-Bézier curve from `E_{Λ_{L-1}}` to `E_{Λ_L}`.

use crate::error::{Error, Result};
use crate::exponents::ExponentSequence;
use crate::scalar::Scalar;

/// Above this target index only geometric checkpoints are stored by default.
pub const FULL_TRACE_LIMIT: usize = 2000;

/// Points in `R^s`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolygon<T> {
    dim: usize,
    coords: Vec<T>,
    level: usize,
}

impl<T: Scalar> ControlPolygon<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::EmptyPolygon);
        }
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::LengthMismatch { points: bad.len(), exponents: dim });
        }
        Self::from_flat(dim, points.into_iter().flatten().collect())
    }

    pub fn from_flat(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::EmptyPolygon);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite_scalar()) {
            return Err(Error::NonFiniteCoordinate { index });
        }
        Ok(ControlPolygon { dim, coords, level: 0 })
    }

    /// Scalar control values as a one-dimensional polygon.
    pub fn from_scalars(values: Vec<T>) -> Result<Self> {
        Self::from_flat(1, values)
    }

    pub fn from_f64(points: &[Vec<f64>]) -> Result<Self> {
        Self::new(points.iter().map(|p| p.iter().map(|&c| T::lit(c)).collect()).collect())
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Number of elevation steps applied to the original polygon.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks(self.dim)
    }

    pub fn first(&self) -> &[T] {
        self.point(0)
    }

    pub fn last(&self) -> &[T] {
        self.point(self.len() - 1)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// The `c`-th coordinate of every point.
    pub fn coordinate(&self, c: usize) -> Vec<T> {
        self.points().map(|p| p[c].clone()).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.points().map(|p| p.iter().map(Scalar::to_f64_lossy).collect()).collect()
    }
}

/// One corner-cutting pass over flat coordinates.
fn cut_corners<T: Scalar>(coords: &[T], dim: usize, r: &[T]) -> Result<Vec<T>> {
    let len = coords.len() / dim;
    if r.len() <= len {
        return Err(Error::SequenceTooShort { required: len, available: r.len() });
    }
    let top = &r[len];
    let mut out = Vec::with_capacity(coords.len() + dim);
    out.extend_from_slice(&coords[..dim]);
    for i in 1..len {
        let w = r[i].clone() / top.clone();
        if !(w > T::zero() && w < T::one()) {
            return Err(Error::WeightOutOfRange { index: i, weight: w.to_f64_lossy() });
        }
        let prev = &coords[(i - 1) * dim..i * dim];
        let cur = &coords[i * dim..(i + 1) * dim];
        // cur + w (prev - cur): coefficients w and 1 - w, exact for coincident points.
        out.extend(prev.iter().zip(cur).map(|(a, b)| b.clone() + w.clone() * (a.clone() - b.clone())));
    }
    out.extend_from_slice(&coords[(len - 1) * dim..]);
    Ok(out)
}

/// One elevation step; `seq` must contain the exponent `r_{len(poly)}`.
pub fn elevate_once<T: Scalar>(poly: &ControlPolygon<T>, seq: &ExponentSequence<T>) -> Result<ControlPolygon<T>> {
    let coords = cut_corners(&poly.coords, poly.dim, seq.values())?;
    Ok(ControlPolygon { dim: poly.dim, coords, level: poly.level + 1 })
}

/// Which intermediate polygons [`elevate_to`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StorePolicy {
    /// Every level up to [`FULL_TRACE_LIMIT`], geometric checkpoints beyond.
    #[default]
    Auto,
    /// Every `k`-th level (plus the first and the last).
    Every(usize),
    /// Last indices `n, 2n, 4n, ...` plus the final one.
    Checkpoints,
    /// Only the input and the final polygon.
    Ends,
}

impl StorePolicy {
    fn keeps(self, n: usize, index: usize, m: usize) -> bool {
        if index == n || index == m {
            return true;
        }
        match self {
            StorePolicy::Auto if m <= FULL_TRACE_LIMIT => true,
            StorePolicy::Auto | StorePolicy::Checkpoints => is_checkpoint(n, index),
            StorePolicy::Every(k) => k > 0 && (index - n).is_multiple_of(k),
            StorePolicy::Ends => false,
        }
    }
}

fn is_checkpoint(n: usize, index: usize) -> bool {
    let base = n.max(1);
    index.is_multiple_of(base) && (index / base).is_power_of_two()
}

/// Polygons produced by repeated elevation from last index `n` to `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationTrace<T> {
    pub polygons: Vec<ControlPolygon<T>>,
    pub exponents: ExponentSequence<T>,
}

impl<T: Scalar> ElevationTrace<T> {
    pub fn last(&self) -> &ControlPolygon<T> {
        self.polygons.last().expect("trace holds at least the input polygon")
    }
}

/// Elevates `poly` until it has `m + 1` points, extending `seq` as needed.
pub fn elevate_to<T: Scalar>(
    poly: &ControlPolygon<T>,
    seq: &ExponentSequence<T>,
    m: usize,
    policy: StorePolicy,
) -> Result<ElevationTrace<T>> {
    let n = poly.len() - 1;
    if m < n {
        return Err(Error::IndexOutOfRange { index: m as i64, max: n as i64 });
    }
    let exponents = seq.extend(m)?;
    if let Some(index) = seq.prefix_mismatch(&exponents) {
        return Err(Error::PrefixMismatch { index });
    }
    let mut polygons = vec![poly.clone()];
    let mut current = poly.clone();
    for index in n + 1..=m {
        current = elevate_once(&current, &exponents)?;
        if policy.keeps(n, index, m) {
            polygons.push(current.clone());
        }
    }
    Ok(ElevationTrace { polygons, exponents })
}

/// The elevated control values `b^m` of a scalar function.
pub fn elevate_coefficients<T: Scalar>(coeffs: &[T], seq: &ExponentSequence<T>, m: usize) -> Result<Vec<T>> {
    let poly = ControlPolygon::from_scalars(coeffs.to_vec())?;
    Ok(elevate_to(&poly, seq, m, StorePolicy::Ends)?.last().coords.clone())
}
