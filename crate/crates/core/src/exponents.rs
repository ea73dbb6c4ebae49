//! Müntz exponent sequences `(0 = r_0, r_1, ..., r_m)`, their generators, the
//! difference operator, the η-node products and the Müntz-condition verdicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Minimum separation between consecutive exponents.
pub const GAP_MIN: f64 = 1e-9;

/// Below this factor size η products switch to a sum of logarithms.
pub const FACTOR_UNDERFLOW_THRESHOLD: f64 = 1e-3;

/// Partial-sum horizons reported as evidence by [`muntz_condition`].
pub const PARTIAL_SUM_HORIZONS: [usize; 3] = [100, 1_000, 10_000];

/// Closed-form continuation rule for `r_j`, `j > prefix.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum GeneratorKind {
    /// `r_j = a j + b`
    Linear { a: f64, b: f64 },
    /// `r_j = j^p`
    Power { p: f64 },
    /// `r_j = c - 1/j`
    Bounded { c: f64 },
    /// `r_{n0+1}, r_{n0+2}, ...` listed verbatim.
    Explicit { values: Vec<f64> },
}

/// A generator: explicit leading exponents `r_1..r_{n0}` plus a continuation rule.
///
/// Serialized as `{"prefix": [...], "kind": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub prefix: Vec<f64>,
    #[serde(flatten)]
    pub kind: GeneratorKind,
}

impl GeneratorSpec {
    pub fn new(prefix: Vec<f64>, kind: GeneratorKind) -> Self {
        GeneratorSpec { prefix, kind }
    }

    pub fn linear(prefix: Vec<f64>, a: f64, b: f64) -> Self {
        Self::new(prefix, GeneratorKind::Linear { a, b })
    }

    pub fn power(prefix: Vec<f64>, p: f64) -> Self {
        Self::new(prefix, GeneratorKind::Power { p })
    }

    pub fn bounded(prefix: Vec<f64>, c: f64) -> Self {
        Self::new(prefix, GeneratorKind::Bounded { c })
    }

    pub fn explicit(prefix: Vec<f64>, values: Vec<f64>) -> Self {
        Self::new(prefix, GeneratorKind::Explicit { values })
    }

    /// `r_j = j` for every `j`.
    pub fn classical() -> Self {
        Self::linear(Vec::new(), 1.0, 0.0)
    }

    /// Number of explicitly given exponents after `r_0`.
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    /// Largest index this generator can produce, if bounded.
    pub fn max_index(&self) -> Option<usize> {
        match &self.kind {
            GeneratorKind::Explicit { values } => Some(self.prefix.len() + values.len()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        if self.prefix.iter().any(|v| !v.is_finite()) {
            return bad("prefix contains a non-finite value".into());
        }
        match &self.kind {
            GeneratorKind::Linear { a, b } => {
                if !(a.is_finite() && b.is_finite()) || *a <= 0.0 {
                    return bad(format!("linear needs finite a > 0 and finite b, got a={a}, b={b}"));
                }
            }
            GeneratorKind::Power { p } => {
                if !p.is_finite() || *p <= 0.0 {
                    return bad(format!("power needs finite p > 0, got p={p}"));
                }
            }
            GeneratorKind::Bounded { c } => {
                if !c.is_finite() {
                    return bad(format!("bounded needs a finite c, got c={c}"));
                }
            }
            GeneratorKind::Explicit { values } => {
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("explicit values contain a non-finite entry".into());
                }
            }
        }
        Ok(())
    }

    /// `r_j` for `j >= 1`, computed in the target scalar type.
    pub fn value_at<T: Scalar>(&self, j: usize) -> Option<T> {
        if j == 0 {
            return Some(T::zero());
        }
        if j <= self.prefix.len() {
            return Some(T::lit(self.prefix[j - 1]));
        }
        let jt = T::from_count(j);
        match &self.kind {
            GeneratorKind::Linear { a, b } => Some(T::lit(*a) * jt + T::lit(*b)),
            GeneratorKind::Power { p } => Some(int_power(jt, *p).unwrap_or_else(|| T::lit((j as f64).powf(*p)))),
            GeneratorKind::Bounded { c } => Some(T::lit(*c) - T::one() / jt),
            GeneratorKind::Explicit { values } => values.get(j - self.prefix.len() - 1).map(|&v| T::lit(v)),
        }
    }

    /// Materializes `Λ_m = (0, r_1, ..., r_m)`.
    pub fn materialize<T: Scalar>(&self, m: usize) -> Result<ExponentSequence<T>> {
        ExponentSequence::from_generator(self.clone())?.extend(m)
    }
}

/// `base^p` by repeated multiplication when `p` is a small nonnegative integer,
/// so exact scalar types stay exact.
fn int_power<T: Scalar>(base: T, p: f64) -> Option<T> {
    if p.fract() != 0.0 || !(0.0..=64.0).contains(&p) {
        return None;
    }
    let mut acc = T::one();
    for _ in 0..p as u32 {
        acc = acc * base.clone();
    }
    Some(acc)
}

/// `Λ = (0 = r_0, r_1, ..., r_m)`: strictly increasing, separated by at least [`GAP_MIN`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSequence<T> {
    values: Vec<T>,
    generator: Option<GeneratorSpec>,
}

impl<T: Scalar> ExponentSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        validate_values(&values)?;
        Ok(ExponentSequence { values, generator: None })
    }

    pub fn from_f64(values: &[f64]) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidExponent { index, value });
        }
        Self::new(values.iter().map(|&v| T::lit(v)).collect())
    }

    /// `(0, 1, ..., n)`.
    pub fn classical(n: usize) -> Self {
        ExponentSequence { values: (0..=n).map(T::from_count).collect(), generator: None }
    }

    /// The sequence `(0, prefix...)` with `gen` attached for later extension.
    pub fn from_generator(gen: GeneratorSpec) -> Result<Self> {
        gen.validate()?;
        let mut values = Vec::with_capacity(gen.prefix.len() + 1);
        values.push(T::zero());
        values.extend(gen.prefix.iter().map(|&v| T::lit(v)));
        validate_values(&values)?;
        Ok(ExponentSequence { values, generator: Some(gen) })
    }

    pub fn with_generator(mut self, gen: GeneratorSpec) -> Result<Self> {
        gen.validate()?;
        self.generator = Some(gen);
        Ok(self)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn generator(&self) -> Option<&GeneratorSpec> {
        self.generator.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `m` for `Λ_m`.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn r(&self, i: usize) -> &T {
        &self.values[i]
    }

    /// `Λ_m`: exactly `m + 1` values, generated on demand. Stored values are kept as is.
    pub fn extend(&self, m: usize) -> Result<Self> {
        let wanted = m + 1;
        if wanted <= self.values.len() {
            return Ok(ExponentSequence {
                values: self.values[..wanted].to_vec(),
                generator: self.generator.clone(),
            });
        }
        let gen = self.generator.as_ref().ok_or(Error::NoGenerator {
            requested: wanted,
            available: self.values.len(),
        })?;
        let mut values = self.values.clone();
        values.reserve(wanted - values.len());
        for j in values.len()..wanted {
            let next: T = gen.value_at(j).ok_or(Error::GeneratorExhausted {
                requested: wanted,
                available: values.len(),
            })?;
            let prev = &values[j - 1];
            if !next.is_finite_scalar() || next <= *prev {
                return Err(Error::MonotonicityViolation {
                    index: j,
                    prev: prev.to_f64_lossy(),
                    next: next.to_f64_lossy(),
                });
            }
            if next.clone() - prev.clone() < T::lit(GAP_MIN) {
                return Err(Error::NodeCollision {
                    index: j,
                    gap: (next - prev.clone()).to_f64_lossy(),
                    min: GAP_MIN,
                });
            }
            values.push(next);
        }
        Ok(ExponentSequence { values, generator: self.generator.clone() })
    }

    /// `Δ^k Λ_m = (0, r_{k+1} - r_k, ..., r_m - r_k)`.
    pub fn delta(&self, k: usize) -> Result<Self> {
        let m = self.last_index();
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= m {
            return Err(Error::OrderOutOfRange { order: k, last: m });
        }
        let base = &self.values[k];
        let mut values = Vec::with_capacity(m - k + 1);
        values.push(T::zero());
        values.extend(self.values[k + 1..].iter().map(|r| r.clone() - base.clone()));
        Self::new(values)
    }

    /// Every exponent multiplied by `alpha > 0`.
    pub fn scaled(&self, alpha: T) -> Result<Self> {
        Self::new(self.values.iter().map(|r| r.clone() * alpha.clone()).collect())
    }

    /// Index of the first disagreement with `other`, or `None` if `self` is a prefix of it.
    pub fn prefix_mismatch(&self, other: &Self) -> Option<usize> {
        if self.values.len() > other.values.len() {
            return Some(other.values.len());
        }
        self.values.iter().zip(&other.values).position(|(a, b)| a != b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64_lossy).collect()
    }
}

fn validate_values<T: Scalar>(values: &[T]) -> Result<()> {
    let first = values.first().ok_or(Error::EmptyNodes)?;
    if !first.is_zero() {
        return Err(Error::NonZeroStart(first.to_f64_lossy()));
    }
    let gap_min = T::lit(GAP_MIN);
    for (index, v) in values.iter().enumerate() {
        if !v.is_finite_scalar() || *v < T::zero() {
            return Err(Error::InvalidExponent { index, value: v.to_f64_lossy() });
        }
        if index == 0 {
            continue;
        }
        let prev = &values[index - 1];
        if v <= prev {
            return Err(Error::MonotonicityViolation {
                index,
                prev: prev.to_f64_lossy(),
                next: v.to_f64_lossy(),
            });
        }
        let gap = v.clone() - prev.clone();
        if gap < gap_min {
            return Err(Error::NodeCollision { index, gap: gap.to_f64_lossy(), min: GAP_MIN });
        }
    }
    Ok(())
}

/// Ratios `q_j = (r_{k+1} - r_k)/(r_j - r_k)` for `j = k+2..=m`; the η factors are `1 - q_j`.
fn eta_ratios<T: Real>(values: &[T], k: usize) -> Vec<T> {
    let m = values.len() - 1;
    let lead = values[k + 1] - values[k];
    (k + 2..=m).map(|j| lead / (values[j] - values[k])).collect()
}

fn check_order(m: usize, k: usize) -> Result<()> {
    if m == 0 || k > m - 1 {
        return Err(Error::OrderOutOfRange { order: k, last: m });
    }
    Ok(())
}

/// All η-nodes `η_i^{(k)}(Λ_m)` for `i = 0..=m-k`, nondecreasing in `i`.
///
/// These are the control coefficients of `t^{r_{k+1}-r_k}` in the
/// Gelfond-Bernstein basis of `Δ^k Λ_m`.
pub fn eta_nodes<T: Real>(seq: &ExponentSequence<T>, k: usize) -> Result<Vec<T>> {
    let m = seq.last_index();
    check_order(m, k)?;
    let count = m - k + 1;
    let ratios = eta_ratios(seq.values(), k);
    let threshold = T::lit(FACTOR_UNDERFLOW_THRESHOLD);
    let log_space = ratios.iter().any(|q| T::one() - *q < threshold);

    let mut out = vec![T::zero(); count];
    out[count - 1] = T::one();
    // ratios[j - k - 2] belongs to r_j; η_i picks j = i+k+1..=m.
    if log_space {
        let mut acc = T::zero();
        for i in (1..count - 1).rev() {
            acc = acc + (-ratios[i - 1]).ln_1p();
            out[i] = acc.exp();
        }
    } else {
        let mut acc = T::one();
        for i in (1..count - 1).rev() {
            acc = acc * (T::one() - ratios[i - 1]);
            out[i] = acc;
        }
    }
    Ok(out)
}

/// A single η-node; `i <= 0` gives 0 and `i = m - k` gives 1.
pub fn eta<T: Real>(seq: &ExponentSequence<T>, k: usize, i: i64) -> Result<T> {
    let m = seq.last_index();
    check_order(m, k)?;
    let top = (m - k) as i64;
    if i > top {
        return Err(Error::IndexOutOfRange { index: i, max: top });
    }
    if i <= 0 {
        return Ok(T::zero());
    }
    if i == top {
        return Ok(T::one());
    }
    Ok(eta_nodes(seq, k)?[i as usize])
}

/// Outcome of the reciprocal-sum test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Diverges,
    Converges,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    /// Requested horizon `N`.
    pub horizon: usize,
    /// Terms actually summed (smaller than `horizon` for short explicit lists).
    pub terms: usize,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuntzReport {
    pub verdict: Verdict,
    /// `lim r_s` is certified finite (the scheme's divergence hypothesis fails).
    pub limit_finite: bool,
    /// `lim r_s = ∞` is certified for this generator kind.
    pub limit_infinite_certified: bool,
    pub partial_sums: Vec<PartialSum>,
    pub warning: Option<String>,
}

/// Analytic verdict on `Σ 1/r_i` by generator kind; partial sums are evidence only.
pub fn muntz_condition(gen: &GeneratorSpec) -> MuntzReport {
    let (verdict, limit_finite, limit_infinite_certified) = match &gen.kind {
        GeneratorKind::Linear { .. } => (Verdict::Diverges, false, true),
        GeneratorKind::Power { p } if *p > 1.0 => (Verdict::Converges, false, true),
        GeneratorKind::Power { .. } => (Verdict::Diverges, false, true),
        GeneratorKind::Bounded { .. } => (Verdict::Diverges, true, false),
        GeneratorKind::Explicit { .. } => (Verdict::Unknown, false, false),
    };
    let warning = limit_finite.then(|| {
        "exponents converge to a finite limit: the reciprocal sum diverges, but the \
         divergence criterion for the corner-cutting scheme requires r_s -> infinity"
            .to_string()
    });
    MuntzReport {
        verdict,
        limit_finite,
        limit_infinite_certified,
        partial_sums: partial_sums(gen),
        warning,
    }
}

fn partial_sums(gen: &GeneratorSpec) -> Vec<PartialSum> {
    let mut out = Vec::new();
    let mut sum = 0.0;
    let mut terms = 0;
    for &horizon in &PARTIAL_SUM_HORIZONS {
        while terms < horizon {
            match gen.value_at::<f64>(terms + 1) {
                Some(r) if r > 0.0 => {
                    sum += 1.0 / r;
                    terms += 1;
                }
                _ => break,
            }
        }
        out.push(PartialSum { horizon, terms, sum });
    }
    out
}

/// The gap product `∏_{j=2}^{m} (1 - r_1/r_j)` and, where the generator allows,
/// its limit as `m -> ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapDelta {
    pub m: usize,
    pub partial: f64,
    pub limit: Option<f64>,
}

/// `∏_{j=first}^{m} (1 - r_1/r_j)`, accumulated as a sum of logarithms.
pub fn gap_product<T: Real>(seq: &ExponentSequence<T>, first: usize, m: usize) -> Result<T> {
    let seq = seq.extend(m.max(1))?;
    let r1 = *seq.r(1);
    let mut log_sum = T::zero();
    for j in first.max(2)..=m {
        let q = r1 / *seq.r(j);
        let factor = T::one() - q;
        if factor <= T::zero() {
            return Err(Error::NotApplicable { index: j, factor: factor.to_f64_lossy() });
        }
        log_sum = log_sum + (-q).ln_1p();
    }
    Ok(log_sum.exp())
}

pub fn gap_delta<T: Real>(seq: &ExponentSequence<T>, m_max: usize) -> Result<GapDelta> {
    let partial = gap_product(seq, 2, m_max)?.to_f64_lossy();
    let limit = seq.generator().and_then(|gen| gap_limit(seq, gen, m_max));
    Ok(GapDelta { m: m_max, partial, limit })
}

/// Tail correction of the gap product. Only power generators with `p > 1`
/// have a positive limit; every divergent family tends to 0.
fn gap_limit<T: Real>(seq: &ExponentSequence<T>, gen: &GeneratorSpec, m_max: usize) -> Option<f64> {
    match gen.kind {
        GeneratorKind::Linear { .. } | GeneratorKind::Bounded { .. } => Some(0.0),
        GeneratorKind::Power { p } if p <= 1.0 => Some(0.0),
        GeneratorKind::Power { p } => {
            let base = m_max.max(gen.prefix_len() + 1);
            let partial = gap_product(seq, 2, base).ok()?.to_f64_lossy();
            let r1 = seq.extend(1).ok()?.r(1).to_f64_lossy();
            // log(1 - q) ≈ -q - q^2/2 with tail sums by the midpoint integral rule.
            let edge = base as f64 + 0.5;
            let tail1 = edge.powf(1.0 - p) / (p - 1.0);
            let tail2 = edge.powf(1.0 - 2.0 * p) / (2.0 * p - 1.0);
            Some(partial * (-r1 * tail1 - 0.5 * r1 * r1 * tail2).exp())
        }
        GeneratorKind::Explicit { .. } => None,
    }
}
