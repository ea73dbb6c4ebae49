//! Divided differences of `f_t(x) = t^x`, the Gelfond-Bernstein basis,
//! Gelfond-Bézier curves and the Hirschman-Widder operator.
//!
//! Basis values are computed from the pure-death chain whose transition
//! probabilities they are: started in state `n`, the chain leaves state `k`
//! at rate `r_k`, and after time `s = -ln t` it sits in state `k` with
//! probability `H^n_k(t)`. Uniformizing the chain at rate `r_n` turns the
//! evaluation into Poisson-weighted powers of a bidiagonal stochastic matrix,
//! so every intermediate quantity is a convex combination. The divided
//! difference definition is kept as an independent route and as a
//! conditioning diagnostic; it cancels catastrophically for clustered
//! exponents.

use crate::elevation::ControlPolygon;
use crate::error::{Error, Result};
use crate::exponents::{eta_nodes, ExponentSequence, GAP_MIN};
use crate::scalar::Real;

/// Relative disagreement between the recursive and symmetric-sum divided
/// differences above which a table is flagged as ill-conditioned.
pub const DD_AGREE_TOL: f64 = 1e-8;

/// Absolute tolerance for the basis identities.
pub const IDENTITY_TOL: f64 = 1e-9;

fn check_t<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::DomainError(t.to_f64_lossy()));
    }
    Ok(())
}

/// `t^x` with `0^0 = 1`.
#[inline]
pub fn pow_t<T: Real>(t: T, x: T) -> T {
    if x.is_zero() {
        T::one()
    } else {
        t.powf(x)
    }
}

fn sorted_nodes<T: Real>(nodes: &[T]) -> Result<Vec<T>> {
    if nodes.is_empty() {
        return Err(Error::EmptyNodes);
    }
    let mut sorted = nodes.to_vec();
    if let Some(index) = sorted.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidExponent { index, value: sorted[index].to_f64_lossy() });
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let gap_min = T::lit(GAP_MIN);
    for (i, w) in sorted.windows(2).enumerate() {
        if w[1] - w[0] < gap_min {
            return Err(Error::NodeCollision { index: i + 1, gap: (w[1] - w[0]).to_f64_lossy(), min: GAP_MIN });
        }
    }
    Ok(sorted)
}

/// Triangular table of the divided-difference recursion for `f_t(x) = t^x`.
///
/// `table[d][i]` holds `[x_i, ..., x_{i+d}] f_t`; the first column is `t^{x_i}`.
#[derive(Debug, Clone)]
pub struct DividedDifferenceTable<T> {
    nodes: Vec<T>,
    t: T,
    table: Vec<Vec<T>>,
}

impl<T: Real> DividedDifferenceTable<T> {
    /// Nodes may come in any order; they are sorted first.
    pub fn new(nodes: &[T], t: T) -> Result<Self> {
        check_t(t)?;
        let nodes = sorted_nodes(nodes)?;
        let n = nodes.len();
        let mut table = Vec::with_capacity(n);
        table.push(nodes.iter().map(|&x| pow_t(t, x)).collect::<Vec<_>>());
        for d in 1..n {
            let prev = &table[d - 1];
            let row = (0..n - d).map(|i| (prev[i + 1] - prev[i]) / (nodes[i + d] - nodes[i])).collect();
            table.push(row);
        }
        Ok(DividedDifferenceTable { nodes, t, table })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn table(&self) -> &[Vec<T>] {
        &self.table
    }

    /// `[x_0, ..., x_n] f_t` from the recursion.
    pub fn value(&self) -> T {
        self.table[self.table.len() - 1][0]
    }

    /// `Σ_i t^{x_i} / ∏_{j≠i} (x_i - x_j)`.
    pub fn symmetric_sum(&self) -> T {
        symmetric_sum(&self.nodes, self.t)
    }

    pub fn relative_disagreement(&self) -> T {
        let a = self.value();
        let b = self.symmetric_sum();
        let scale = a.abs().max(b.abs());
        if scale.is_zero() {
            T::zero()
        } else {
            (a - b).abs() / scale
        }
    }

    /// The two evaluation routes disagree by more than [`DD_AGREE_TOL`] (or produce NaN).
    pub fn is_ill_conditioned(&self) -> bool {
        let within = self.relative_disagreement().partial_cmp(&T::lit(DD_AGREE_TOL));
        !matches!(within, Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal))
    }
}

fn symmetric_sum<T: Real>(nodes: &[T], t: T) -> T {
    let mut sum = T::zero();
    for (i, &xi) in nodes.iter().enumerate() {
        let denom = nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(T::one(), |acc, (_, &xj)| acc * (xi - xj));
        sum = sum + pow_t(t, xi) / denom;
    }
    sum
}

/// `[x_0, ..., x_n] f_t` by the recursion.
pub fn divided_difference<T: Real>(nodes: &[T], t: T) -> Result<T> {
    Ok(DividedDifferenceTable::new(nodes, t)?.value())
}

/// `[x_0, ..., x_n] f_t` by the symmetric-sum closed form.
pub fn divided_difference_symmetric<T: Real>(nodes: &[T], t: T) -> Result<T> {
    check_t(t)?;
    Ok(symmetric_sum(&sorted_nodes(nodes)?, t))
}

fn check_index(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k as i64, max: n as i64 });
    }
    Ok(())
}

/// `H^n_k(t)` straight from the divided-difference definition.
///
/// Accurate only for well-separated exponents and small `n`; use
/// [`gelfond_bernstein`] for anything else.
pub fn gelfond_bernstein_dd<T: Real>(seq: &ExponentSequence<T>, k: usize, t: T) -> Result<T> {
    let r = seq.values();
    let n = r.len() - 1;
    check_index(n, k)?;
    check_t(t)?;
    if k == n {
        return Ok(pow_t(t, r[n]));
    }
    let scale = r[k + 1..].iter().fold(T::one(), |acc, &x| acc * x);
    let sign = if (n - k).is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(sign * scale * divided_difference(&r[k..], t)?)
}

/// Poisson(`lambda`) probabilities over the range carrying all but a
/// negligible tail, as `(first index, weights)`, normalized to sum to one.
///
/// Weights are built by ratios outward from the mode, which avoids both the
/// underflow of `e^{-lambda}` and the drift of an accumulated log.
fn poisson_weights<T: Real>(lambda: T) -> (usize, Vec<T>) {
    let tol = T::epsilon() * T::lit(1e-3);
    let mode = lambda.floor().to_usize().unwrap_or(0);

    let mut upper = vec![T::one()];
    let mut sum = T::one();
    let mut w = T::one();
    let mut k = mode;
    loop {
        k += 1;
        w = w * lambda / T::from_count(k);
        upper.push(w);
        sum = sum + w;
        if w < tol * sum {
            break;
        }
    }

    let mut lower = Vec::new();
    let mut w = T::one();
    let mut k = mode;
    while k > 0 {
        w = w * T::from_count(k) / lambda;
        k -= 1;
        lower.push(w);
        sum = sum + w;
        if w < tol * sum {
            break;
        }
    }

    let first = mode - lower.len();
    let mut weights: Vec<T> = lower.into_iter().rev().chain(upper).collect();
    for w in &mut weights {
        *w = *w / sum;
    }
    (first, weights)
}

/// All basis values `H^n_0(t), ..., H^n_n(t)`.
pub fn basis_values<T: Real>(seq: &ExponentSequence<T>, t: T) -> Result<Vec<T>> {
    check_t(t)?;
    let r = seq.values();
    let n = r.len() - 1;
    let mut out = vec![T::zero(); n + 1];
    if n == 0 || t.is_zero() {
        out[0] = T::one();
        return Ok(out);
    }
    if t == T::one() {
        out[n] = T::one();
        return Ok(out);
    }

    let rate = r[n];
    let lambda = rate * -t.ln();
    let down: Vec<T> = r.iter().map(|&x| x / rate).collect();
    let stay: Vec<T> = down.iter().map(|&d| T::one() - d).collect();
    let (first, weights) = poisson_weights(lambda);

    let tol = T::epsilon() * T::lit(1e-3);
    let mut dist = vec![T::zero(); n + 1];
    dist[n] = T::one();
    let mut lowest = n;
    for step in 0..first + weights.len() {
        if step >= first {
            let w = weights[step - first];
            for k in lowest..=n {
                out[k] = out[k] + w * dist[k];
            }
            if lowest == 0 && T::one() - dist[0] < tol {
                // Fully absorbed: every later Poisson term lands in state 0.
                let rest = weights[step - first + 1..].iter().fold(T::zero(), |acc, &w| acc + w);
                out[0] = out[0] + rest;
                break;
            }
        }
        lowest = lowest.saturating_sub(1);
        for k in lowest..n {
            dist[k] = stay[k] * dist[k] + down[k + 1] * dist[k + 1];
        }
        dist[n] = stay[n] * dist[n];
    }
    Ok(out)
}

/// `H^n_k(t)` for the sequence `Λ = (0, r_1, ..., r_n)`.
pub fn gelfond_bernstein<T: Real>(seq: &ExponentSequence<T>, k: usize, t: T) -> Result<T> {
    let n = seq.last_index();
    check_index(n, k)?;
    if k == n {
        check_t(t)?;
        return Ok(pow_t(t, *seq.r(n)));
    }
    Ok(basis_values(seq, t)?[k])
}

/// `P(t) = Σ_k H^n_k(t) P_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GelfondCurve<T> {
    exponents: ExponentSequence<T>,
    control_points: ControlPolygon<T>,
}

impl<T: Real> GelfondCurve<T> {
    pub fn new(exponents: ExponentSequence<T>, control_points: ControlPolygon<T>) -> Result<Self> {
        if exponents.len() != control_points.len() {
            return Err(Error::LengthMismatch { points: control_points.len(), exponents: exponents.len() });
        }
        Ok(GelfondCurve { exponents, control_points })
    }

    pub fn exponents(&self) -> &ExponentSequence<T> {
        &self.exponents
    }

    pub fn control_points(&self) -> &ControlPolygon<T> {
        &self.control_points
    }

    pub fn degree(&self) -> usize {
        self.exponents.last_index()
    }

    pub fn dim(&self) -> usize {
        self.control_points.dim()
    }

    pub fn eval(&self, t: T) -> Result<Vec<T>> {
        eval_curve(self, t)
    }

    /// Flat `[x_0.., x_1.., ...]` coordinates of the curve at each parameter.
    pub fn sample(&self, params: &[T]) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(params.len() * self.dim());
        for &t in params {
            out.extend(self.eval(t)?);
        }
        Ok(out)
    }
}

pub fn eval_curve<T: Real>(curve: &GelfondCurve<T>, t: T) -> Result<Vec<T>> {
    let basis = basis_values(&curve.exponents, t)?;
    let poly = &curve.control_points;
    let mut point = vec![T::zero(); poly.dim()];
    for (k, &h) in basis.iter().enumerate() {
        for (acc, &c) in point.iter_mut().zip(poly.point(k)) {
            *acc = *acc + h * c;
        }
    }
    Ok(point)
}

/// `B_m(f)(x) = Σ_i f(η_i(Λ_m)^{1/r_1}) H^m_{i,Λ_m}(x)`, prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct HirschmanWidder<T> {
    exponents: ExponentSequence<T>,
    nodes: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> HirschmanWidder<T> {
    pub fn new<F: Fn(T) -> T>(seq: &ExponentSequence<T>, m: usize, f: F) -> Result<Self> {
        if m == 0 {
            return Err(Error::OrderOutOfRange { order: 0, last: 0 });
        }
        let exponents = seq.extend(m)?;
        let inv_r1 = T::one() / *exponents.r(1);
        let nodes: Vec<T> = eta_nodes(&exponents, 0)?.into_iter().map(|e| e.powf(inv_r1)).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Ok(HirschmanWidder { exponents, nodes, values })
    }

    /// The sampling nodes `η_i(Λ_m)^{1/r_1}`.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let basis = basis_values(&self.exponents, x)?;
        Ok(basis.iter().zip(&self.values).fold(T::zero(), |acc, (&h, &v)| acc + h * v))
    }
}

pub fn hirschman_widder<T: Real, F: Fn(T) -> T>(seq: &ExponentSequence<T>, m: usize, f: F, x: T) -> Result<T> {
    HirschmanWidder::new(seq, m, f)?.eval(x)
}

/// Largest `|LHS - RHS|` of each basis identity over all valid `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaResiduals<T> {
    /// `H^n_{k,Λ} = ((r_{n+1} - r_k)/r_{n+1}) H^{n+1}_k + (r_{k+1}/r_{n+1}) H^{n+1}_{k+1}`.
    pub elevation: T,
    /// `t H^n_{k,Λ}(t) = ∏_{j>k} r_j/(r_j + 1) · H^{n+1}_{k+1,(0,1,r_1+1,...,r_n+1)}(t)`.
    pub multiply_by_t: T,
    /// `H^n_{k,Λ}(t^α) = H^n_{k,αΛ}(t)`.
    pub exponent_scaling: T,
}

impl<T: Real> LemmaResiduals<T> {
    pub fn max(&self) -> T {
        self.elevation.max(self.multiply_by_t).max(self.exponent_scaling)
    }

    pub fn within(&self, tol: T) -> bool {
        self.max() < tol
    }
}

/// Residuals of the three basis identities at `t`, using `next` as `r_{n+1}`
/// for the elevation identity and `alpha` for the scaling identity.
pub fn lemma_identities<T: Real>(seq: &ExponentSequence<T>, next: T, alpha: T, t: T) -> Result<LemmaResiduals<T>> {
    let r = seq.values();
    let n = r.len() - 1;

    let mut longer = r.to_vec();
    longer.push(next);
    let longer = ExponentSequence::new(longer)?;
    let low = basis_values(seq, t)?;
    let high = basis_values(&longer, t)?;
    let elevation = (0..=n)
        .map(|k| {
            let rhs = (next - r[k]) / next * high[k] + longer.r(k + 1).to_owned() / next * high[k + 1];
            (low[k] - rhs).abs()
        })
        .fold(T::zero(), T::max);

    let mut shifted = vec![T::zero(), T::one()];
    shifted.extend(r[1..].iter().map(|&x| x + T::one()));
    let shifted = ExponentSequence::new(shifted)?;
    let shifted_basis = basis_values(&shifted, t)?;
    let multiply_by_t = (0..=n)
        .map(|k| {
            let factor = r[k + 1..].iter().fold(T::one(), |acc, &x| acc * x / (x + T::one()));
            (t * low[k] - factor * shifted_basis[k + 1]).abs()
        })
        .fold(T::zero(), T::max);

    let scaled = seq.scaled(alpha)?;
    let lhs = basis_values(seq, t.powf(alpha))?;
    let rhs = basis_values(&scaled, t)?;
    let exponent_scaling = lhs.iter().zip(&rhs).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max);

    Ok(LemmaResiduals { elevation, multiply_by_t, exponent_scaling })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> ExponentSequence<f64> {
        ExponentSequence::from_f64(v).unwrap()
    }

    fn binom(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn divided_difference_examples() {
        assert_eq!(divided_difference(&[2.0], 0.5).unwrap(), 0.25);
        assert_eq!(divided_difference(&[0.0, 1.0], 0.5).unwrap(), -0.5);
        assert!((divided_difference(&[0.0f64, 1.0, 2.0], 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert!((divided_difference_symmetric(&[0.0f64, 1.0, 2.0], 0.5).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn divided_difference_errors() {
        assert!(matches!(divided_difference(&[0.0, 1.0], 1.5), Err(Error::DomainError(_))));
        assert!(matches!(divided_difference(&[0.0, 1.0], -0.1), Err(Error::DomainError(_))));
        assert!(matches!(divided_difference(&[1.0, 1.0 + 1e-12], 0.5), Err(Error::NodeCollision { .. })));
        assert!(matches!(divided_difference::<f64>(&[], 0.5), Err(Error::EmptyNodes)));
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(divided_difference(&[0.0], 0.0).unwrap(), 1.0);
        assert_eq!(gelfond_bernstein(&seq(&[0.0, 1.5, 4.0]), 0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn table_first_column_and_conditioning() {
        let table = DividedDifferenceTable::new(&[3.0, 0.0, 1.0], 0.3).unwrap();
        assert_eq!(table.nodes(), &[0.0, 1.0, 3.0]);
        assert_eq!(table.table()[0], vec![1.0, 0.3, 0.3f64.powf(3.0)]);
        assert!(!table.is_ill_conditioned());
        // Tightly clustered high exponents: the two routes part ways.
        let nodes: Vec<f64> = (0..9).map(|i| 40.0 + 0.1 * i as f64).collect();
        assert!(DividedDifferenceTable::new(&nodes, 0.999).unwrap().is_ill_conditioned());
    }

    #[test]
    fn basis_examples() {
        let s = ExponentSequence::<f64>::classical(3);
        assert!((gelfond_bernstein(&s, 1, 0.5).unwrap() - 0.375).abs() < 1e-14);
        let s = seq(&[0.0, 2.0, 5.0, 7.0]);
        assert_eq!(gelfond_bernstein(&s, 3, 1.0).unwrap(), 1.0);
        for k in 0..3 {
            assert_eq!(gelfond_bernstein(&s, k, 1.0).unwrap(), 0.0);
        }
        assert!(matches!(gelfond_bernstein(&s, 4, 0.5), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn basis_matches_divided_difference_definition() {
        let s = seq(&[0.0, 0.7, 2.0, 3.1, 5.5]);
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let fast = basis_values(&s, t).unwrap();
            for k in 0..=4 {
                let slow = gelfond_bernstein_dd(&s, k, t).unwrap();
                assert!((fast[k] - slow).abs() < 1e-12, "k={k} t={t}: {} vs {slow}", fast[k]);
            }
        }
    }

    #[test]
    fn classical_coincidence() {
        for n in 1..=8 {
            let s = ExponentSequence::<f64>::classical(n);
            for i in 0..=100 {
                let t = i as f64 / 100.0;
                let h = basis_values(&s, t).unwrap();
                for k in 0..=n {
                    let b = binom(n, k) * t.powi(k as i32) * (1.0 - t).powi((n - k) as i32);
                    assert!((h[k] - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn basis_for_large_exponents_is_a_distribution() {
        let s: ExponentSequence<f64> =
            crate::exponents::GeneratorSpec::linear(vec![1.0, 2.0, 3.0], 2.0, 0.0).materialize(300).unwrap();
        for &t in &[1e-6, 0.01, 0.3, 0.9, 0.999] {
            let h = basis_values(&s, t).unwrap();
            assert!(h.iter().all(|&x| x >= -1e-15));
            assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-11, "t={t} sum={}", h.iter().sum::<f64>());
        }
    }

    #[test]
    fn basis_in_f32() {
        let s = ExponentSequence::<f32>::classical(3);
        let h = basis_values(&s, 0.25f32).unwrap();
        assert!((h[0] - 0.421_875).abs() < 1e-6);
        assert!((h.iter().sum::<f32>() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn curve_endpoints_and_constant() {
        let pts = ControlPolygon::new(vec![vec![0.0, 0.0], vec![0.25, 1.0], vec![0.75, 1.0], vec![1.0, 0.0]]).unwrap();
        let curve = GelfondCurve::new(seq(&[0.0, 2.0, 50.0, 100.0]), pts).unwrap();
        assert_eq!(curve.eval(0.0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(curve.eval(1.0).unwrap(), vec![1.0, 0.0]);
        let flat = ControlPolygon::new(vec![vec![0.3, -2.0]; 4]).unwrap();
        let curve = GelfondCurve::new(seq(&[0.0, 1.0, 2.5, 4.0]), flat).unwrap();
        for i in 0..=10 {
            let p = curve.eval(i as f64 / 10.0).unwrap();
            assert!((p[0] - 0.3).abs() < 1e-14 && (p[1] + 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn curve_length_mismatch() {
        let pts = ControlPolygon::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(
            GelfondCurve::new(ExponentSequence::<f64>::classical(2), pts),
            Err(Error::LengthMismatch { points: 2, exponents: 3 })
        ));
    }

    fn de_casteljau(pts: &[[f64; 2]], t: f64) -> [f64; 2] {
        let mut work = pts.to_vec();
        for level in 1..pts.len() {
            for i in 0..pts.len() - level {
                for c in 0..2 {
                    work[i][c] = (1.0 - t) * work[i][c] + t * work[i + 1][c];
                }
            }
        }
        work[0]
    }

    #[test]
    fn classical_curve_matches_de_casteljau() {
        let pts = [[0.0, 0.0], [0.2, 1.3], [0.9, -0.4], [1.0, 0.5]];
        let poly = ControlPolygon::new(pts.iter().map(|p| p.to_vec()).collect()).unwrap();
        let curve = GelfondCurve::new(ExponentSequence::classical(3), poly).unwrap();
        for i in 1..10 {
            let t = i as f64 / 10.0;
            let p = curve.eval(t).unwrap();
            let q = de_casteljau(&pts, t);
            assert!((p[0] - q[0]).abs() < 1e-10 && (p[1] - q[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn hirschman_widder_classical() {
        let classical = ExponentSequence::<f64>::from_generator(crate::exponents::GeneratorSpec::classical()).unwrap();
        let v = hirschman_widder(&classical, 10, |x| x * x, 0.5).unwrap();
        assert!((v - 0.275).abs() < 1e-12);
        let op = HirschmanWidder::new(&classical, 7, |x| x).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((op.eval(x).unwrap() - x).abs() < 1e-12);
        }
        let one = HirschmanWidder::new(&classical, 25, |_| 1.0).unwrap();
        assert!((one.eval(0.37).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lemma_examples() {
        let classical = ExponentSequence::<f64>::classical(4);
        let res = lemma_identities(&classical, 5.0, 1.0, 0.3).unwrap();
        assert!(res.elevation < 1e-12);
        assert_eq!(res.exponent_scaling, 0.0);
        let res = lemma_identities(&seq(&[0.0, 2.0, 5.0, 7.0]), 14.0, 2.0, 0.7).unwrap();
        assert!(res.within(1e-10), "{res:?}");
    }
}
