//! Gelfond-Bézier curves over Müntz spaces `span(1, t^{r_1}, ..., t^{r_n})`
//! and the corner-cutting scheme that elevates their control polygons.
//!
//! The elevated polygons converge to the curve exactly when `Σ 1/r_i`
//! diverges (given `r_i -> ∞`); [`convergence`] measures both sides of that
//! dichotomy.
//!
//! Everything is generic over the scalar type. Corner cutting needs only field
//! operations and runs over exact rationals ([`ExactPolygon`]); basis
//! evaluation needs `f32`/`f64`.
//!
//! ```
//! use muntz::{convergence_report, Curve, Exponents, GeneratorSpec, Polygon, ReportOptions};
//!
//! # fn main() -> muntz::Result<()> {
//! let seq = Exponents::from_generator(GeneratorSpec::linear(vec![1.0, 2.0, 3.0], 2.0, 0.0))?;
//! let poly = Polygon::from_f64(&[vec![0.0, 0.0], vec![0.25, 1.0], vec![0.75, 1.0], vec![1.0, 0.0]])?;
//! let curve = Curve::new(seq.extend(3)?, poly)?;
//! let report = convergence_report(&curve, &seq, &[10, 100, 1000], ReportOptions::default())?;
//! assert!(report.coeff_error[2] < report.coeff_error[0] / 10.0);
//! # Ok(())
//! # }
//! ```

pub mod convergence;
pub mod elevation;
pub mod error;
pub mod exponents;
pub mod gelfond;
pub mod scalar;

pub use convergence::{
    coefficient_error, convergence_report, density_report, gap_probe, hausdorff_distance, point_set_hausdorff, polyline_hausdorff,
    rate_estimate, ConvergenceReport, DensityReport, GapProbe, ReportOptions,
};
pub use elevation::{elevate_coefficients, elevate_once, elevate_to, ControlPolygon, ElevationTrace, StorePolicy};
pub use error::{Error, Result};
pub use exponents::{
    eta, eta_nodes, gap_delta, muntz_condition, ExponentSequence, GapDelta, GeneratorKind, GeneratorSpec, MuntzReport,
    Verdict,
};
pub use gelfond::{
    basis_values, divided_difference, eval_curve, gelfond_bernstein, hirschman_widder, lemma_identities,
    DividedDifferenceTable, GelfondCurve, HirschmanWidder, LemmaResiduals,
};
pub use scalar::{Real, Scalar};

pub use num_rational::BigRational;

pub type Exponents = ExponentSequence<f64>;
pub type Polygon = ControlPolygon<f64>;
pub type Curve = GelfondCurve<f64>;
pub type Trace = ElevationTrace<f64>;

pub type Exponents32 = ExponentSequence<f32>;
pub type Polygon32 = ControlPolygon<f32>;
pub type Curve32 = GelfondCurve<f32>;

pub type ExactExponents = ExponentSequence<BigRational>;
pub type ExactPolygon = ControlPolygon<BigRational>;
pub type ExactTrace = ElevationTrace<BigRational>;
