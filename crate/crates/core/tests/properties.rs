use muntz::gelfond::{gelfond_bernstein_dd, DividedDifferenceTable};
use muntz::{
    basis_values, divided_difference, elevate_to, eta_nodes, point_set_hausdorff, BigRational, Curve, ExactExponents,
    ExactPolygon, Exponents, GeneratorSpec, Polygon, StorePolicy,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Strictly increasing exponents `0 < r_1 < ... < r_len <= ~50` with gaps of at least 0.1.
fn exponents(len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..6.0, len).prop_map(|gaps| {
        let mut out = vec![0.0];
        for g in gaps {
            out.push(out.last().unwrap() + g);
        }
        out
    })
}

fn points(len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), len)
}

/// `(exponents r_0..r_{n+levels}, n, control points P_0..P_n)`.
fn curve_setup() -> impl Strategy<Value = (Vec<f64>, usize, Vec<Vec<f64>>)> {
    (1usize..=5, 1usize..=10).prop_flat_map(|(n, levels)| (exponents(n + levels), Just(n), points(n + 1)))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn basis_is_a_nonnegative_partition_of_unity(r in exponents(1..=8), t in 0.0f64..=1.0) {
        let h = basis_values(&Exponents::from_f64(&r).unwrap(), t).unwrap();
        prop_assert!(h.iter().all(|&v| v >= 0.0));
        prop_assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn elevation_preserves_the_curve((r, n, pts) in curve_setup()) {
        let full = Exponents::from_f64(&r).unwrap();
        let poly = Polygon::from_f64(&pts).unwrap();
        let original = Curve::new(full.extend(n).unwrap(), poly.clone()).unwrap();
        let trace = elevate_to(&poly, &full, full.last_index(), StorePolicy::Auto).unwrap();
        for level in &trace.polygons {
            let curve = Curve::new(full.extend(level.len() - 1).unwrap(), level.clone()).unwrap();
            for i in 0..=20 {
                let t = i as f64 / 20.0;
                prop_assert!(max_abs_diff(&original.eval(t).unwrap(), &curve.eval(t).unwrap()) < 1e-8);
            }
        }
    }

    #[test]
    fn elevation_keeps_endpoints_and_stays_in_the_hull((r, n, pts) in curve_setup()) {
        let full = Exponents::from_f64(&r).unwrap();
        let poly = Polygon::from_f64(&pts).unwrap();
        let elevated = elevate_to(&poly, &full, full.last_index(), StorePolicy::Ends).unwrap();
        let last = elevated.last();
        prop_assert_eq!(last.first(), poly.first());
        prop_assert_eq!(last.last(), poly.last());
        prop_assert_eq!(last.len(), full.len());
        // Each coordinate range, and the normal of every line through two original points,
        // must bound the elevated points as it bounds the originals.
        for c in 0..2 {
            let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[c]), hi.max(p[c])));
            prop_assert!(last.points().all(|p| p[c] >= lo - 1e-12 && p[c] <= hi + 1e-12));
        }
        for a in 0..=n {
            for b in 0..=n {
                let normal = [pts[b][1] - pts[a][1], pts[a][0] - pts[b][0]];
                let proj = |p: &[f64]| normal[0] * p[0] + normal[1] * p[1];
                let hi = pts.iter().map(|p| proj(p)).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(last.points().all(|p| proj(p) <= hi + 1e-12));
            }
        }
    }

    #[test]
    fn scaling_exponents_by_a_power_of_two_changes_nothing((r, _n, pts) in curve_setup(), e in -3i32..=3) {
        let alpha = 2f64.powi(e);
        let full = Exponents::from_f64(&r).unwrap();
        let poly = Polygon::from_f64(&pts).unwrap();
        let a = elevate_to(&poly, &full, full.last_index(), StorePolicy::Ends).unwrap();
        let b = elevate_to(&poly, &full.scaled(alpha).unwrap(), full.last_index(), StorePolicy::Ends).unwrap();
        prop_assert_eq!(a.last().coords(), b.last().coords());
    }

    #[test]
    fn float_elevation_tracks_exact_rational_elevation((r, _n, pts) in curve_setup()) {
        let full = Exponents::from_f64(&r).unwrap();
        let poly = Polygon::from_f64(&pts).unwrap();
        let float = elevate_to(&poly, &full, full.last_index(), StorePolicy::Ends).unwrap();

        let rat = |x: f64| BigRational::from_float(x).unwrap();
        let exact_seq = ExactExponents::new(r.iter().map(|&x| rat(x)).collect()).unwrap();
        let exact_pts: Vec<Vec<BigRational>> = pts.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect();
        let exact_poly = ExactPolygon::new(exact_pts).unwrap();
        let exact = elevate_to(&exact_poly, &exact_seq, exact_seq.last_index(), StorePolicy::Ends).unwrap();
        let exact: Vec<f64> = exact.last().coords().iter().map(|x| x.to_f64().unwrap()).collect();
        prop_assert!(max_abs_diff(float.last().coords(), &exact) < 1e-13);
    }

    #[test]
    fn eta_nodes_are_increasing_within_the_unit_interval(r in exponents(2..=60), k_frac in 0.0f64..1.0) {
        let seq = Exponents::from_f64(&r).unwrap();
        let k = ((seq.last_index() - 1) as f64 * k_frac) as usize;
        let eta = eta_nodes(&seq, k).unwrap();
        prop_assert_eq!(eta.len(), seq.last_index() - k + 1);
        prop_assert_eq!(eta[0], 0.0);
        prop_assert_eq!(*eta.last().unwrap(), 1.0);
        prop_assert!(eta.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hausdorff_is_symmetric_and_obeys_the_triangle_inequality(
        a in prop::collection::vec(-1.0f64..1.0, 2..40),
        b in prop::collection::vec(-1.0f64..1.0, 2..40),
        c in prop::collection::vec(-1.0f64..1.0, 2..40),
    ) {
        let even = |v: &Vec<f64>| v[..v.len() / 2 * 2].to_vec();
        let (a, b, c) = (even(&a), even(&b), even(&c));
        let ab = point_set_hausdorff(&a, &b, 2);
        prop_assert_eq!(ab, point_set_hausdorff(&b, &a, 2));
        prop_assert_eq!(point_set_hausdorff(&a, &a, 2), 0.0);
        prop_assert!(ab <= point_set_hausdorff(&a, &c, 2) + point_set_hausdorff(&c, &b, 2) + 1e-12);
    }

    #[test]
    fn divided_difference_ignores_node_order(r in exponents(1..=6), t in 0.05f64..=1.0, seed in any::<u64>()) {
        let nodes = &r[1..];
        let mut shuffled = nodes.to_vec();
        let len = shuffled.len();
        for i in (1..len).rev() {
            shuffled.swap(i, (seed.wrapping_mul(i as u64 + 7) % (i as u64 + 1)) as usize);
        }
        let a = divided_difference(nodes, t).unwrap();
        let b = divided_difference(&shuffled, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    // Near t = 1 the divided differences of t^x shrink like (ln t)^k and both routes
    // lose all relative accuracy to cancellation, so the interval stops short of 1.
    #[test]
    fn recursive_and_symmetric_divided_differences_agree(
        gaps in prop::collection::vec(0.5f64..3.0, 1..=4),
        t in 0.1f64..=0.9,
    ) {
        let nodes: Vec<f64> = gaps.iter().scan(0.0, |acc, g| { *acc += g; Some(*acc) }).collect();
        let table = DividedDifferenceTable::new(&nodes, t).unwrap();
        prop_assert!(table.relative_disagreement() < 1e-8);
    }

    #[test]
    fn definition_route_matches_the_basis_evaluator(
        gaps in prop::collection::vec(0.5f64..3.0, 1..=4),
        t in 0.1f64..=1.0,
    ) {
        let mut r = vec![0.0];
        r.extend(gaps.iter().scan(0.0, |acc, g| { *acc += g; Some(*acc) }));
        let seq = Exponents::from_f64(&r).unwrap();
        let fast = basis_values(&seq, t).unwrap();
        for (k, &v) in fast.iter().enumerate() {
            let slow = gelfond_bernstein_dd(&seq, k, t).unwrap();
            prop_assert!((slow - v).abs() < 1e-9, "k = {}: {} vs {}", k, slow, v);
        }
    }
}

#[test]
fn generator_json_round_trip() {
    for gen in [
        GeneratorSpec::linear(vec![1.0, 2.0, 3.0], 2.0, 0.0),
        GeneratorSpec::power(vec![1.0, 2.0, 3.0], 2.0),
        GeneratorSpec::bounded(vec![1.0, 2.0, 3.0], 5.0),
        GeneratorSpec::explicit(vec![2.0, 5.0, 7.0], vec![14.0]),
    ] {
        let text = serde_json::to_string(&gen).unwrap();
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&text).unwrap(), gen);
    }
    let parsed: GeneratorSpec =
        serde_json::from_str(r#"{"prefix":[1,2,3],"kind":"power","params":{"p":2}}"#).unwrap();
    assert_eq!(parsed, GeneratorSpec::power(vec![1.0, 2.0, 3.0], 2.0));
}
