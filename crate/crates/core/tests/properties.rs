use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use quatslice::laplace::{closed_form_exp, laplace_left, laplace_right, shift_real, QuadratureConfig};
use quatslice::quadrature::integrate;
use quatslice::regularity::{is_slice_preserving, verify_regular, DEFAULT_STEP};
use quatslice::{
    ImaginaryUnit, Quat, RationalQuat, RationalSeries, Series, Side, SliceCoordinates, SliceRegularFunction,
    TimeDomainFunction,
};

fn quat(scale: f64) -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-scale..=scale).prop_map(|[w, x, y, z]| Quat::new(w, x, y, z))
}

fn ball() -> impl Strategy<Value = Quat> {
    quat(1.0).prop_map(|q| if q.norm() > 1.0 { q.scale(1.0 / q.norm()) } else { q })
}

fn unit() -> impl Strategy<Value = ImaginaryUnit<f64>> {
    prop::array::uniform3(-1.0..=1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-2)
        .prop_map(|[x, y, z]| ImaginaryUnit::from_vector(x, y, z).unwrap())
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Left), Just(Side::Right)]
}

fn series(side: Side, max_degree: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(quat(1.0), 1..=max_degree + 1).prop_map(move |c| Series::new(side, c))
}

fn rational_series(max_degree: usize) -> impl Strategy<Value = RationalSeries> {
    let small = || -9i64..=9;
    prop::collection::vec((small(), small(), small(), small(), 1i64..=5), 1..=max_degree + 1).prop_map(|cs| {
        RationalSeries::left(
            cs.into_iter()
                .map(|(w, x, y, z, d)| RationalQuat::new(Ratio::new(w, d), Ratio::new(x, d), Ratio::new(y, d), Ratio::new(z, d)))
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_eta_reverses_products_exactly(f in rational_series(5), g in rational_series(5)) {
        let lhs = f.star(&g).unwrap().eta();
        let rhs = g.eta().star(&f.eta()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_star_is_associative(f in rational_series(3), g in rational_series(3), h in rational_series(3)) {
        prop_assert_eq!(f.star(&g).unwrap().star(&h).unwrap(), f.star(&g.star(&h).unwrap()).unwrap());
    }

    #[test]
    fn rational_symmetrization_is_real(f in rational_series(4)) {
        let s = f.symmetrization().unwrap();
        prop_assert!(s.is_intrinsic());
    }

    #[test]
    fn series_json_round_trips(s in side(), f in prop::collection::vec(quat(10.0), 0..6)) {
        let f = Series::new(s, f);
        let text = serde_json::to_string(&f).unwrap();
        let back: Series = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn real_axis_product_law(s in side(), x in -1.0..1.0f64, f in series(Side::Left, 6), g in series(Side::Left, 6)) {
        let (f, g) = match s {
            Side::Left => (f, g),
            Side::Right => (f.eta(), g.eta()),
        };
        let q = Quat::from_real(x);
        let p = f.star(&g).unwrap();
        prop_assert!((p.eval(q) - f.eval(q) * g.eval(q)).norm() < 1e-12);
    }

    #[test]
    fn tensor_eta_is_conjugation_of_values(f in series(Side::Left, 6), q in ball()) {
        let t = SliceRegularFunction::from_series(&f);
        let lhs = t.eta().eval(q).unwrap();
        let rhs = t.eval(q.conj()).unwrap().conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn tensor_reciprocal_inverts_products(f in series(Side::Left, 4), q in ball()) {
        let t = SliceRegularFunction::from_series(&f);
        let sym = t.symmetrization().eval(q).unwrap();
        prop_assume!(sym.norm() > 1e-2);
        let one = t.star(&t.regular_reciprocal()).unwrap().eval(q).unwrap();
        prop_assert!((one - Quat::one()).norm() < 1e-8 * (1.0 + 1.0 / sym.norm()));
    }

    #[test]
    fn symmetrization_preserves_slices(f in series(Side::Left, 5), q in ball()) {
        let t = SliceRegularFunction::from_series(&f).symmetrization();
        prop_assert!(is_slice_preserving(&t.as_map(), &[q]).unwrap());
    }

    #[test]
    fn products_of_regular_functions_stay_regular(f in series(Side::Left, 4), g in series(Side::Left, 4), x in -0.8..0.8f64, y in 0.0..0.8f64, u in unit()) {
        let p = SliceRegularFunction::from_series(&f).star(&SliceRegularFunction::from_series(&g)).unwrap();
        let probe = [SliceCoordinates::new(x, y, u)];
        prop_assert!(verify_regular(&p.as_map(), Side::Left, &probe, DEFAULT_STEP).unwrap().max_residual < 1e-6);
        prop_assert!(verify_regular(&p.eta().as_map(), Side::Right, &probe, DEFAULT_STEP).unwrap().max_residual < 1e-6);
    }

    #[test]
    fn gk_integrates_polynomials(c in prop::collection::vec(-3.0..3.0f64, 1..8), b in 0.1..4.0f64) {
        let f = |t: f64| [c.iter().rev().fold(0.0, |acc, &a| acc * t + a)];
        let exact: f64 = c.iter().enumerate().map(|(n, a)| a * b.powi(n as i32 + 1) / (n as f64 + 1.0)).sum();
        let r = integrate(&f, &[0.0, b], 1e-12, 50).unwrap();
        prop_assert!((r.value[0] - exact).abs() < 1e-10 * (1.0 + exact.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transform_is_right_linear(l in quat(1.0), m in quat(1.0), x in 0.5..3.0f64, y in 0.0..3.0f64, u in unit()) {
        let cfg = QuadratureConfig::default();
        let (f, g) = (TimeDomainFunction::exp(Quat::j()), TimeDomainFunction::exp(Quat::new(-0.5, 0.0, 0.0, 2.0)));
        let combo = TimeDomainFunction::sum(&[f.scale(l, Side::Right), g.scale(m, Side::Right)]);
        let s = u.embed(x, y);
        let lhs = laplace_left(&combo, &cfg).unwrap().eval(s).unwrap();
        let rhs = laplace_left(&f, &cfg).unwrap().eval(s).unwrap() * l + laplace_left(&g, &cfg).unwrap().eval(s).unwrap() * m;
        prop_assert!((lhs - rhs).norm() < 1e-8);
    }

    #[test]
    fn right_transform_is_left_linear(l in quat(1.0), x in 0.5..3.0f64, y in 0.0..3.0f64, u in unit()) {
        let cfg = QuadratureConfig::default();
        let f = TimeDomainFunction::exp(Quat::k());
        let s = u.embed(x, y);
        let lhs = laplace_right(&f.scale(l, Side::Left), &cfg).unwrap().eval(s).unwrap();
        let rhs = l * laplace_right(&f, &cfg).unwrap().eval(s).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8);
    }

    #[test]
    fn real_exponentials_restrict_to_the_complex_transform(b in -2.0..1.0f64, x in 0.0..2.0f64, y in 0.0..3.0f64, u in unit()) {
        // 1/(z - b) on each slice
        let cfg = QuadratureConfig::default();
        let tr = laplace_left(&TimeDomainFunction::exp(Quat::from_real(b)), &cfg).unwrap();
        let z = Complex64::new(b.max(0.0) + 0.5 + x, y);
        let expect = u.embed_complex((z - b).inv());
        prop_assert!((tr.eval(u.embed(z.re, z.im)).unwrap() - expect).norm() < 1e-8);
    }

    #[test]
    fn real_shift_matches_damped_input(a in 0.0..3.0f64, x in 0.5..3.0f64, y in 0.0..3.0f64, u in unit()) {
        let b = Quat::new(0.0, 0.6, 0.0, 0.8);
        let damped = closed_form_exp(b - Quat::from_real(a), Side::Left);
        let shifted = shift_real(&closed_form_exp(b, Side::Left), a);
        let s = u.embed(x, y);
        prop_assert!((damped.eval(s).unwrap() - shifted.eval(s).unwrap()).norm() < 1e-12);
    }
}
