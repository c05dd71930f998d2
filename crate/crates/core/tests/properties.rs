use g2zeta::model::Shape;
use g2zeta::numerics::{li_depth1, li_depth2};
use g2zeta::reduce::{check_acyclic, reduce, replay, split_residual};
use g2zeta::verify::{convergent_up_to, stuffle_defect};
use g2zeta::{classify, oracle, Certificate, Classification, Evaluator, InputTuple, PrecisionContext, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=60)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn convergent_tuple(max_weight: u32) -> impl Strategy<Value = InputTuple> {
    proptest::array::uniform6(0u32..=max_weight)
        .prop_map(InputTuple::new)
        .prop_filter("convergent, bounded weight", move |t| t.weight() <= max_weight && classify(t).is_convergent())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn split_is_a_pointwise_identity(s in 1u32..=7, t in 1u32..=7, x in nonzero_rational(), y in nonzero_rational()) {
        prop_assume!(!(&x + &y).is_zero());
        prop_assert!(split_residual(s, t, &x, &y).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn stuffle_holds_within_bounds(a in 1u32..=5, b in 1u32..=5, j in 0i64..12, k in 0i64..12) {
        prop_assume!(!(a == 1 && j == 0) && !(b == 1 && k == 0));
        let (d, bound) = stuffle_defect(a, b, j, k, &PrecisionContext::new(30)).unwrap();
        prop_assert!(d <= bound, "defect {d:e} > bound {bound:e}");
    }

    #[test]
    fn inverting_arguments_conjugates(a in 1u32..=5, b in 1u32..=5, j in 0i64..12, k in 0i64..12) {
        let ctx = PrecisionContext::new(30);
        if !(a == 1 && j == 0) {
            let v = li_depth1(a, j, &ctx).unwrap();
            let w = li_depth1(a, -j, &ctx).unwrap();
            prop_assert!(v.conj().agrees_with(&w, 0.0));
            if j == 0 || j == 6 {
                prop_assert!(v.value.im.to_f64().abs() <= v.error_bound);
            }
            let v = li_depth2(a, b, j, k, &ctx).unwrap();
            let w = li_depth2(a, b, -j, -k, &ctx).unwrap();
            prop_assert!(v.conj().agrees_with(&w, 0.0));
        }
    }

    #[test]
    fn values_are_real_within_bound(t in convergent_tuple(6)) {
        let v = Evaluator::new(PrecisionContext::new(25)).evaluate(&reduce(&t).unwrap().result).unwrap();
        prop_assert!(v.value.im.to_f64().abs() <= v.error_bound, "{t}: im {:e}", v.value.im.to_f64());
        prop_assert!(v.value.re.to_f64() > 0.0);
    }

    #[test]
    fn partial_sums_increase_towards_the_limit(t in convergent_tuple(5)) {
        let s = oracle::partial_sums(&t, &[25, 50, 100]);
        prop_assert!(s[0] < s[1] && s[1] < s[2]);
        let v = Evaluator::new(PrecisionContext::new(20)).evaluate(&reduce(&t).unwrap().result).unwrap();
        prop_assert!(s[2] < v.value.re.to_f64());
    }
}

#[test]
fn support_graph_is_acyclic() {
    check_acyclic().unwrap();
}

#[test]
fn certificate_shape_up_to_weight_six() {
    for t in convergent_up_to(6) {
        let cert = reduce(&t).unwrap();
        let w = t.weight();
        let single = matches!(cert.classification, Classification::Convergent(Shape::SingleForm(..)));
        assert!(!cert.result.is_empty(), "{t}");
        for (term, _) in cert.result.iter() {
            // single-form sums carry a zeta(w-1) from the linear growth of the representation count
            assert!(term.weight() == w || (single && term.weight() == w - 1), "{t}: {term}");
            assert!(term.depth() <= 2, "{t}: {term}");
            assert_eq!(12 % term.level(), 0, "{t}: {term}");
        }
        let excluded = matches!(
            cert.classification,
            Classification::Convergent(Shape::SingleForm(1, 3) | Shape::SingleForm(2, 3))
        );
        assert_eq!(cert.all_rational, !excluded, "{t}");
        assert_eq!(cert.all_rational, cert.result.all_rational(), "{t}");
    }
}

#[test]
fn certificates_replay_and_round_trip() {
    for t in convergent_up_to(5) {
        let cert = reduce(&t).unwrap();
        assert_eq!(replay(&cert).unwrap(), cert.result, "{t}");
        assert_eq!(Certificate::from_json(&cert.to_json()).unwrap(), cert, "{t}");
    }
}

#[test]
fn divergent_tuples_are_rejected() {
    for w in 0..=6 {
        for t in InputTuple::all_of_weight(w) {
            if let Classification::Divergent(cond) = classify(&t) {
                assert_eq!(reduce(&t), Err(g2zeta::Error::Divergent(cond)));
            }
        }
    }
}
