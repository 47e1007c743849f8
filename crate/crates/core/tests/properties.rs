use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;
use starq::coeffs::Density;
use starq::sample::{self, Shape};
use starq::scalar::{cq, int, rat};
use starq::series::{ordered_sign, Order};
use starq::star::{Product, StarAlgebra};
use starq::text::{format_observable, format_series, parse_observable, parse_series};
use starq::{Chart, Cq, LambdaSeries, Observable, Rational};

const TRUNC: i32 = 5;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn real_series() -> impl Strategy<Value = LambdaSeries<Rational>> {
    prop::collection::vec((-3i32..=TRUNC, rational()), 0..6)
        .prop_map(|terms| LambdaSeries::from_terms(terms, TRUNC))
}

fn complex_series() -> impl Strategy<Value = LambdaSeries<Cq>> {
    prop::collection::vec((-3i32..=TRUNC, rational(), rational()), 0..6)
        .prop_map(|terms| LambdaSeries::from_terms(terms.into_iter().map(|(e, a, b)| (e, cq(a, b))), TRUNC))
}

fn algebras() -> Vec<StarAlgebra> {
    [
        (Chart::moyal(1), Product::Moyal),
        (Chart::moyal(2), Product::Moyal),
        (Chart::wick(1), Product::Wick),
        (Chart::cotangent(1, Density::Lebesgue), Product::Standard),
        (Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl),
    ]
    .into_iter()
    .map(|(c, p)| StarAlgebra::new(c, p, 3).unwrap())
    .collect()
}

fn observables(alg: &StarAlgebra, seed: u64, k: usize, shape: &Shape) -> Vec<Observable<Cq>> {
    let mut rng = sample::rng(seed);
    (0..k).map(|_| sample::observable(&mut rng, alg.chart(), alg.trunc(), shape)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_ultrametric(f in complex_series(), g in complex_series()) {
        let s = f.checked_add(&g).unwrap().abs_lambda();
        prop_assert!(s <= f.abs_lambda().max(g.abs_lambda()));
    }

    #[test]
    fn order_is_additive_under_products(f in complex_series(), g in complex_series()) {
        let fg = f.checked_mul(&g).unwrap();
        let want = f.order().plus(g.order());
        // The product may fall past the truncation and read as zero.
        match want {
            Order::Finite(o) if o <= TRUNC => prop_assert_eq!(fg.order(), want),
            _ => prop_assert!(fg.is_zero()),
        }
    }

    #[test]
    fn distance_is_symmetric_and_separates(f in complex_series(), g in complex_series()) {
        prop_assert_eq!(f.distance(&g).unwrap(), g.distance(&f).unwrap());
        prop_assert_eq!(f.distance(&g).unwrap().is_zero(), f == g);
    }

    #[test]
    fn ordering_trichotomy(a in real_series()) {
        let pos = ordered_sign(&a) > 0;
        let neg = ordered_sign(&-a.clone()) > 0;
        prop_assert_eq!(pos as u8 + neg as u8 + a.is_zero() as u8, 1);
    }

    #[test]
    fn sign_is_multiplicative(a in real_series(), b in real_series()) {
        let ab = a.checked_mul(&b).unwrap();
        if !ab.is_zero() {
            prop_assert_eq!(ordered_sign(&ab), ordered_sign(&a) * ordered_sign(&b));
        }
    }

    #[test]
    fn nonzero_series_invert(f in complex_series()) {
        prop_assume!(!f.is_zero());
        let inv = f.inverse().unwrap();
        let prod = f.checked_mul(&inv).unwrap();
        // Both factors are truncated, so only the span below TRUNC - o(f) - o(f⁻¹) is exact.
        let o = f.order().finite().unwrap();
        let exact = TRUNC - o.max(0) - (-o).max(0);
        prop_assert_eq!(prod.below(exact + 1), LambdaSeries::one(TRUNC).below(exact + 1));
    }

    #[test]
    fn series_text_round_trips(f in complex_series()) {
        let text = format_series(&f);
        prop_assert_eq!(parse_series(&text, TRUNC).unwrap(), f, "{}", text);
    }

    #[test]
    fn conj_is_an_involution(f in complex_series()) {
        prop_assert_eq!(f.conj().conj(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_products_are_associative(seed in any::<u64>()) {
        for alg in algebras() {
            let shape = if alg.product() == Product::Weyl { Shape::gaussian(2, int(1)) } else { Shape::polynomial(3) };
            let v = observables(&alg, seed, 3, &shape);
            let left = alg.mul(&alg.mul(&v[0], &v[1]).unwrap(), &v[2]).unwrap();
            let right = alg.mul(&v[0], &alg.mul(&v[1], &v[2]).unwrap()).unwrap();
            prop_assert_eq!(left, right, "{:?}", alg.product());
        }
    }

    #[test]
    fn involution_reverses_products(seed in any::<u64>()) {
        for alg in algebras() {
            let v = observables(&alg, seed, 2, &Shape::polynomial(3));
            let lhs = alg.involution(&alg.mul(&v[0], &v[1]).unwrap()).unwrap();
            let rhs = alg.mul(&alg.involution(&v[1]).unwrap(), &alg.involution(&v[0]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{:?}", alg.product());
            prop_assert_eq!(alg.involution(&alg.involution(&v[0]).unwrap()).unwrap(), v[0].clone());
        }
    }

    #[test]
    fn one_is_a_two_sided_unit(seed in any::<u64>()) {
        for alg in algebras() {
            let f = observables(&alg, seed, 1, &Shape::polynomial(3)).remove(0);
            prop_assert_eq!(alg.mul(&alg.one(), &f).unwrap(), f.clone());
            prop_assert_eq!(alg.mul(&f, &alg.one()).unwrap(), f);
        }
    }

    #[test]
    fn observable_text_round_trips(seed in any::<u64>(), gaussian in any::<bool>()) {
        let chart = Chart::moyal(2);
        let shape = if gaussian { Shape::gaussian(3, rat(1, 2)) } else { Shape::polynomial(3) };
        let f = observables(&StarAlgebra::new(chart.clone(), Product::Moyal, 4).unwrap(), seed, 1, &shape).remove(0);
        let text = format_observable(&f);
        prop_assert_eq!(parse_observable(&text, &chart, 4).unwrap(), f, "{}", text);
    }

    #[test]
    fn multi_component_text_round_trips(seed in any::<u64>()) {
        let chart = Chart::moyal(1).with_components(3);
        let mut shape = Shape::polynomial(2);
        shape.per_component = true;
        let f = observables(&StarAlgebra::new(chart.clone(), Product::Moyal, 3).unwrap(), seed, 1, &shape).remove(0);
        let text = format_observable(&f);
        prop_assert_eq!(parse_observable(&text, &chart, 3).unwrap(), f, "{}", text);
    }

    #[test]
    fn integrals_of_derivatives_vanish(seed in any::<u64>()) {
        let chart = Chart::moyal(2);
        let alg = StarAlgebra::new(chart.clone(), Product::Moyal, 3).unwrap();
        let f = observables(&alg, seed, 1, &Shape::gaussian(3, int(1))).remove(0);
        let comps: BTreeSet<usize> = [0].into();
        for v in 0..chart.nvars() {
            let total = f.derive(v).integrate(&comps).unwrap();
            prop_assert!(total.is_negligible(1e-12), "{:?}", total);
        }
    }

    #[test]
    fn observable_conj_is_an_involution(seed in any::<u64>()) {
        let alg = StarAlgebra::new(Chart::wick(2), Product::Wick, 3).unwrap();
        let f = observables(&alg, seed, 1, &Shape::gaussian(2, int(1))).remove(0);
        prop_assert_eq!(f.conj().conj(), f);
    }
}

#[test]
fn parse_print_corpus_of_one_hundred() {
    let chart = Chart::moyal(2);
    let alg = StarAlgebra::new(chart.clone(), Product::Moyal, 4).unwrap();
    let shapes = [Shape::polynomial(2), Shape::polynomial(4), Shape::gaussian(2, rat(3, 2))];
    for seed in 0..100u64 {
        let f = observables(&alg, 1000 + seed, 1, &shapes[seed as usize % 3]).remove(0);
        let text = format_observable(&f);
        assert_eq!(parse_observable(&text, &chart, 4).unwrap(), f, "{text}");
        // Printing the parse result reproduces the same string.
        assert_eq!(format_observable(&parse_observable(&text, &chart, 4).unwrap()), text);
    }
}
