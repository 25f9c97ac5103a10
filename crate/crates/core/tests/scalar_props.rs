//! Property tests for the exact scalar tower: valuation laws, limit
//! semantics, and canonical-form congruence.

use deborder::{EpsPolynomial, Rational, RationalFunction, Valuation};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = EpsPolynomial> {
    prop::collection::vec(((0usize..=6), -9i64..=9), 0..=4).prop_map(|pairs| {
        EpsPolynomial::from_pairs(pairs.into_iter().map(|(e, c)| (e, Rational::from_int(c))))
    })
}

fn nonzero_poly() -> impl Strategy<Value = EpsPolynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn nonzero_ratfunc() -> impl Strategy<Value = RationalFunction> {
    ratfunc().prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_additive_on_products(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!((&f * &g).valuation(), f.valuation() + g.valuation());
    }

    #[test]
    fn valuation_of_sums_is_bounded_below(f in ratfunc(), g in ratfunc()) {
        let min = f.valuation().min(g.valuation());
        prop_assert!((&f + &g).valuation() >= min);
    }

    #[test]
    fn valuation_negates_under_inverse(g in nonzero_ratfunc()) {
        let v = g.valuation().finite().unwrap();
        prop_assert_eq!(g.inv().unwrap().valuation(), Valuation::Finite(-v));
        // and f * f^{-1} = 1 exactly
        prop_assert!((&g * &g.inv().unwrap()).is_one());
    }

    #[test]
    fn limit_exists_iff_valuation_nonnegative(f in ratfunc()) {
        match f.valuation() {
            Valuation::Infinite => prop_assert_eq!(f.limit0().unwrap(), Rational::zero()),
            Valuation::Finite(v) if v > 0 => prop_assert_eq!(f.limit0().unwrap(), Rational::zero()),
            Valuation::Finite(0) => prop_assert!(!f.limit0().unwrap().is_zero()),
            Valuation::Finite(_) => prop_assert!(f.limit0().is_err()),
        }
    }

    #[test]
    fn limit_is_a_ring_homomorphism(f in ratfunc(), g in ratfunc()) {
        if f.valuation().is_nonnegative() && g.valuation().is_nonnegative() {
            let (lf, lg) = (f.limit0().unwrap(), g.limit0().unwrap());
            prop_assert_eq!((&f + &g).limit0().unwrap(), lf.clone() + &lg);
            prop_assert_eq!((&f * &g).limit0().unwrap(), lf * &lg);
        }
    }

    #[test]
    fn canonicalization_is_a_congruence(
        f in ratfunc(),
        scale in nonzero_poly(),
    ) {
        // the same field element built from a scaled representation
        let rebuilt = RationalFunction::new(
            f.num() * &scale,
            f.den() * &scale,
        ).unwrap();
        prop_assert_eq!(&rebuilt, &f);
        // and arithmetic on either representation agrees
        let g = RationalFunction::eps();
        prop_assert_eq!(&rebuilt + &g, &f + &g);
    }

    #[test]
    fn field_axioms_through_canonical_form(
        f in ratfunc(),
        g in ratfunc(),
        h in ratfunc(),
    ) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f - &f, RationalFunction::zero());
    }

    #[test]
    fn eps_power_scaling_shifts_valuation(f in nonzero_ratfunc(), k in -5i64..=5) {
        let scaled = f.scale_eps_power(k);
        prop_assert_eq!(
            scaled.valuation().finite().unwrap(),
            f.valuation().finite().unwrap() + k
        );
    }

    #[test]
    fn canonical_invariants_hold(f in ratfunc()) {
        // coprime, denominator anchored at lowest coefficient 1
        prop_assert!(EpsPolynomial::gcd(f.num(), f.den()).is_one() || f.is_zero());
        prop_assert_eq!(f.den().lowest_coeff().unwrap(), &Rational::one());
        if !f.is_zero() {
            let shared = f.num().mindeg().unwrap().min(f.den().mindeg().unwrap());
            prop_assert_eq!(shared, 0);
        }
    }

    #[test]
    fn display_parse_round_trip(f in ratfunc()) {
        let back = deborder::parse_rational_function(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn serde_round_trip(f in ratfunc()) {
        let text = serde_json::to_string(&f).unwrap();
        let back: RationalFunction = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}
