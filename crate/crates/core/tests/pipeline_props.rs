//! End-to-end pipeline properties: generated border instances deborder to
//! representations computing the recorded ground truth; the constant-block
//! reduction satisfies its determinant identity; the principal-minor
//! closure reproduces minor limits.

use deborder::generate::{generate, random_small_rational, GeneratorSpec};
use deborder::{
    build_constant_reduction, check_border_limit, close_principal_minors, deborder_general, Matrix,
    PrincipalMinorInstance, RankOneInstance, Rational, RationalFunction, Subset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(n: usize, r: usize, seed: u64, include_a0: bool) -> GeneratorSpec {
    GeneratorSpec {
        n,
        r,
        seed,
        z_range: 2,
        mixing_steps: 3,
        include_a0,
    }
}

#[test]
fn homogeneous_round_trip_small_corpus() {
    for seed in 0..8 {
        let g = generate(&spec(4, 2, seed, false)).unwrap();
        let out = deborder_general(&g.instance).unwrap();
        assert_eq!(out.limit_poly, g.ground_truth, "seed {seed}");
        assert_eq!(out.dimension, 2);
        // independent certification through the 0/1-evaluation route
        let exact = RankOneInstance::from_base(&out.to_instance());
        assert_eq!(check_border_limit(&exact).unwrap(), g.ground_truth);
        assert!(out.factor_ranks().iter().all(|&r| r <= 1));
    }
}

#[test]
fn general_round_trip_small_corpus() {
    for seed in 0..4 {
        let g = generate(&spec(3, 2, seed, true)).unwrap();
        let out = deborder_general(&g.instance).unwrap();
        assert_eq!(out.limit_poly, g.ground_truth, "seed {seed}");
        assert_eq!(out.dimension, 5);
        let exact = RankOneInstance::from_base(&out.to_instance());
        assert_eq!(check_border_limit(&exact).unwrap(), g.ground_truth);
    }
}

#[test]
fn idempotence_on_exact_instances() {
    // debordering an eps-free instance reproduces its polynomial
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for _ in 0..5 {
        let g = generate(&GeneratorSpec {
            n: 4,
            r: 2,
            seed: rng.gen(),
            z_range: 0,
            mixing_steps: 2,
            include_a0: false,
        })
        .unwrap();
        let out = deborder_general(&g.instance).unwrap();
        assert_eq!(out.limit_poly, g.ground_truth);
    }
}

#[test]
fn constant_reduction_block_identity_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    for _ in 0..6 {
        let n = rng.gen_range(1..=2);
        let r = rng.gen_range(1..=2);
        let g = generate(&spec(n.max(r), r, rng.gen(), true)).unwrap();
        let inst = &g.instance;
        let n = inst.num_vars();
        let r = inst.order();
        let reduced = build_constant_reduction(inst).unwrap();

        for _ in 0..10 {
            // nonzero values keep the fresh diagonal block invertible
            let nonzero = |rng: &mut ChaCha8Rng| loop {
                let c = random_small_rational(rng, 3);
                if !c.is_zero() {
                    return RationalFunction::constant(c);
                }
            };
            let x: Vec<RationalFunction> = (0..2 * n + r).map(|_| nonzero(&mut rng)).collect();
            let lhs = reduced.eval_det(&x).unwrap();

            // det(X1) * det(X2) * det(A0 + U X X1^{-1} V^T)
            let det_x1: RationalFunction = x[n..2 * n]
                .iter()
                .fold(RationalFunction::one(), |a, b| a * b);
            let det_x2: RationalFunction = x[2 * n..]
                .iter()
                .fold(RationalFunction::one(), |a, b| a * b);
            let ratio: Vec<RationalFunction> =
                (0..n).map(|i| x[i].div(&x[n + i]).unwrap()).collect();
            let rhs = det_x1 * det_x2 * inst.eval_det(&ratio).unwrap();
            assert_eq!(lhs, rhs);
        }

        // substituting 1 for the fresh variables reproduces the original
        let original = inst.extract_coefficients().unwrap();
        let restricted = reduced
            .extract_coefficients()
            .unwrap()
            .substitute_ones_above(n);
        assert_eq!(original, restricted);
    }
}

#[test]
fn principal_minor_closure_on_border_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..6 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(k.max(2)..=5);
        let g = generate(&spec(n, k, rng.gen(), false)).unwrap();
        let a = g
            .instance
            .left_factor()
            .transpose()
            .matmul(g.instance.right_factor())
            .unwrap();
        let inst = match PrincipalMinorInstance::new(a.clone(), k) {
            Ok(inst) => inst,
            Err(_) => continue, // factor pair collapsed below rank k
        };
        let closure = close_principal_minors(&inst).unwrap();
        let expected = a
            .principal_minor_table(k)
            .unwrap()
            .map(|d| d.limit0().unwrap());
        assert_eq!(closure.minor_limits, expected);
        assert_eq!(closure.b.principal_minor_table(k).unwrap(), expected);
        assert!(closure.b.rank() <= k);
    }
}

#[test]
fn zero_polynomial_instances_deborder_to_zero() {
    // disjoint base families force the zero polynomial
    let u = Matrix::from_rows(vec![vec![
        RationalFunction::one(),
        RationalFunction::zero(),
    ]])
    .unwrap();
    let v = Matrix::from_rows(vec![vec![
        RationalFunction::zero(),
        RationalFunction::eps(),
    ]])
    .unwrap();
    let inst = RankOneInstance::new(None, u, v).unwrap();
    let out = deborder_general(&inst).unwrap();
    assert!(out.limit_poly.is_zero());
    assert!(out.u_hat.is_zero() && out.v_hat.is_zero());
}

#[test]
fn limit_polynomial_agrees_between_routes_on_borderline_valuations() {
    // coefficients with genuinely eps-dependent values that still converge
    let u = Matrix::from_rows(vec![vec![
        deborder::parse_rational_function("1 + eps").unwrap(),
        deborder::parse_rational_function("1/eps").unwrap(),
    ]])
    .unwrap();
    let v = Matrix::from_rows(vec![vec![
        deborder::parse_rational_function("1 - eps^2").unwrap(),
        deborder::parse_rational_function("eps + eps^2").unwrap(),
    ]])
    .unwrap();
    let inst = RankOneInstance::new(None, u, v).unwrap();
    // products: (1+eps)(1-eps^2) -> 1 and (1/eps)(eps+eps^2) -> 1
    let out = deborder_general(&inst).unwrap();
    let mut expected = deborder::MultilinearPoly::zero(2);
    expected.add_term(Subset::new(vec![1]).unwrap(), Rational::one());
    expected.add_term(Subset::new(vec![2]).unwrap(), Rational::one());
    assert_eq!(out.limit_poly, expected);
}
