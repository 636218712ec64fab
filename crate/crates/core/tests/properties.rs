mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_perron::charpoly::{char_poly, check_coeff_bounds, check_det_bound, newton_polygon, root_valuations};
use padic_perron::counterexample::{build_counterexample, run_campaign, sample_matrix, CampaignConfig, CounterexampleSpec, EllPolicy};
use padic_perron::field::{Exact, FieldContext, FpPoly, RatFunc, Valuation, ValuedElement};
use padic_perron::linalg::{solve_kernel, RationalMatrix};
use padic_perron::perron::{analyze, check_hypothesis, Status};
use padic_perron::report::{to_json, ReportJson};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_char_poly, power_iteration};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-100_000i64..100_000, 1i64..2_000).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |r| *r != BigRational::from_integer(0.into()))
}

fn rational_matrix(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-30i64..30, 1i64..6).prop_map(|(a, b)| BigRational::new(a.into(), b.into())), n * n)
}

fn to_matrix(n: usize, xs: &[BigRational]) -> RationalMatrix {
    RationalMatrix::from_fn(n, |i, j| Exact::Rational(xs[i * n + j].clone()))
}

fn hypothesis_matrix(p: u64, n: usize, seed: u64, precision: u32) -> (FieldContext, RationalMatrix) {
    let ctx = FieldContext::p_adic(p, precision).unwrap();
    let o = ctx.ord_of_integer(n as i64).finite().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ell = EllPolicy::MinimalPlusOne.pick(o, &mut rng);
    let a = sample_matrix(&mut rng, &ctx, n, ell).unwrap();
    (ctx, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ultrametric_inequality(p in prime(), a in rational(), b in rational()) {
        let ctx = FieldContext::p_adic(p, 24).unwrap();
        let (x, y) = (ValuedElement::embed(&Exact::Rational(a), &ctx), ValuedElement::embed(&Exact::Rational(b), &ctx));
        let s = &x + &y;
        let m = x.ord().min(y.ord());
        prop_assert!(s.ord_reading().certainly_at_least(m.finite().unwrap_or(i64::MAX).min(s.abs_precision())));
        if x.ord() != y.ord() {
            prop_assert_eq!(s.ord(), m);
        }
    }

    #[test]
    fn valuation_is_multiplicative(p in prime(), a in nonzero_rational(), b in nonzero_rational()) {
        let ctx = FieldContext::p_adic(p, 16).unwrap();
        let (x, y) = (ValuedElement::embed(&Exact::Rational(a), &ctx), ValuedElement::embed(&Exact::Rational(b), &ctx));
        prop_assert_eq!((&x * &y).ord(), x.ord() + y.ord());
    }

    #[test]
    fn arithmetic_commutes_with_embedding(p in prime(), a in rational(), b in nonzero_rational()) {
        let ctx = FieldContext::p_adic(p, 20).unwrap();
        let (ea, eb) = (Exact::Rational(a), Exact::Rational(b));
        let (x, y) = (ValuedElement::embed(&ea, &ctx), ValuedElement::embed(&eb, &ctx));
        let cases = [
            (&x + &y, &ea + &eb),
            (&x - &y, &ea - &eb),
            (&x * &y, &ea * &eb),
            (x.checked_div(&y).unwrap(), ea.checked_div(&eb).unwrap()),
        ];
        for (valued, exact) in cases {
            let reference = ValuedElement::embed(&exact, &ctx);
            prop_assert!(valued.congruent(&reference), "{} vs {}", valued, exact);
        }
    }

    #[test]
    fn laurent_arithmetic_commutes_with_embedding(
        p in prime(),
        a in prop::collection::vec(0u32..7, 1..6),
        b in prop::collection::vec(0u32..7, 1..6),
        shift in 0usize..3,
    ) {
        let ctx = FieldContext::laurent(p, 12).unwrap();
        let pa = FpPoly::new(ctx.p(), a);
        let pb = FpPoly::new(ctx.p(), b);
        prop_assume!(!pa.is_zero() && !pb.is_zero());
        let ea = Exact::Function(RatFunc::new(pa, FpPoly::monomial(ctx.p(), shift, 1)).unwrap());
        let eb = Exact::Function(RatFunc::from_poly(pb));
        let (x, y) = (ValuedElement::embed(&ea, &ctx), ValuedElement::embed(&eb, &ctx));
        prop_assert!((&x * &y).congruent(&ValuedElement::embed(&(&ea * &eb), &ctx)));
        prop_assert!((&x + &y).congruent(&ValuedElement::embed(&(&ea + &eb), &ctx)));
        prop_assert!(x.checked_div(&y).unwrap().congruent(&ValuedElement::embed(&ea.checked_div(&eb).unwrap(), &ctx)));
        prop_assert_eq!((&x * &y).ord(), x.ord() + y.ord());
    }

    #[test]
    fn double_inverse(p in prime(), a in nonzero_rational()) {
        let ctx = FieldContext::p_adic(p, 20).unwrap();
        let x = ValuedElement::embed(&Exact::Rational(a), &ctx);
        let back = x.inv().unwrap().inv().unwrap();
        prop_assert!(back.congruent(&x));
        prop_assert_eq!(back.abs_precision(), x.abs_precision());
    }

    #[test]
    fn norm_of_product(p in prime(), a in rational_matrix(3), b in rational_matrix(3)) {
        let ctx = FieldContext::p_adic(p, 20).unwrap();
        let (ma, mb) = (to_matrix(3, &a).embed(&ctx), to_matrix(3, &b).embed(&ctx));
        let prod = ma.mat_mul(&mb).unwrap();
        let bound = ma.mat_norm().lower_bound() + mb.mat_norm().lower_bound();
        prop_assert!(prod.mat_norm().certainly_at_least(bound.min(prod.min_abs_precision())));
    }

    #[test]
    fn kernel_vectors_are_annihilated(p in prime(), a in rational_matrix(3), order in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        // third row = first + second, so the matrix is singular
        let mut rows: Vec<Vec<Exact>> = (0..2).map(|i| (0..3).map(|j| Exact::Rational(a[i * 3 + j].clone())).collect()).collect();
        let last: Vec<Exact> = (0..3).map(|j| &rows[0][j] + &rows[1][j]).collect();
        rows.push(last);
        let m = RationalMatrix::new(rows.clone()).unwrap();
        let ctx = FieldContext::p_adic(p, 24).unwrap();
        let vm = m.embed(&ctx);
        let x = solve_kernel(&vm).unwrap();
        for e in vm.mul_vec(&x).unwrap().entries() {
            prop_assert!(e.is_zero(), "M x has a nonzero entry {}", e);
        }
        prop_assert_eq!(x.norm().lower_bound(), 0);

        let permuted = RationalMatrix::new(order.iter().map(|&i| rows[i].clone()).collect()).unwrap();
        let y = solve_kernel(&permuted.embed(&ctx)).unwrap();
        for (u, v) in x.entries().iter().zip(y.entries()) {
            prop_assert!(u.congruent(v), "{} vs {}", u, v);
        }
    }

    #[test]
    fn charpoly_matches_permutation_expansion(n in 1usize..=4, xs in rational_matrix(4)) {
        let a = to_matrix(n, &xs[..n * n]);
        let f = char_poly(&a);
        prop_assert_eq!(f.coeffs(), &brute_char_poly(&a)[..]);
    }

    #[test]
    fn determinant_and_trace_identities(n in 1usize..=5, xs in rational_matrix(5)) {
        let a = to_matrix(n, &xs[..n * n]);
        let f = char_poly(&a);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let brute_det = brute_char_poly(&a)[0].clone();
        prop_assert_eq!(&f.determinant(), &(&Exact::Rational(BigInt::from(sign).into()) * &brute_det));
        prop_assert_eq!(a.trace(), -f.coeff(n - 1));
    }

    #[test]
    fn polygon_is_a_lower_convex_hull(p in prime(), n in 1usize..=5, xs in rational_matrix(5)) {
        let ctx = FieldContext::p_adic(p, 16).unwrap();
        let f = char_poly(&to_matrix(n, &xs[..n * n]));
        let pg = newton_polygon(&f, &ctx);
        for w in pg.segments.windows(2) {
            prop_assert!(w[0].slope < w[1].slope);
        }
        for (s, v) in pg.segments.iter().zip(&pg.vertices) {
            for pt in &pg.points {
                // (pt.1 - v.1) >= slope * (pt.0 - v.0)
                let lhs = num_rational::Ratio::from_integer(pt.1 - v.1);
                prop_assert!(lhs >= s.slope.0 * (pt.0 - v.0));
            }
        }
        let zero_mult = f.coeffs().iter().position(|c| !c.is_zero()).unwrap() as i64;
        let total: i64 = root_valuations(&pg).iter().map(|r| r.count).sum();
        prop_assert_eq!(total, n as i64 - zero_mult);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bound_certificates_hold(p in prime(), n in 1usize..=6, seed in any::<u64>()) {
        let (ctx, a) = hypothesis_matrix(p, n, seed, 32);
        let h = check_hypothesis(&a, &ctx);
        prop_assert!(h.satisfied);
        let l = h.effective_ell(32).unwrap();
        prop_assert!(check_det_bound(&a, &ctx, l).unwrap().holds);
        for c in check_coeff_bounds(&char_poly(&a), &ctx, l, n) {
            prop_assert!(c.holds, "{:?}", c);
        }
    }

    #[test]
    fn power_iteration_agrees_with_newton(p in prime(), n in 2usize..=5, seed in any::<u64>(), start in prop::collection::vec(-50i64..50, 5)) {
        let (ctx, a) = hypothesis_matrix(p, n, seed, 24);
        let r = analyze(&a, &ctx).unwrap();
        prop_assert_eq!(&r.status, &Status::Certified);
        let lambda = r.lambda_max.unwrap().lambda;
        let mut start = start[..n].to_vec();
        start[0] = 1;
        let est = power_iteration(&a, ctx.p(), 400, 120, &start).unwrap();
        let k = i64::from(est.digits).min(lambda.abs_precision());
        prop_assert!(k >= 20, "only {} digits", k);
        let oracle = ValuedElement::embed(&Exact::Rational(est.lambda.into()), &ctx.with_precision(est.digits + 1));
        prop_assert!(lambda.agrees_to(&oracle, k));
    }

    #[test]
    fn scaling_the_matrix_scales_lambda(p in prime(), n in 1usize..=4, seed in any::<u64>(), alpha in nonzero_rational()) {
        let (ctx, a) = hypothesis_matrix(p, n, seed, 24);
        let alpha = Exact::Rational(alpha);
        let r = analyze(&a, &ctx).unwrap();
        let s = analyze(&a.scale(&alpha), &ctx).unwrap();
        prop_assert!(s.is_complete(), "{:?}", s.status);
        let (l, ls) = (r.lambda_max.unwrap().lambda, s.lambda_max.unwrap().lambda);
        let scaled = &l * &ValuedElement::embed(&alpha, l.context());
        prop_assert!(scaled.congruent(&ls), "{} vs {}", scaled, ls);
        let (x, y) = (r.eigenvector.unwrap().kernel, s.eigenvector.unwrap().kernel);
        for (u, v) in x.entries().iter().zip(y.entries()) {
            prop_assert!(u.congruent(v));
        }
        let (pa, ps) = (r.projection.unwrap(), s.projection.unwrap());
        let k = pa.certified_precision.min(ps.certified_precision);
        prop_assert!(k >= 24);
        for (u, v) in pa.p.entries().iter().zip(ps.p.entries()) {
            prop_assert!(u.agrees_to(v, k));
        }
    }

    #[test]
    fn reports_are_deterministic(p in prime(), n in 1usize..=4, seed in any::<u64>()) {
        let (ctx, a) = hypothesis_matrix(p, n, seed, 20);
        let first = to_json(&ReportJson::from(&analyze(&a, &ctx).unwrap()));
        prop_assert_eq!(first, to_json(&ReportJson::from(&analyze(&a, &ctx).unwrap())));
    }
}

#[test]
fn counterexample_entries_sit_on_the_boundary() {
    for p in PRIMES {
        for n in (1..=8).filter(|n| n % p as usize == 0) {
            let spec = CounterexampleSpec::new(p, n).unwrap();
            let ctx = FieldContext::p_adic(p, 16).unwrap();
            let h = check_hypothesis(&build_counterexample(&spec), &ctx);
            assert_eq!(h.ell, Some(Valuation::Finite(spec.ell)));
            assert_eq!(2 * ctx.ord_of_integer(n as i64).finite().unwrap(), spec.ell);
        }
    }
}

#[test]
fn counterexample_coefficients_match_closed_forms() {
    for p in PRIMES {
        for n in (1..=8).filter(|n| n % p as usize == 0) {
            let spec = CounterexampleSpec::new(p, n).unwrap();
            let f = char_poly(&build_counterexample(&spec));
            assert_eq!(*f.coeff(n - 1), Exact::Rational(spec.expected_c_top().into()), "p={p} n={n}");
            assert_eq!(*f.coeff(n - 2), Exact::Rational(spec.expected_c_next().into()), "p={p} n={n}");
            assert!((0..n - 2).all(|j| f.coeff(j).is_zero()));
        }
    }
}

#[test]
fn campaigns_are_reproducible() {
    for policy in [EllPolicy::Minimal, EllPolicy::RandomInRange] {
        let cfg = CampaignConfig {
            primes: vec![2, 3],
            trials: 24,
            precision: 16,
            ell_policy: policy,
            seed: 7,
            ..CampaignConfig::default()
        };
        let a = run_campaign(&cfg).unwrap();
        assert_eq!(a.passes, 24, "{:?}", a.failures);
        assert_eq!(to_json(&a), to_json(&run_campaign(&cfg).unwrap()));
    }
}

#[test]
fn kernel_of_exact_eigenproblem() {
    let ctx = FieldContext::p_adic(3, 20).unwrap();
    let m = common::mat(&ctx, &[&["-1", "-5"], &["1", "5"]]).embed(&ctx);
    let x = solve_kernel(&m).unwrap();
    assert!(x.get(0).congruent(&common::val(&ctx, "1")));
    assert!(x.get(1).congruent(&common::val(&ctx, "-1/5")));
}
