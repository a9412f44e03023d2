use bassorder::base_ring::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

fn q5() -> BaseField {
    BaseField::quadratic(5).unwrap()
}

fn r(a: i64, b: i64) -> RingElement {
    RingElement::new(a, b)
}

/// Roots of X² - X - 1 modulo p, by exhaustion.
fn roots_mod(p: i64) -> Vec<i64> {
    (0..p).filter(|x| (x * x - x - 1).rem_euclid(p) == 0).collect()
}

#[test]
fn fundamental_units() {
    let k = q5();
    assert_eq!(k.fundamental_unit(), &r(0, 1));
    assert_eq!(k.fundamental_unit_norm(), -1);
    assert!(k.narrow_class_one);
    let k3 = BaseField::quadratic(3).unwrap();
    assert_eq!(k3.fundamental_unit(), &r(2, 1));
    assert!(!k3.narrow_class_one);
    assert!(BaseField::quadratic(10).is_err());
}

#[test]
fn factor_two_inert_over_sqrt5() {
    let ps = factor_prime(&q5(), 2).unwrap();
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].splitting, Splitting::Inert);
    assert_eq!(ps[0].f, 2);
    assert_eq!(ps[0].pi, r(2, 0));
}

#[test]
fn factor_five_ramified() {
    // brute force: X² - X - 1 has a single root mod 5
    assert_eq!(roots_mod(5).len(), 1);
    let ps = factor_prime(&q5(), 5).unwrap();
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].splitting, Splitting::Ramified);
    assert_eq!(ps[0].pi, r(-1, 2));
    assert_eq!(ps[0].valuation(&ps[0].pi_scalar()), Some(1));
}

#[test]
fn factor_split_and_rational() {
    assert_eq!(roots_mod(11).len(), 2);
    let ps = factor_prime(&q5(), 11).unwrap();
    assert_eq!(ps.len(), 2);
    assert_ne!(ps[0].pi, ps[1].pi);
    for p in &ps {
        assert_eq!(q5().norm_int(&p.pi).abs(), BigInt::from(11));
        assert_eq!(p.valuation(&p.pi_scalar()), Some(1));
    }
    assert_eq!(ps[0].valuation(&ps[1].pi_scalar()), Some(0));
    let q = factor_prime(&BaseField::rational(), 3).unwrap();
    assert_eq!((q[0].f, q[0].pi.clone()), (1, r(3, 0)));
    assert!(factor_prime(&BaseField::quadratic(2).unwrap(), 2).is_err());
}

#[test]
fn residue_reps_at_three_and_sqrt5() {
    let p3 = &factor_prime(&q5(), 3).unwrap()[0];
    let rf = p3.residue_field();
    let want = vec![r(1, 0), r(2, 0), r(0, 1), r(1, 1), r(2, 1), r(0, 2), r(1, 2), r(2, 2), r(0, 0)];
    assert_eq!(rf.reps, want);
    let p5 = &factor_prime(&q5(), 5).unwrap()[0];
    let got: Vec<_> = p5.residue_field().reps;
    assert_eq!(got, vec![r(1, 0), r(4, 0), r(2, 0), r(3, 0), r(0, 0)]);
    let p = &factor_prime(&BaseField::rational(), 3).unwrap()[0];
    assert_eq!(p.residue_field().reps, vec![r(1, 0), r(2, 0), r(0, 0)]);
    let p2 = &factor_prime(&q5(), 2).unwrap()[0];
    assert_eq!(p2.residue_field().reps, vec![r(1, 0), r(0, 0), r(0, 1), r(1, 1)]);
}

#[test]
fn hensel_examples() {
    let q = BaseField::rational();
    let p13 = &factor_prime(&q, 13).unwrap()[0];
    let ctx = LocalContext::new(p13, 1);
    let x = ctx.hensel_sqrt(&FieldScalar::from_int(-1)).unwrap();
    // brute force over residues
    let first = (0..13).find(|x: &i64| (x * x + 1) % 13 == 0).unwrap();
    assert_eq!(x, r(first, 0));
    let p2 = &factor_prime(&q, 2).unwrap()[0];
    let ctx2 = LocalContext::new(p2, 4);
    let y = ctx2.hensel_sqrt(&FieldScalar::from_int(-7)).unwrap();
    assert!((&y.a * &y.a + BigInt::from(7)).mod_floor(&BigInt::from(16)) == BigInt::from(0));
    assert_eq!(y, r(3, 0));
    assert_eq!(ctx.hensel_sqrt(&FieldScalar::one()).unwrap(), r(1, 0));
    assert!(ctx.hensel_sqrt(&FieldScalar::from_int(2)).is_err());
}

#[test]
fn alpha_at_three() {
    let p3 = &factor_prime(&q5(), 3).unwrap()[0];
    let ctx = LocalContext::new(p3, 2);
    let v = ctx.solve_table_parameters(ParamTag::Alpha).unwrap();
    assert_eq!(v, vec![r(2, 0), ctx.reduce_ring(&r(-1, 0))]);
}

#[test]
fn alpha_at_sqrt5_accepts_printed_pair() {
    let k = q5();
    let p5 = &factor_prime(&k, 5).unwrap()[0];
    // working precision m + 1 = 2 for the step into discriminant 6√5
    let ctx = LocalContext::new(p5, 2);
    let a0 = &FieldScalar::from_int(2) + &FieldScalar::new(rat(0, 1), rat(1, 3));
    let a1 = FieldScalar::from_int(-2);
    let lhs = &k.mul(&a0, &a0) - &k.mul(&a1, &a1);
    assert!(ctx.congruent(&lhs, &p5.pi_scalar()));
    let v = ctx.solve_table_parameters(ParamTag::Alpha).unwrap();
    let (b0, b1) = (v[0].to_scalar(), v[1].to_scalar());
    let lhs = &k.mul(&b0, &b0) - &k.mul(&b1, &b1);
    assert!(ctx.congruent(&lhs, &p5.pi_scalar()));
    assert!(ctx.congruent(&b0, &b1.clone()) || ctx.with_precision(1).congruent(&b0, &b1));
}

#[test]
fn beta_over_q_at_three() {
    let p = &factor_prime(&BaseField::rational(), 3).unwrap()[0];
    let ctx = LocalContext::new(p, 1);
    assert_eq!(ctx.delta, Some(r(2, 0)));
    assert_eq!(ctx.solve_table_parameters(ParamTag::Beta).unwrap(), vec![r(1, 0), r(1, 0)]);
    assert!(LocalContext::new(p, 0).solve_table_parameters(ParamTag::Beta).is_err());
}

#[test]
fn dyadic_constants() {
    let p2 = &factor_prime(&q5(), 2).unwrap()[0];
    let ctx = LocalContext::new(p2, 6);
    let k = q5();
    let table = [(1, -7), (3, -13), (25, 1), (9, 1), (3, -5), (1, -15), (3, -29), (3, -533)];
    for (i, (c, rr)) in table.iter().enumerate() {
        let mu = ctx.solve_table_parameters(ParamTag::Dyadic(i as u8 + 1)).unwrap().remove(0).to_scalar();
        let lhs = k.mul(&k.mul(&mu, &mu), &FieldScalar::from_int(*c));
        assert!(ctx.congruent(&lhs, &FieldScalar::from_int(*rr)), "mu_{}", i + 1);
    }
    assert!(ctx.with_precision(3).solve_table_parameters(ParamTag::Dyadic(1)).is_err());
}

#[test]
fn canonical_associates() {
    let k = q5();
    let x = r(3, 5).to_scalar();
    let c = k.canonical(&x);
    for u in [r(0, 1), r(-1, 0), r(1, 1), r(-1, 1)] {
        let y = k.mul(&x, &u.to_scalar());
        assert_eq!(k.canonical(&y), c);
    }
}

fn small() -> impl Strategy<Value = RingElement> {
    (-40i64..40, -40i64..40).prop_map(|(a, b)| r(a, b))
}

proptest! {
    #[test]
    fn valuation_is_additive(x in small(), y in small(), which in 0usize..4) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let k = q5();
        let primes: Vec<PrimeIdeal> = [2u64, 3, 5, 11].iter().flat_map(|p| factor_prime(&k, *p).unwrap()).collect();
        let p = &primes[which % primes.len()];
        let xy = k.mul_ring(&x, &y);
        prop_assert_eq!(p.valuation_ring(&xy), p.valuation_ring(&x) + p.valuation_ring(&y));
    }

    #[test]
    fn hensel_roots_square(x in small(), n in 1u32..5) {
        let k = q5();
        let p = &factor_prime(&k, 11).unwrap()[0];
        let ctx = LocalContext::new(p, n);
        let a = k.mul_ring(&x, &x).to_scalar();
        prop_assume!(p.is_unit(&a));
        let s = ctx.hensel_sqrt(&a).unwrap().to_scalar();
        prop_assert!(ctx.congruent(&k.mul(&s, &s), &a));
    }

    #[test]
    fn euclid_remainder_smaller(x in small(), c in small()) {
        prop_assume!(!c.is_zero());
        let k = q5();
        let (q, rem) = k.euclid_div(&x, &c).unwrap();
        prop_assert_eq!(&k.mul_ring(&q, &c) + &rem, x);
        prop_assert!(k.norm_int(&rem).abs() < k.norm_int(&c).abs());
    }

    #[test]
    fn residue_reps_distinct(p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let k = q5();
        for pr in factor_prime(&k, p).unwrap() {
            let rf = pr.residue_field();
            prop_assert_eq!(rf.q() as u64, pr.q());
            for (i, a) in rf.reps.iter().enumerate() {
                for b in &rf.reps[i + 1..] {
                    prop_assert_eq!(pr.valuation(&(a - b).to_scalar()), Some(0));
                }
            }
            prop_assert_eq!(&rf.reps[0], &r(1, 0));
            if p != 2 {
                prop_assert_eq!(rf.reps.last().unwrap(), &r(0, 0));
                prop_assert_eq!(rf.reduce_ring(&(&rf.reps[1] + &r(1, 0))), r(0, 0));
            }
        }
    }
}
