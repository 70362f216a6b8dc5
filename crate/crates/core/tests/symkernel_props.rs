mod common;

use minsurf::contact::GeneratorCatalog;
use minsurf::symkernel::span_membership;
use minsurf::{ContactExpr, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e(s: &str) -> ContactExpr {
    ContactExpr::parse(s).unwrap()
}

fn renormalized(x: &ContactExpr) -> ContactExpr {
    ContactExpr::normalize(x.raw_terms())
}

fn central_diff_p(x: &ContactExpr, p: f64, q: f64, h: f64) -> f64 {
    (x.eval(p + h, q) - x.eval(p - h, q)) / (2.0 * h)
}

proptest! {
    #[test]
    fn normalize_is_idempotent(raw in common::raw_terms()) {
        let once = ContactExpr::normalize(raw);
        prop_assert_eq!(renormalized(&once), once);
    }

    #[test]
    fn operations_return_canonical_forms(a in common::expr(), b in common::expr(), r in common::small_rational()) {
        let outputs = [
            a.add(&b),
            a.sub(&b),
            a.scale(&r),
            a.mul_monomial(2, 1),
            a.mul_one_plus_p2(),
            a.div_one_plus_p2(),
            a.diff_p(),
            a.diff_q(),
            a.pde_residual(),
        ];
        for out in outputs {
            prop_assert_eq!(renormalized(&out), out);
        }
    }

    #[test]
    fn class_closure_under_linear_operations(a in common::expr()) {
        // (1+p^2) and its inverse are mutually inverse within the class
        prop_assert_eq!(a.mul_one_plus_p2().div_one_plus_p2(), a.clone());
        prop_assert_eq!(a.div_one_plus_p2().mul_one_plus_p2(), a.clone());
        prop_assert_eq!(a.scale(&Rational::from_integer(0.into())), ContactExpr::zero());
    }

    #[test]
    fn add_is_commutative_and_associative(a in common::expr(), b in common::expr(), c in common::expr()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.equals(&b) == a.sub(&b).is_zero());
    }

    #[test]
    fn mixed_partials_commute(a in common::expr()) {
        prop_assert_eq!(a.diff_p().diff_q(), a.diff_q().diff_p());
    }

    #[test]
    fn residual_is_linear(a in common::expr(), b in common::expr(), x in common::small_rational(), y in common::small_rational()) {
        let lhs = a.scale(&x).add(&b.scale(&y)).pde_residual();
        let rhs = a.pde_residual().scale(&x).add(&b.pde_residual().scale(&y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn format_then_parse_is_identity(a in common::expr()) {
        let text = a.to_string();
        prop_assert_eq!(ContactExpr::parse(&text).unwrap(), a, "text: {}", text);
    }
}

#[test]
fn diff_p_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 20 {
        let x = common::random_nonzero_expr(&mut rng);
        let dx = x.diff_p();
        for _ in 0..10 {
            let (p, q) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let exact = dx.eval(p, q);
            let fd = central_diff_p(&x, p, q, 1e-5);
            let scale = exact.abs().max(1.0);
            assert!((exact - fd).abs() <= 1e-6 * scale, "{x} at ({p}, {q}): exact {exact}, fd {fd}");
        }
        checked += 1;
    }
}

#[test]
fn diff_p_example_against_finite_differences() {
    let x = e("p*q^2/(1+p^2)");
    let dx = x.diff_p();
    assert_eq!(dx, e("q^2*(1 - p^2)/(1+p^2)^2"));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let (p, q) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let fd = central_diff_p(&x, p, q, 1e-5);
        assert!((dx.eval(p, q) - fd).abs() < 1e-8, "at ({p}, {q})");
    }
}

#[test]
fn normalize_examples() {
    assert_eq!(e("(1+p^2)*p/(1+p^2)"), e("p"));
    assert_eq!(e("q*atan(p) + 0*q^2").slot_count(), 1);
    let x = e("(p^3+p)/(1+p^2)^2");
    assert_eq!(x, e("p/(1+p^2)"));
    assert_eq!(x.max_denom_power(), 1);
}

#[test]
fn arithmetic_examples() {
    let cat = GeneratorCatalog::builtin();
    let phi = |n: &str| cat.get_contact(n).unwrap();
    let minus_one = Rational::from_integer((-1).into());
    assert!(phi("phi5").add(&phi("phi5").scale(&minus_one)).is_zero());
    assert_eq!(phi("phi2_2").scale(&Rational::from_integer(1.into())), phi("phi2_2"));
    assert_eq!(phi("phi7").add(&phi("phi1")), e("q^2/(1+p^2) - p*atan(p) + 1"));
    assert_eq!(ContactExpr::one().mul_monomial(1, 1), e("p*q"));
    assert_eq!(ContactExpr::atan_p().mul_monomial(1, 0), e("p*atan(p)"));
    assert_eq!(e("p/(1+p^2)").mul_monomial(1, 0), e("p^2/(1+p^2)"));
}

#[test]
fn derivative_and_residual_examples() {
    assert_eq!(ContactExpr::atan_p().diff_p(), e("1/(1+p^2)"));
    assert_eq!(e("q*atan(p)").diff_q(), ContactExpr::atan_p());
    assert!(e("q*atan(p)").pde_residual().is_zero());
    assert!(e("p").pde_residual().is_zero());
    assert_eq!(e("p^2").pde_residual(), e("2 + 2*p^2"));
    assert!(e("p*q^2/(1+p^2) + atan(p)").pde_residual().is_zero());
    assert!(e("p/(1+p^2)*(1+p^2)").equals(&e("p")));
}

#[test]
fn span_membership_examples() {
    let cat = GeneratorCatalog::builtin();
    let phi = |n: &str| cat.get_contact(n).unwrap();
    let r = |n: i64| Rational::from_integer(n.into());
    assert_eq!(span_membership(&phi("phi6"), &[phi("phi6"), phi("phi1")]), Some(vec![r(1), r(0)]));
    assert_eq!(span_membership(&phi("phi5"), &[phi("phi1"), phi("phi2_1"), phi("phi2_2")]), None);
    let offset = minsurf::contact::recursion_t(1, &phi("phi6")).sub(&phi("phi7"));
    assert_eq!(
        span_membership(&offset, &[phi("phi1"), phi("phi2_1"), phi("phi2_2")]),
        Some(vec![r(1), r(0), r(0)])
    );
}

#[test]
fn parse_examples() {
    assert_eq!(e("q*atan(p)"), ContactExpr::q().try_mul(&ContactExpr::atan_p()).unwrap());
    assert!(e("0").is_zero());
    assert_eq!(e("p*q^2/(1+p^2) + atan(p)"), GeneratorCatalog::builtin().get_contact("phi6").unwrap());
    assert_eq!(e("p*q^2/(1+p^2)+arctan(p)"), e("p*q^2/(1+p^2) + atan(p)"));
}

#[test]
fn parser_rejects_out_of_class_input() {
    for bad in ["atan(p)*atan(p)", "p/(2+p^2)", "p/q", "r", "1/atan(p)", "p^", "(p"] {
        assert!(ContactExpr::parse(bad).is_err(), "{bad}");
    }
}
