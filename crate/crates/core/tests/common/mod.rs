#![allow(dead_code)]

use minsurf::symkernel::{PolyP, RawTerm};
use minsurf::{ContactExpr, Rational};
use proptest::prelude::*;
use rand::Rng;

/// Raw summand from small integer data: numerator coefficients `c_k / den`.
pub fn raw_term(atan: bool, q_degree: u32, coeffs: &[i64], den: i64, denom_power: u32) -> RawTerm {
    let numerator = PolyP::from_coeffs(coeffs.iter().map(|&c| Rational::new(c.into(), den.into())).collect());
    RawTerm { atan, q_degree, numerator, denom_power }
}

type TermData = (bool, u32, Vec<i64>, i64, u32);

fn term_data() -> impl Strategy<Value = TermData> {
    (any::<bool>(), 0u32..4, prop::collection::vec(-5i64..=5, 1..5), 1i64..=4, 0u32..4)
}

pub fn raw_terms() -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec(term_data(), 0..5)
        .prop_map(|ts| ts.iter().map(|(a, n, c, d, k)| raw_term(*a, *n, c, *d, *k)).collect())
}

pub fn expr() -> impl Strategy<Value = ContactExpr> {
    raw_terms().prop_map(ContactExpr::normalize)
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Same distribution as [`expr`], from a plain RNG.
pub fn random_expr<R: Rng>(rng: &mut R) -> ContactExpr {
    let n_terms = rng.gen_range(1..5);
    let raw: Vec<RawTerm> = (0..n_terms)
        .map(|_| {
            let len = rng.gen_range(1..5);
            let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(-5..=5)).collect();
            raw_term(rng.gen(), rng.gen_range(0..4), &coeffs, rng.gen_range(1..=4), rng.gen_range(0..4))
        })
        .collect();
    ContactExpr::normalize(raw)
}

/// Nonzero random expression.
pub fn random_nonzero_expr<R: Rng>(rng: &mut R) -> ContactExpr {
    loop {
        let e = random_expr(rng);
        if !e.is_zero() {
            return e;
        }
    }
}
