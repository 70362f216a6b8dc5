//! Functions on the first jet space, polynomial in `(x, y, u)` with
//! [`ContactExpr`] coefficients in `(p, q) = (u_x, u_y)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::symkernel::{join_signed, parse_with, Algebra, ClassError, ContactExpr, ParseError, Rational, Var};

use super::ContactError;

/// Exponents of `x^x y^y u^u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetMonomial {
    pub x: u8,
    pub y: u8,
    pub u: u8,
}

impl JetMonomial {
    pub const ONE: Self = Self { x: 0, y: 0, u: 0 };
    pub const X: Self = Self { x: 1, y: 0, u: 0 };
    pub const Y: Self = Self { x: 0, y: 1, u: 0 };
    pub const U: Self = Self { x: 0, y: 0, u: 1 };

    pub fn total_degree(&self) -> u32 {
        u32::from(self.x) + u32::from(self.y) + u32::from(self.u)
    }

    fn times(&self, other: &Self) -> Self {
        Self { x: self.x + other.x, y: self.y + other.y, u: self.u + other.u }
    }
}

/// Unrestricted polynomial in `(x, y, u)`; intermediate values of bracket
/// computations live here before being checked back into [`JetFunction`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct JetPoly {
    terms: BTreeMap<JetMonomial, ContactExpr>,
}

impl JetPoly {
    pub(crate) fn zero() -> Self {
        Self::default()
    }

    pub(crate) fn monomial(m: JetMonomial, c: ContactExpr) -> Self {
        let mut out = Self::zero();
        out.accumulate(m, &c);
        out
    }

    fn accumulate(&mut self, m: JetMonomial, c: &ContactExpr) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(existing) => existing.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c);
        }
        out
    }

    pub(crate) fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub(crate) fn neg(&self) -> Self {
        self.map_coeffs(ContactExpr::neg)
    }

    fn map_coeffs<F: Fn(&ContactExpr) -> ContactExpr>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.accumulate(*m, &f(c));
        }
        out
    }

    pub(crate) fn mul(&self, other: &Self) -> Result<Self, ClassError> {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.accumulate(m1.times(m2), &c1.try_mul(c2)?);
            }
        }
        Ok(out)
    }

    /// Coefficient-wise multiplication by `p^a q^b`.
    pub(crate) fn mul_pq(&self, p_degree: usize, q_degree: u32) -> Self {
        self.map_coeffs(|c| c.mul_monomial(p_degree, q_degree))
    }

    pub(crate) fn diff_p(&self) -> Self {
        self.map_coeffs(ContactExpr::diff_p)
    }

    pub(crate) fn diff_q(&self) -> Self {
        self.map_coeffs(ContactExpr::diff_q)
    }

    /// Partial derivative in one of `x`, `y`, `u`.
    pub(crate) fn diff_jet(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, lowered) = match var {
                Var::X => (m.x, JetMonomial { x: m.x.saturating_sub(1), ..*m }),
                Var::Y => (m.y, JetMonomial { y: m.y.saturating_sub(1), ..*m }),
                Var::U => (m.u, JetMonomial { u: m.u.saturating_sub(1), ..*m }),
                Var::P | Var::Q => panic!("diff_jet takes x, y or u"),
            };
            if e > 0 {
                out.accumulate(lowered, &c.scale(&Rational::from_integer(BigInt::from(e))));
            }
        }
        out
    }

    fn as_contact(&self) -> Option<ContactExpr> {
        match self.terms.len() {
            0 => Some(ContactExpr::zero()),
            1 => self.terms.get(&JetMonomial::ONE).cloned(),
            _ => None,
        }
    }
}

impl Algebra for JetPoly {
    fn from_rational(r: Rational) -> Self {
        Self::monomial(JetMonomial::ONE, ContactExpr::constant(r))
    }

    fn variable(v: Var) -> Option<Self> {
        Some(match v {
            Var::P => Self::monomial(JetMonomial::ONE, ContactExpr::p()),
            Var::Q => Self::monomial(JetMonomial::ONE, ContactExpr::q()),
            Var::X => Self::monomial(JetMonomial::X, ContactExpr::one()),
            Var::Y => Self::monomial(JetMonomial::Y, ContactExpr::one()),
            Var::U => Self::monomial(JetMonomial::U, ContactExpr::one()),
        })
    }

    fn atan() -> Self {
        Self::monomial(JetMonomial::ONE, ContactExpr::atan_p())
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }

    fn negate(&self) -> Self {
        self.neg()
    }

    fn times(&self, other: &Self) -> Result<Self, ClassError> {
        self.mul(other)
    }

    fn divide(&self, other: &Self) -> Result<Self, ClassError> {
        let divisor = other.as_contact().ok_or(ClassError::DivisionByJetVariable)?;
        let inverse = divisor.admissible_inverse()?;
        self.mul(&Self::monomial(JetMonomial::ONE, inverse))
    }
}

/// Generator of total degree at most one in `(x, y, u)`:
/// `c_0 + x c_x + y c_y + u c_u` with `c_*` in the [`ContactExpr`] class.
///
/// Covers the seven point generators as well as every element of the
/// commutative subalgebra (the `x, y, u`-free generators).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct JetFunction {
    poly: JetPoly,
}

impl JetFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_contact(e: ContactExpr) -> Self {
        Self { poly: JetPoly::monomial(JetMonomial::ONE, e) }
    }

    /// Builds `sum c_m m`; rejects monomials of total degree above one.
    pub fn from_terms<I: IntoIterator<Item = (JetMonomial, ContactExpr)>>(terms: I) -> Result<Self, ContactError> {
        let mut poly = JetPoly::zero();
        for (m, c) in terms {
            poly.accumulate(m, &c);
        }
        Self::try_from(poly)
    }

    pub fn parse(text: &str) -> Result<Self, ContactError> {
        let poly: JetPoly = parse_with(text).map_err(|e: ParseError| ContactError::Parse(e))?;
        Self::try_from(poly)
    }

    pub fn coeff(&self, m: JetMonomial) -> ContactExpr {
        self.poly.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &ContactExpr)> {
        self.poly.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.terms.is_empty()
    }

    /// The generator as a function of `(p, q)` alone, when it is one.
    pub fn as_contact(&self) -> Option<ContactExpr> {
        self.poly.as_contact()
    }

    pub fn is_contact(&self) -> bool {
        self.as_contact().is_some()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { poly: self.poly.add(&other.poly) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { poly: self.poly.sub(&other.poly) }
    }

    pub fn neg(&self) -> Self {
        Self { poly: self.poly.neg() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { poly: self.poly.map_coeffs(|c| c.scale(r)) }
    }

    pub(crate) fn poly(&self) -> &JetPoly {
        &self.poly
    }
}

impl TryFrom<JetPoly> for JetFunction {
    type Error = ContactError;

    fn try_from(poly: JetPoly) -> Result<Self, ContactError> {
        if poly.terms.keys().any(|m| m.total_degree() > 1) {
            return Err(ContactError::DegreeOverflow);
        }
        Ok(Self { poly })
    }
}

impl From<ContactExpr> for JetFunction {
    fn from(e: ContactExpr) -> Self {
        Self::from_contact(e)
    }
}

/// Jet grammar: `-p*x - q*y + u`, `x + p*u`, or a plain contact expression.
impl fmt::Display for JetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let order = [(JetMonomial::X, "x"), (JetMonomial::Y, "y"), (JetMonomial::U, "u")];
        for (m, var) in order {
            let Some(c) = self.poly.terms.get(&m) else { continue };
            let mut terms = c.signed_terms();
            if terms.len() == 1 {
                let (neg, body) = terms.remove(0);
                let body = if body == "1" { var.to_string() } else { format!("{body}*{var}") };
                parts.push((neg, body));
            } else {
                parts.push((false, format!("({c})*{var}")));
            }
        }
        if let Some(c) = self.poly.terms.get(&JetMonomial::ONE) {
            parts.extend(c.signed_terms());
        }
        f.write_str(&join_signed(&parts))
    }
}

impl fmt::Debug for JetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetFunction({self})")
    }
}
