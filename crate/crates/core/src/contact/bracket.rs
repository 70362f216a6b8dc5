//! Contact Jacobi bracket and the recursion operators it induces on the
//! commutative subalgebra of `(p, q)`-only generators.

use std::fmt;
use std::str::FromStr;

use crate::symkernel::{ContactExpr, Var};

use super::jet::{JetFunction, JetMonomial, JetPoly};
use super::ContactError;

/// Total derivative truncated to first-order generators:
/// `D_i = d/dx_i + p_i d/du`.
fn total_derivative(f: &JetPoly, i: usize) -> JetPoly {
    let (var, p_deg, q_deg) = if i == 0 { (Var::X, 1, 0) } else { (Var::Y, 0, 1) };
    f.diff_jet(var).add(&f.diff_jet(Var::U).mul_pq(p_deg, q_deg))
}

fn momentum_derivative(f: &JetPoly, i: usize) -> JetPoly {
    if i == 0 {
        f.diff_p()
    } else {
        f.diff_q()
    }
}

/// `{f, g} = sum_i (D_i f * dg/dp_i - D_i g * df/dp_i) + f dg/du - g df/du`
/// with `p_1 = p`, `p_2 = q`.
///
/// Fails with [`ContactError::DegreeOverflow`] if the result leaves the
/// degree-one class, or with a class error if a product needs `atan(p)^2`.
pub fn jacobi_bracket(f: &JetFunction, g: &JetFunction) -> Result<JetFunction, ContactError> {
    let (f, g) = (f.poly(), g.poly());
    let mut acc = JetPoly::zero();
    for i in 0..2 {
        let a = total_derivative(f, i).mul(&momentum_derivative(g, i))?;
        let b = total_derivative(g, i).mul(&momentum_derivative(f, i))?;
        acc = acc.add(&a).sub(&b);
    }
    acc = acc
        .add(&f.mul(&g.diff_jet(Var::U))?)
        .sub(&g.mul(&f.diff_jet(Var::U))?);
    JetFunction::try_from(acc)
}

/// `{phi3_12, phi} = p phi_q - q phi_p`.
pub fn recursion_rot12(phi: &ContactExpr) -> ContactExpr {
    phi.diff_q().mul_monomial(1, 0).sub(&phi.diff_p().mul_monomial(0, 1))
}

/// `{phi3_i, phi}`: for `i = 1`, `-p phi + (1+p^2) phi_p + pq phi_q`;
/// for `i = 2`, `-q phi + (1+q^2) phi_q + pq phi_p`.
pub fn recursion_t(i: u8, phi: &ContactExpr) -> ContactExpr {
    let (phi_p, phi_q) = (phi.diff_p(), phi.diff_q());
    match i {
        1 => phi
            .mul_monomial(1, 0)
            .neg()
            .add(&phi_p.mul_one_plus_p2())
            .add(&phi_q.mul_monomial(1, 1)),
        2 => phi
            .mul_monomial(0, 1)
            .neg()
            .add(&phi_q)
            .add(&phi_q.mul_monomial(0, 2))
            .add(&phi_p.mul_monomial(1, 1)),
        _ => panic!("recursion_t index must be 1 or 2, got {i}"),
    }
}

/// Adjoint actions of the point generators on the commutative subalgebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// `ad` of the rotation `phi3_12 = y u_x - x u_y`.
    Rot12,
    /// `ad` of `phi3_1 = x + u u_x`.
    T1,
    /// `ad` of `phi3_2 = y + u u_y`.
    T2,
    /// `ad` of the dilatation `phi4 = u - x u_x - y u_y`; acts as `-1`.
    Dil,
}

impl Operator {
    pub const ALL: [Operator; 4] = [Operator::Rot12, Operator::T1, Operator::T2, Operator::Dil];

    pub fn name(&self) -> &'static str {
        match self {
            Operator::Rot12 => "rot12",
            Operator::T1 => "t1",
            Operator::T2 => "t2",
            Operator::Dil => "dil",
        }
    }

    /// Closed-form action.
    pub fn apply(&self, phi: &ContactExpr) -> ContactExpr {
        match self {
            Operator::Rot12 => recursion_rot12(phi),
            Operator::T1 => recursion_t(1, phi),
            Operator::T2 => recursion_t(2, phi),
            Operator::Dil => phi.neg(),
        }
    }

    /// Point generator whose adjoint action this is.
    pub fn source(&self) -> JetFunction {
        let p = ContactExpr::p;
        let q = ContactExpr::q;
        let one = ContactExpr::one;
        let terms = match self {
            Operator::Rot12 => vec![(JetMonomial::Y, p()), (JetMonomial::X, q().neg())],
            Operator::T1 => vec![(JetMonomial::X, one()), (JetMonomial::U, p())],
            Operator::T2 => vec![(JetMonomial::Y, one()), (JetMonomial::U, q())],
            Operator::Dil => vec![
                (JetMonomial::U, one()),
                (JetMonomial::X, p().neg()),
                (JetMonomial::Y, q().neg()),
            ],
        };
        JetFunction::from_terms(terms).expect("point generators have degree one")
    }

    /// Catalog name of [`Operator::source`].
    pub fn source_name(&self) -> &'static str {
        match self {
            Operator::Rot12 => "phi3_12",
            Operator::T1 => "phi3_1",
            Operator::T2 => "phi3_2",
            Operator::Dil => "phi4",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = ContactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| ContactError::UnknownOperator(s.to_string()))
    }
}

/// One bracket relation: general formula against closed form.
#[derive(Clone, Debug)]
pub struct Prop3Check {
    pub operator: Operator,
    /// `{source, phi}` from [`jacobi_bracket`]; `None` if the bracket failed.
    pub bracket: Option<JetFunction>,
    pub closed_form: ContactExpr,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct Prop3Report {
    pub checks: Vec<Prop3Check>,
}

impl Prop3Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Compares the general bracket `{phi3_., phi}` and `{phi4, phi}` with the
/// closed-form operators. Mismatches are reported, not raised.
pub fn verify_prop3(phi: &ContactExpr) -> Prop3Report {
    let target = JetFunction::from_contact(phi.clone());
    let checks = Operator::ALL
        .into_iter()
        .map(|operator| {
            let closed_form = operator.apply(phi);
            let bracket = jacobi_bracket(&operator.source(), &target).ok();
            let holds = bracket
                .as_ref()
                .is_some_and(|b| b.as_contact().as_ref() == Some(&closed_form));
            Prop3Check { operator, bracket, closed_form, holds }
        })
        .collect();
    Prop3Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> ContactExpr {
        ContactExpr::parse(s).unwrap()
    }

    fn j(s: &str) -> JetFunction {
        JetFunction::parse(s).unwrap()
    }

    const PHI5: &str = "q*atan(p)";
    const PHI6: &str = "p*q^2/(1+p^2) + atan(p)";

    #[test]
    fn dilatation_bracket() {
        let b = jacobi_bracket(&j("u - x*p - y*q"), &j(PHI5)).unwrap();
        assert_eq!(b, j(PHI5).neg());
    }

    #[test]
    fn self_bracket_vanishes() {
        assert!(jacobi_bracket(&j(PHI5), &j(PHI5)).unwrap().is_zero());
        let r = j("p*y - q*x");
        assert!(jacobi_bracket(&r, &r).unwrap().is_zero());
    }

    #[test]
    fn contact_generators_commute() {
        assert!(jacobi_bracket(&j(PHI5), &j(PHI6)).unwrap().is_zero());
    }

    #[test]
    fn point_brackets() {
        // {phi3_12, phi3_1} = -(y + u q) = -phi3_2
        let b = jacobi_bracket(&j("p*y - q*x"), &j("x + p*u")).unwrap();
        assert_eq!(b, j("y + q*u").neg());
        // {phi3_1, phi3_2} = q x - p y = -phi3_12
        let b = jacobi_bracket(&j("x + p*u"), &j("y + q*u")).unwrap();
        assert_eq!(b, j("q*x - p*y"));
        // {phi1, phi4} = 1
        assert_eq!(jacobi_bracket(&j("1"), &j("u - p*x - q*y")).unwrap(), j("1"));
    }

    #[test]
    fn rot12_examples() {
        assert_eq!(recursion_rot12(&e("p")), e("-q"));
        assert!(recursion_rot12(&e("1")).is_zero());
    }

    #[test]
    fn t_examples() {
        assert_eq!(recursion_t(1, &e(PHI5)), e("q"));
        assert_eq!(recursion_t(2, &e(PHI5)), e(PHI6));
        assert_eq!(recursion_t(2, &e("q")), e("1"));
    }

    #[test]
    fn prop3_on_seed_and_zero() {
        assert!(verify_prop3(&e(PHI5)).all_hold());
        let zero = verify_prop3(&ContactExpr::zero());
        assert!(zero.all_hold());
        assert!(zero.checks.iter().all(|c| c.closed_form.is_zero()));
    }

    #[test]
    fn operator_names() {
        for op in Operator::ALL {
            assert_eq!(op.name().parse::<Operator>().unwrap(), op);
        }
        assert!(matches!("rot13".parse::<Operator>(), Err(ContactError::UnknownOperator(_))));
    }

    #[test]
    fn arctan_products_are_rejected() {
        // u*atan(p) bracketed with x*atan(p) needs atan(p)^2
        let f = j("u*atan(p)");
        let g = j("x*atan(p)");
        assert!(matches!(jacobi_bracket(&f, &g), Err(ContactError::Class(_))));
    }
}
