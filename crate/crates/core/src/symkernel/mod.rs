//! Exact arithmetic on the closed expression class
//! `atan(p)^{0,1} * q^n * P(p) / (1+p^2)^c` with rational coefficients.
//!
//! Everything here is exact; floating point enters only when an expression is
//! evaluated for surface synthesis.

mod expr;
mod parse;
mod poly;
mod ratp;
mod span;

pub use expr::{exact_from_f64, AtanSplit, ContactExpr, ExactPoint, QSlice, RawTerm, Slot};
pub(crate) use expr::join_signed;
pub use parse::{ParseError, ParseErrorKind, Var};
pub(crate) use parse::{parse_with, Algebra};
pub use poly::PolyP;
pub use ratp::RatP;
pub use span::span_membership;

use thiserror::Error;

/// Exact rational coefficient; always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// An operation whose result would leave the expression class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("arctan power exceeds 1 after expansion")]
    ArctanOverflow,
    #[error("denominator is not of the form r*(1+p^2)^k")]
    NonAdmissibleDenominator,
    #[error("division by an expression involving q")]
    DivisionByQ,
    #[error("division by an expression involving atan(p)")]
    DivisionByArctan,
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by an expression involving x, y or u")]
    DivisionByJetVariable,
}

impl ContactExpr {
    /// Parses the ASCII expression grammar (`p`, `q`, `atan(p)`, integers,
    /// `+ - * / ^`, parentheses).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_with::<ContactExpr>(text)
    }
}

impl std::str::FromStr for ContactExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Algebra for ContactExpr {
    fn from_rational(r: Rational) -> Self {
        ContactExpr::constant(r)
    }

    fn variable(v: Var) -> Option<Self> {
        match v {
            Var::P => Some(ContactExpr::p()),
            Var::Q => Some(ContactExpr::q()),
            Var::X | Var::Y | Var::U => None,
        }
    }

    fn atan() -> Self {
        ContactExpr::atan_p()
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
        self.try_mul(other)
    }

    fn divide(&self, other: &Self) -> Result<Self, ClassError> {
        self.try_div(other)
    }
}
