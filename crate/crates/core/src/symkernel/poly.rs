//! Univariate polynomials in `p` with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Dense polynomial in `p`; `coeffs[k]` multiplies `p^k`.
///
/// Trailing zero coefficients are never stored, so the zero polynomial is the
/// empty vector and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyP {
    coeffs: Vec<Rational>,
}

impl PolyP {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    /// `1 + p^2`.
    pub fn one_plus_p2() -> Self {
        Self::from_coeffs(vec![Rational::one(), Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn term_count(&self) -> usize {
        self.terms().count()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Euclidean division, `self = quotient * divisor + remainder`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree().filter(|&sd| sd >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (dd..=sd).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let factor = &rem[k] / &lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &factor * d;
            }
            quot[k - dd] = factor;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn eval(&self, p: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * p + c)
    }

    pub fn eval_f64(&self, p: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * p + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Splits `self = content * primitive` where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn content_and_primitive(&self) -> (Rational, PolyP) {
        if self.is_zero() {
            return (Rational::one(), Self::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, c) in self.terms() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading().is_some_and(Signed::is_negative) {
            content = -content;
        }
        let primitive = self.scale(&content.recip());
        (content, primitive)
    }
}

impl fmt::Debug for PolyP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyP({self})")
    }
}

/// Descending powers, e.g. `p^3 - 3*p + 1/2`.
impl fmt::Display for PolyP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "p".to_string(),
                _ => format!("p^{k}"),
            };
            match (abs.is_one(), var.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => f.write_str(&var)?,
                (false, false) => write!(f, "{abs}*{var}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn div_rem_by_one_plus_p2() {
        // p^3 + p = p (1 + p^2)
        let (q, rem) = PolyP::from_i64s(&[0, 1, 0, 1]).div_rem(&PolyP::one_plus_p2());
        assert_eq!(q, PolyP::from_i64s(&[0, 1]));
        assert!(rem.is_zero());

        // p^2 = 1 (1 + p^2) - 1
        let (q, rem) = PolyP::from_i64s(&[0, 0, 1]).div_rem(&PolyP::one_plus_p2());
        assert_eq!(q, PolyP::one());
        assert_eq!(rem, PolyP::from_i64s(&[-1]));
    }

    #[test]
    fn div_rem_lower_degree() {
        let a = PolyP::from_i64s(&[3, 1]);
        let (q, rem) = a.div_rem(&PolyP::one_plus_p2());
        assert!(q.is_zero());
        assert_eq!(rem, a);
    }

    #[test]
    fn derivative_and_eval() {
        let a = PolyP::from_i64s(&[1, -3, 0, 1]);
        assert_eq!(a.derivative(), PolyP::from_i64s(&[-3, 0, 3]));
        assert_eq!(a.eval(&r(2, 1)), r(3, 1));
        assert_eq!(a.eval(&r(1, 2)), r(1, 1) - r(3, 2) + r(1, 8));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let a = PolyP::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(a.sub(&a), PolyP::zero());
        assert_eq!(PolyP::zero().degree(), None);
    }

    #[test]
    fn content_split() {
        let a = PolyP::from_coeffs(vec![r(-9, 2), r(0, 1), r(-3, 1), r(0, 1), r(3, 2)]);
        let (c, prim) = a.content_and_primitive();
        assert_eq!(c, r(3, 2));
        assert_eq!(prim, PolyP::from_i64s(&[-3, 0, -2, 0, 1]));

        let (c, prim) = PolyP::from_i64s(&[2, -4]).content_and_primitive();
        assert_eq!(c, r(-2, 1));
        assert_eq!(prim, PolyP::from_i64s(&[-1, 2]));
    }

    #[test]
    fn display() {
        assert_eq!(PolyP::from_i64s(&[0, -3, 0, 1]).to_string(), "p^3 - 3*p");
        assert_eq!(PolyP::from_coeffs(vec![r(1, 2), r(-1, 1)]).to_string(), "-p + 1/2");
        assert_eq!(PolyP::zero().to_string(), "0");
    }
}
