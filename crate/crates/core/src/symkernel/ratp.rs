//! Rational functions of the form `P(p) / (1+p^2)^c`.

use std::fmt;

use num_traits::{One, Zero};

use super::{PolyP, Rational};

/// `numerator / (1+p^2)^denom_power`, kept reduced: either the power is zero
/// or the numerator is not divisible by `1+p^2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatP {
    numerator: PolyP,
    denom_power: u32,
}

impl RatP {
    /// Builds the reduced form, cancelling `1+p^2` factors greedily.
    pub fn new(numerator: PolyP, denom_power: u32) -> Self {
        let mut numerator = numerator;
        let mut denom_power = denom_power;
        if numerator.is_zero() {
            return Self::zero();
        }
        let base = PolyP::one_plus_p2();
        while denom_power > 0 {
            let (quot, rem) = numerator.div_rem(&base);
            if !rem.is_zero() {
                break;
            }
            numerator = quot;
            denom_power -= 1;
        }
        Self { numerator, denom_power }
    }

    pub fn zero() -> Self {
        Self { numerator: PolyP::zero(), denom_power: 0 }
    }

    pub fn one() -> Self {
        Self::from_poly(PolyP::one())
    }

    pub fn from_poly(numerator: PolyP) -> Self {
        Self { numerator, denom_power: 0 }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(PolyP::constant(c))
    }

    pub fn numerator(&self) -> &PolyP {
        &self.numerator
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.denom_power == 0 && self.numerator == PolyP::one()
    }

    /// Numerator over the larger denominator `(1+p^2)^power`; `power` must be
    /// at least `self.denom_power()`.
    pub fn numerator_at(&self, power: u32) -> PolyP {
        debug_assert!(power >= self.denom_power);
        self.numerator.mul(&PolyP::one_plus_p2().pow(power - self.denom_power))
    }

    pub fn add(&self, other: &Self) -> Self {
        let c = self.denom_power.max(other.denom_power);
        Self::new(self.numerator_at(c).add(&other.numerator_at(c)), c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { numerator: self.numerator.neg(), denom_power: self.denom_power }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { numerator: self.numerator.scale(r), denom_power: self.denom_power }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.numerator.mul(&other.numerator), self.denom_power + other.denom_power)
    }

    /// Multiplication by `p^k`.
    pub fn mul_p(&self, k: usize) -> Self {
        Self::new(self.numerator.shift(k), self.denom_power)
    }

    pub fn mul_one_plus_p2(&self) -> Self {
        if self.is_zero() {
            Self::zero()
        } else if self.denom_power > 0 {
            Self { numerator: self.numerator.clone(), denom_power: self.denom_power - 1 }
        } else {
            Self::from_poly(self.numerator.mul(&PolyP::one_plus_p2()))
        }
    }

    pub fn div_one_plus_p2(&self) -> Self {
        Self::new(self.numerator.clone(), self.denom_power + 1)
    }

    /// `d/dp [P/(1+p^2)^c] = (P'(1+p^2) - 2cpP) / (1+p^2)^(c+1)`.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.denom_power;
        let lhs = self.numerator.derivative().mul(&PolyP::one_plus_p2());
        let rhs = self
            .numerator
            .shift(1)
            .scale(&Rational::from_integer((2 * i64::from(c)).into()));
        Self::new(lhs.sub(&rhs), c + 1)
    }

    pub fn eval(&self, p: &Rational) -> Rational {
        let base = Rational::one() + p * p;
        let den = num_traits::pow(base, self.denom_power as usize);
        self.numerator.eval(p) / den
    }
}

impl fmt::Debug for RatP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/(1+p^2)^{}", self.numerator, self.denom_power)
    }
}
