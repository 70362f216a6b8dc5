use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ClassError, PolyP, RatP, Rational};

/// Key of one summand `atan(p)^atan_power * q^q_degree * RatP(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub atan_power: u8,
    pub q_degree: u32,
}

impl Slot {
    pub const fn new(atan_power: u8, q_degree: u32) -> Self {
        Self { atan_power, q_degree }
    }
}

/// One unreduced summand handed to [`ContactExpr::normalize`].
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub atan: bool,
    pub q_degree: u32,
    pub numerator: PolyP,
    pub denom_power: u32,
}

/// Canonical element of the class spanned by
/// `atan(p)^a * q^n * P(p) / (1+p^2)^c`, `a` in `{0, 1}`.
///
/// Every slot holds a reduced nonzero [`RatP`], so two expressions are equal
/// exactly when their term maps coincide. The same type stands for a symmetry
/// generator `phi(u_x, u_y)` and for a solution `phi(p, q)` of the linearised
/// equation, with `p = u_x`, `q = u_y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ContactExpr {
    terms: BTreeMap<Slot, RatP>,
}

/// Exact value `rational + atan_coeff * atan(p)` of an expression at a
/// rational point; `atan` is the only transcendental in the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtanSplit {
    pub rational: Rational,
    pub atan_coeff: Rational,
}

impl AtanSplit {
    /// Single conversion to floating point, principal branch of `atan`.
    pub fn to_f64(&self, p: f64) -> f64 {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.atan_coeff.is_zero() {
            r
        } else {
            r + self.atan_coeff.to_f64().unwrap_or(f64::NAN) * p.atan()
        }
    }
}

/// An expression with `p` fixed: `sum_n q^n (r_n + a_n atan(p))` with exact
/// coefficients over one common denominator per part. Rows of a grid share
/// one `p`, so this is built once per row; evaluation at a rational `q` is
/// then integer arithmetic with one final rounding per part.
#[derive(Clone, Debug, PartialEq)]
pub struct QSlice {
    p_f64: f64,
    atan_p: f64,
    rational: ScaledPoly,
    atan: ScaledPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ScaledPoly {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl ScaledPoly {
    fn new(coeffs: &[Rational]) -> Self {
        let denominator = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let numerators = coeffs.iter().map(|c| c.numer() * (&denominator / c.denom())).collect();
        Self { numerators, denominator }
    }

    /// `sum N_n (a/b)^n / D` as `sum N_n a^n b^(d-n) / (D b^d)`.
    fn value(&self, q: &Rational) -> f64 {
        let Some((last, rest)) = self.numerators.split_last() else { return 0.0 };
        let (a, b) = (q.numer(), q.denom());
        let mut b_pow = BigInt::one();
        let mut acc = last.clone();
        for n in rest.iter().rev() {
            b_pow *= b;
            acc = acc * a + n * &b_pow;
        }
        if acc.is_zero() {
            return 0.0;
        }
        Rational::new_raw(acc, &self.denominator * b_pow).to_f64().unwrap_or(f64::NAN)
    }
}

impl QSlice {
    pub fn p_f64(&self) -> f64 {
        self.p_f64
    }

    /// Value at `q`, rounded once per part.
    pub fn value(&self, q: &Rational) -> f64 {
        let r = self.rational.value(q);
        if self.atan.numerators.iter().all(Zero::is_zero) {
            r
        } else {
            r + self.atan.value(q) * self.atan_p
        }
    }
}

/// Exact evaluation point with cached powers of `q` and `1/(1+p^2)`.
#[derive(Clone, Debug)]
pub struct ExactPoint {
    p: Rational,
    p_f64: f64,
    q_pows: Vec<Rational>,
    inv_base_pows: Vec<Rational>,
}

impl ExactPoint {
    pub fn new(p: Rational, q: Rational, max_q_degree: u32, max_denom_power: u32) -> Self {
        let mut q_pows = vec![Rational::one()];
        for k in 1..=max_q_degree as usize {
            let next = &q_pows[k - 1] * &q;
            q_pows.push(next);
        }
        let inv_base = (Rational::one() + &p * &p).recip();
        let mut inv_base_pows = vec![Rational::one()];
        for k in 1..=max_denom_power as usize {
            let next = &inv_base_pows[k - 1] * &inv_base;
            inv_base_pows.push(next);
        }
        let p_f64 = p.to_f64().unwrap_or(f64::NAN);
        Self { p, p_f64, q_pows, inv_base_pows }
    }

    pub fn from_f64(p: f64, q: f64, max_q_degree: u32, max_denom_power: u32) -> Self {
        Self::new(exact_from_f64(p), exact_from_f64(q), max_q_degree, max_denom_power)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn p_f64(&self) -> f64 {
        self.p_f64
    }
}

/// Exact rational value of a finite `f64`.
pub fn exact_from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(|| panic!("non-finite evaluation point {x}"))
}

impl ContactExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_slot(Slot::new(0, 0), RatP::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn p() -> Self {
        Self::from_slot(Slot::new(0, 0), RatP::from_poly(PolyP::from_i64s(&[0, 1])))
    }

    pub fn q() -> Self {
        Self::from_slot(Slot::new(0, 1), RatP::one())
    }

    pub fn atan_p() -> Self {
        Self::from_slot(Slot::new(1, 0), RatP::one())
    }

    /// `1/(1+p^2)`.
    pub fn inv_one_plus_p2() -> Self {
        Self::from_slot(Slot::new(0, 0), RatP::new(PolyP::one(), 1))
    }

    pub fn from_slot(slot: Slot, value: RatP) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(slot, value);
        }
        Self { terms }
    }

    /// Canonical form of a finite sum of raw summands. Idempotent: feeding the
    /// terms of a canonical expression back in returns it unchanged.
    pub fn normalize<I: IntoIterator<Item = RawTerm>>(raw: I) -> Self {
        let mut out = Self::zero();
        for t in raw {
            let slot = Slot::new(u8::from(t.atan), t.q_degree);
            out.add_to_slot(slot, &RatP::new(t.numerator, t.denom_power));
        }
        out
    }

    /// The canonical terms, written back in raw form.
    pub fn raw_terms(&self) -> Vec<RawTerm> {
        self.terms
            .iter()
            .map(|(s, r)| RawTerm {
                atan: s.atan_power == 1,
                q_degree: s.q_degree,
                numerator: r.numerator().clone(),
                denom_power: r.denom_power(),
            })
            .collect()
    }

    fn add_to_slot(&mut self, slot: Slot, value: &RatP) {
        if value.is_zero() {
            return;
        }
        let sum = match self.terms.get(&slot) {
            Some(existing) => existing.add(value),
            None => value.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&slot);
        } else {
            self.terms.insert(slot, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Slot, &RatP)> {
        self.terms.iter()
    }

    pub fn get(&self, slot: Slot) -> Option<&RatP> {
        self.terms.get(&slot)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self == other
    }

    pub fn slot_count(&self) -> usize {
        self.terms.len()
    }

    /// Highest power of `q`; `None` for zero.
    pub fn q_degree(&self) -> Option<u32> {
        self.terms.keys().map(|s| s.q_degree).max()
    }

    pub fn max_denom_power(&self) -> u32 {
        self.terms.values().map(RatP::denom_power).max().unwrap_or(0)
    }

    pub fn has_atan(&self) -> bool {
        self.terms.keys().any(|s| s.atan_power > 0)
    }

    /// `Some(c)` when the expression is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (slot, r) = self.terms.iter().next()?;
                (*slot == Slot::new(0, 0) && r.denom_power() == 0 && r.numerator().degree() == Some(0))
                    .then(|| r.numerator().coeff(0))
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (slot, r) in &other.terms {
            out.add_to_slot(*slot, r);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_slots(|s, r| (s, r.neg()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        self.map_slots(|s, v| (s, v.scale(r)))
    }

    fn map_slots<F: Fn(Slot, &RatP) -> (Slot, RatP)>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (s, r) in &self.terms {
            let (s, r) = f(*s, r);
            out.add_to_slot(s, &r);
        }
        out
    }

    /// Product with `p^p_degree * q^q_degree`.
    pub fn mul_monomial(&self, p_degree: usize, q_degree: u32) -> Self {
        self.map_slots(|s, r| (Slot::new(s.atan_power, s.q_degree + q_degree), r.mul_p(p_degree)))
    }

    pub fn mul_one_plus_p2(&self) -> Self {
        self.map_slots(|s, r| (s, r.mul_one_plus_p2()))
    }

    pub fn div_one_plus_p2(&self) -> Self {
        self.map_slots(|s, r| (s, r.div_one_plus_p2()))
    }

    /// Product inside the class; fails when `atan(p)^2` would appear.
    pub fn try_mul(&self, other: &Self) -> Result<Self, ClassError> {
        let mut out = Self::zero();
        for (s1, r1) in &self.terms {
            for (s2, r2) in &other.terms {
                let atan_power = s1.atan_power + s2.atan_power;
                if atan_power > 1 {
                    return Err(ClassError::ArctanOverflow);
                }
                out.add_to_slot(Slot::new(atan_power, s1.q_degree + s2.q_degree), &r1.mul(r2));
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, e: u32) -> Result<Self, ClassError> {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Quotient by a divisor that normalizes to `r * (1+p^2)^k`, `r != 0`.
    pub fn try_div(&self, divisor: &Self) -> Result<Self, ClassError> {
        self.try_mul(&divisor.admissible_inverse()?)
    }

    /// Inverse of an admissible divisor `r (1+p^2)^k / (1+p^2)^c`.
    pub fn admissible_inverse(&self) -> Result<Self, ClassError> {
        if self.is_zero() {
            return Err(ClassError::DivisionByZero);
        }
        if self.terms.keys().any(|s| s.q_degree > 0) {
            return Err(ClassError::DivisionByQ);
        }
        if self.has_atan() {
            return Err(ClassError::DivisionByArctan);
        }
        let r = &self.terms[&Slot::new(0, 0)];
        let base = PolyP::one_plus_p2();
        let mut num = r.numerator().clone();
        let mut k = 0u32;
        while num.degree().is_some_and(|d| d > 0) {
            let (quot, rem) = num.div_rem(&base);
            if !rem.is_zero() {
                return Err(ClassError::NonAdmissibleDenominator);
            }
            num = quot;
            k += 1;
        }
        let c = num.coeff(0).recip();
        let inv_num = base.pow(r.denom_power()).scale(&c);
        Ok(Self::from_slot(Slot::new(0, 0), RatP::new(inv_num, k)))
    }

    /// Partial derivative in `p`; `d atan(p)/dp = 1/(1+p^2)`.
    pub fn diff_p(&self) -> Self {
        let mut out = Self::zero();
        for (s, r) in &self.terms {
            out.add_to_slot(*s, &r.derivative());
            if s.atan_power == 1 {
                out.add_to_slot(Slot::new(0, s.q_degree), &r.div_one_plus_p2());
            }
        }
        out
    }

    /// Partial derivative in `q`.
    pub fn diff_q(&self) -> Self {
        self.map_slots(|s, r| {
            if s.q_degree == 0 {
                (s, RatP::zero())
            } else {
                let n = Rational::from_integer(BigInt::from(s.q_degree));
                (Slot::new(s.atan_power, s.q_degree - 1), r.scale(&n))
            }
        })
    }

    /// `(1+p^2) e_pp + 2pq e_pq + (1+q^2) e_qq`; zero exactly on solutions of
    /// the Legendre-linearised minimal surface equation.
    pub fn pde_residual(&self) -> Self {
        let e_p = self.diff_p();
        let e_q = self.diff_q();
        let e_pp = e_p.diff_p();
        let e_pq = e_p.diff_q();
        let e_qq = e_q.diff_q();
        let two = Rational::from_integer(2.into());
        e_pp.mul_one_plus_p2()
            .add(&e_pq.mul_monomial(1, 1).scale(&two))
            .add(&e_qq)
            .add(&e_qq.mul_monomial(0, 2))
    }

    pub fn is_solution(&self) -> bool {
        self.pde_residual().is_zero()
    }

    /// Exact value at `(p, q)` split into its rational and `atan(p)` parts.
    pub fn eval_exact(&self, p: &Rational, q: &Rational) -> AtanSplit {
        let point = ExactPoint::new(
            p.clone(),
            q.clone(),
            self.q_degree().unwrap_or(0),
            self.max_denom_power(),
        );
        self.eval_at(&point)
    }

    /// Exact evaluation at a prepared point. The point's caches must cover
    /// this expression's q-degree and denominator power.
    pub fn eval_at(&self, point: &ExactPoint) -> AtanSplit {
        let mut rational = Rational::zero();
        let mut atan_coeff = Rational::zero();
        for (s, r) in &self.terms {
            let v = r.numerator().eval(&point.p)
                * &point.inv_base_pows[r.denom_power() as usize]
                * &point.q_pows[s.q_degree as usize];
            if s.atan_power == 1 {
                atan_coeff += v;
            } else {
                rational += v;
            }
        }
        AtanSplit { rational, atan_coeff }
    }

    /// Fixes `p`, leaving a polynomial in `q`.
    pub fn at_p(&self, p: &Rational) -> QSlice {
        let len = self.q_degree().map_or(0, |d| d as usize + 1);
        let mut rational = vec![Rational::zero(); len];
        let mut atan = vec![Rational::zero(); len];
        let inv_base = (Rational::one() + p * p).recip();
        for (s, r) in &self.terms {
            let v = r.numerator().eval(p) * num_traits::pow(inv_base.clone(), r.denom_power() as usize);
            let target = if s.atan_power == 1 { &mut atan } else { &mut rational };
            target[s.q_degree as usize] += v;
        }
        let p_f64 = p.to_f64().unwrap_or(f64::NAN);
        QSlice { p_f64, atan_p: p_f64.atan(), rational: ScaledPoly::new(&rational), atan: ScaledPoly::new(&atan) }
    }

    /// Value at a floating-point point: exact rational evaluation at the
    /// point's exact binary value, converted to `f64` once.
    pub fn eval(&self, p: f64, q: f64) -> f64 {
        self.eval_exact(&exact_from_f64(p), &exact_from_f64(q)).to_f64(p)
    }

    /// Summands in display order as `(negative, body)` with `body` unsigned.
    pub fn signed_terms(&self) -> Vec<(bool, String)> {
        let mut slots: Vec<_> = self.terms.iter().collect();
        slots.sort_by(|(a, _), (b, _)| {
            b.q_degree.cmp(&a.q_degree).then(b.atan_power.cmp(&a.atan_power))
        });
        slots.into_iter().map(|(s, r)| format_summand(*s, r)).collect()
    }
}

fn format_summand(slot: Slot, value: &RatP) -> (bool, String) {
    let (content, prim) = value.numerator().content_and_primitive();
    let negative = content.is_negative();
    let content = content.abs();
    let mut factors = Vec::new();
    if !content.is_one() {
        factors.push(content.to_string());
    }
    match prim.term_count() {
        1 => {
            let k = prim.degree().unwrap_or(0);
            match k {
                0 => {}
                1 => factors.push("p".to_string()),
                _ => factors.push(format!("p^{k}")),
            }
        }
        _ => factors.push(format!("({prim})")),
    }
    match slot.q_degree {
        0 => {}
        1 => factors.push("q".to_string()),
        n => factors.push(format!("q^{n}")),
    }
    if slot.atan_power == 1 {
        factors.push("atan(p)".to_string());
    }
    let mut body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
    match value.denom_power() {
        0 => {}
        1 => body.push_str("/(1+p^2)"),
        c => body.push_str(&format!("/(1+p^2)^{c}")),
    }
    (negative, body)
}

/// Joins signed summands: `a - b + c`; `0` when empty.
pub(crate) fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for ContactExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_signed(&self.signed_terms()))
    }
}

impl fmt::Debug for ContactExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContactExpr({self})")
    }
}

impl Add for &ContactExpr {
    type Output = ContactExpr;
    fn add(self, rhs: Self) -> ContactExpr {
        ContactExpr::add(self, rhs)
    }
}

impl Sub for &ContactExpr {
    type Output = ContactExpr;
    fn sub(self, rhs: Self) -> ContactExpr {
        ContactExpr::sub(self, rhs)
    }
}

impl Neg for &ContactExpr {
    type Output = ContactExpr;
    fn neg(self) -> ContactExpr {
        ContactExpr::neg(self)
    }
}
