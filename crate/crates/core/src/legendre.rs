//! Inverse Legendre synthesis: a solution `phi(p, q)` of the linearised
//! equation yields the parametric surface
//! `(x, y, z) = (phi_p, phi_q, p phi_p + q phi_q - phi)`,
//! which is minimal. This module samples such surfaces on grids and computes
//! their fundamental forms and mean curvature.
//!
//! Coordinates and their derivatives are built symbolically once per surface
//! and evaluated exactly at rational grid nodes; `atan(p)` is the only value
//! computed in floating point, and each coordinate is rounded once.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::symkernel::{exact_from_f64, ContactExpr, QSlice, Rational};

/// Threshold on `EG - F^2` below which a node is flagged singular.
pub const DEFAULT_EPS_SINGULAR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LegendreError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("helicoid check needs a phi5 sample, got '{0}'")]
    WrongGenerator(String),
}

/// Rectangular parameter grid, `count` nodes per axis including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub p_count: usize,
    pub q_count: usize,
}

impl Default for GridSpec {
    /// `[-2, 2]^2` with 50 x 50 nodes.
    fn default() -> Self {
        Self { p_min: -2.0, p_max: 2.0, q_min: -2.0, q_max: 2.0, p_count: 50, q_count: 50 }
    }
}

impl GridSpec {
    pub fn new(
        (p_min, p_max, p_count): (f64, f64, usize),
        (q_min, q_max, q_count): (f64, f64, usize),
    ) -> Result<Self, LegendreError> {
        let spec = Self { p_min, p_max, q_min, q_max, p_count, q_count };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), LegendreError> {
        let finite = [self.p_min, self.p_max, self.q_min, self.q_max].iter().all(|v| v.is_finite());
        if !finite {
            return Err(LegendreError::InvalidGrid("bounds must be finite".into()));
        }
        if self.p_min >= self.p_max || self.q_min >= self.q_max {
            return Err(LegendreError::InvalidGrid("need min < max on both axes".into()));
        }
        if self.p_count < 2 || self.q_count < 2 {
            return Err(LegendreError::InvalidGrid("need at least 2 nodes per axis".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.p_count * self.q_count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exact node `min + i (max - min) / (count - 1)`.
    fn node(min: f64, max: f64, count: usize, i: usize) -> Rational {
        let lo = exact_from_f64(min);
        let hi = exact_from_f64(max);
        let t = Rational::new(i.into(), (count - 1).into());
        &lo + (hi - &lo) * t
    }

    pub fn p_node(&self, i: usize) -> Rational {
        Self::node(self.p_min, self.p_max, self.p_count, i)
    }

    pub fn q_node(&self, j: usize) -> Rational {
        Self::node(self.q_min, self.q_max, self.q_count, j)
    }
}

/// `pmin:pmax:pcount,qmin:qmax:qcount`.
impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{},{}:{}:{}",
            self.p_min, self.p_max, self.p_count, self.q_min, self.q_max, self.q_count
        )
    }
}

impl FromStr for GridSpec {
    type Err = LegendreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LegendreError::InvalidGrid(format!("expected pmin:pmax:pcount,qmin:qmax:qcount, got '{s}'"));
        let axis = |part: &str| -> Result<(f64, f64, usize), LegendreError> {
            let fields: Vec<&str> = part.trim().split(':').collect();
            let [lo, hi, n] = fields[..] else { return Err(bad()) };
            Ok((
                lo.trim().parse().map_err(|_| bad())?,
                hi.trim().parse().map_err(|_| bad())?,
                n.trim().parse().map_err(|_| bad())?,
            ))
        };
        let (p, q) = s.split_once(',').ok_or_else(bad)?;
        Self::new(axis(p)?, axis(q)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstForm {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

/// One evaluated grid node.
///
/// When `singular` is false, `EG - F^2` exceeds the singularity threshold and
/// `second_form` and `mean_curvature` are set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub p: f64,
    pub q: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub first_form: FirstForm,
    pub second_form: Option<SecondForm>,
    pub mean_curvature: Option<f64>,
    /// `phi_pp phi_qq - phi_pq^2`; the `(p, q) -> (x, y)` chart degenerates
    /// where it vanishes.
    pub hessian: f64,
    pub singular: bool,
}

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Symbolic position vector `r(p, q)` and its derivatives up to second order.
#[derive(Debug, Clone)]
pub struct SurfaceMap {
    phi: ContactExpr,
    // r, r_p, r_q, r_pp, r_pq, r_qq; each [x, y, z]
    jets: [[ContactExpr; 3]; 6],
}

const R: usize = 0;
const R_P: usize = 1;
const R_Q: usize = 2;
const R_PP: usize = 3;
const R_PQ: usize = 4;
const R_QQ: usize = 5;

impl SurfaceMap {
    pub fn new(phi: &ContactExpr) -> Self {
        let x = phi.diff_p();
        let y = phi.diff_q();
        let z = x.mul_monomial(1, 0).add(&y.mul_monomial(0, 1)).sub(phi);
        let r = [x, y, z];
        let d = |v: &[ContactExpr; 3], by_p: bool| -> [ContactExpr; 3] {
            v.clone().map(|c| if by_p { c.diff_p() } else { c.diff_q() })
        };
        let r_p = d(&r, true);
        let r_q = d(&r, false);
        let r_pp = d(&r_p, true);
        let r_pq = d(&r_p, false);
        let r_qq = d(&r_q, false);
        Self { phi: phi.clone(), jets: [r, r_p, r_q, r_pp, r_pq, r_qq] }
    }

    pub fn phi(&self) -> &ContactExpr {
        &self.phi
    }

    /// Symbolic coordinates `(x, y, z)`.
    pub fn coordinates(&self) -> &[ContactExpr; 3] {
        &self.jets[R]
    }

    /// Everything that depends on `p` alone, evaluated exactly.
    pub fn row(&self, p: &Rational) -> SurfaceRow {
        SurfaceRow { slices: self.jets.each_ref().map(|v| v.each_ref().map(|c| c.at_p(p))) }
    }

    pub fn position(&self, p: &Rational, q: &Rational) -> Vec3 {
        self.row(p).eval3(R, q)
    }

    /// Full geometry at an exact parameter point.
    pub fn evaluate(&self, p: &Rational, q: &Rational, eps_singular: f64) -> SurfacePoint {
        self.row(p).evaluate(q, eps_singular)
    }
}

/// A [`SurfaceMap`] restricted to one value of `p`.
#[derive(Debug, Clone)]
pub struct SurfaceRow {
    slices: [[QSlice; 3]; 6],
}

impl SurfaceRow {
    fn eval3(&self, which: usize, q: &Rational) -> Vec3 {
        self.slices[which].each_ref().map(|s| s.value(q))
    }

    pub fn evaluate(&self, q: &Rational, eps_singular: f64) -> SurfacePoint {
        let [x, y, z] = self.eval3(R, q);
        let r_p = self.eval3(R_P, q);
        let r_q = self.eval3(R_Q, q);
        let first_form = FirstForm { e: dot(r_p, r_p), f: dot(r_p, r_q), g: dot(r_q, r_q) };
        // x_p = phi_pp, x_q = y_p = phi_pq, y_q = phi_qq
        let hessian = r_p[0] * r_q[1] - r_p[1] * r_q[0];
        let det = first_form.det();
        let mut point = SurfacePoint {
            p: self.slices[R][0].p_f64(),
            q: q.to_f64().unwrap_or(f64::NAN),
            x,
            y,
            z,
            first_form,
            second_form: None,
            mean_curvature: None,
            hessian,
            singular: true,
        };
        let regular = det.is_finite() && det > eps_singular;
        if !regular {
            return point;
        }
        let w = cross(r_p, r_q);
        let norm = dot(w, w).sqrt();
        let n = w.map(|c| c / norm);
        let second = SecondForm {
            l: dot(self.eval3(R_PP, q), n),
            m: dot(self.eval3(R_PQ, q), n),
            n: dot(self.eval3(R_QQ, q), n),
        };
        let FirstForm { e, f, g } = first_form;
        let h = (e * second.n - 2.0 * f * second.m + g * second.l) / (2.0 * det);
        if h.is_finite() {
            point.second_form = Some(second);
            point.mean_curvature = Some(h);
            point.singular = false;
        }
        point
    }
}

/// `(phi_p, phi_q, p phi_p + q phi_q - phi)` at `(p, q)`.
pub fn inverse_legendre_point(phi: &ContactExpr, p: f64, q: f64) -> (f64, f64, f64) {
    let [x, y, z] = SurfaceMap::new(phi).position(&exact_from_f64(p), &exact_from_f64(q));
    (x, y, z)
}

/// `phi_pp phi_qq - phi_pq^2` at `(p, q)`.
pub fn hessian_det(phi: &ContactExpr, p: f64, q: f64) -> f64 {
    surface_point(phi, p, q, DEFAULT_EPS_SINGULAR).hessian
}

/// Mean curvature of the synthesized surface; `None` at singular points.
pub fn mean_curvature(phi: &ContactExpr, p: f64, q: f64) -> Option<f64> {
    surface_point(phi, p, q, DEFAULT_EPS_SINGULAR).mean_curvature
}

pub fn surface_point(phi: &ContactExpr, p: f64, q: f64, eps_singular: f64) -> SurfacePoint {
    SurfaceMap::new(phi).evaluate(&exact_from_f64(p), &exact_from_f64(q), eps_singular)
}

/// Evaluated grid, row-major with the `p` index outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSample {
    pub spec: GridSpec,
    pub points: Vec<SurfacePoint>,
    pub generator_name: String,
    /// Largest `|H|` over nonsingular nodes; 0 when every node is singular.
    pub max_abs_h: f64,
    pub singular_count: usize,
}

impl SurfaceSample {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.spec.q_count + j
    }

    pub fn point(&self, i: usize, j: usize) -> &SurfacePoint {
        &self.points[self.index(i, j)]
    }
}

pub fn sample_surface(phi: &ContactExpr, name: &str, spec: &GridSpec) -> SurfaceSample {
    sample_surface_with(phi, name, spec, DEFAULT_EPS_SINGULAR)
}

pub fn sample_surface_with(phi: &ContactExpr, name: &str, spec: &GridSpec, eps_singular: f64) -> SurfaceSample {
    let map = SurfaceMap::new(phi);
    let q_nodes: Vec<Rational> = (0..spec.q_count).map(|j| spec.q_node(j)).collect();
    let mut points = Vec::with_capacity(spec.len());
    for i in 0..spec.p_count {
        let row = map.row(&spec.p_node(i));
        points.extend(q_nodes.iter().map(|q| row.evaluate(q, eps_singular)));
    }
    let singular_count = points.iter().filter(|pt| pt.singular).count();
    let max_abs_h = points
        .iter()
        .filter_map(|pt| pt.mean_curvature)
        .map(f64::abs)
        .fold(0.0, f64::max);
    SurfaceSample { spec: *spec, points, generator_name: name.to_string(), max_abs_h, singular_count }
}

/// Largest `|z - x tan y|` over nonsingular nodes of a `phi5` sample, whose
/// image is the helicoid `z = x tan y`.
pub fn helicoid_check(sample: &SurfaceSample) -> Result<f64, LegendreError> {
    if sample.generator_name != "phi5" {
        return Err(LegendreError::WrongGenerator(sample.generator_name.clone()));
    }
    Ok(sample
        .points
        .iter()
        .filter(|pt| !pt.singular)
        .map(|pt| (pt.z - pt.x * pt.y.tan()).abs())
        .fold(0.0, f64::max))
}

/// Symbolic check that the synthesized surface has slopes `(p, q)`:
/// `z_p = p x_p + q y_p` and `z_q = p x_q + q y_q`.
pub fn tangency_check(phi: &ContactExpr) -> bool {
    let x = phi.diff_p();
    let y = phi.diff_q();
    let z = x.mul_monomial(1, 0).add(&y.mul_monomial(0, 1)).sub(phi);
    let along = |d: fn(&ContactExpr) -> ContactExpr| {
        d(&z).sub(&d(&x).mul_monomial(1, 0)).sub(&d(&y).mul_monomial(0, 1)).is_zero()
    };
    along(ContactExpr::diff_p) && along(ContactExpr::diff_q)
}

/// Exact grid node as `f64`, for callers that need the parameter values.
pub fn node_value(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
