//! Manufactured solutions built from an exact trigonometric polynomial algebra.
//!
//! A [`TrigPoly`] is a finite sum of products `c · w₀(x) w₁(y) w₂(z)` with each
//! `w` of the form `cos(kπt)` or `sin(kπt)`. The set is closed under partial
//! derivatives and products, so right-hand sides such as `Δ(αΔu)` or
//! `curl curl (a curl curl u) + u` are computed exactly rather than by finite
//! differences.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembly::{Coefficient, ProblemKind, ProblemSpec, RhsField};
use crate::fe::FieldEval;
use crate::linalg::small::{Mat3, Vec3};
use crate::mesh::Point3;

/// `cos(kπt)` or `sin(kπt)`; `Cos(0)` is the constant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wave {
    Cos(u32),
    Sin(u32),
}

impl Wave {
    fn eval(self, t: f64) -> f64 {
        match self {
            Wave::Cos(0) => 1.0,
            Wave::Cos(k) => (f64::from(k) * PI * t).cos(),
            Wave::Sin(k) => (f64::from(k) * PI * t).sin(),
        }
    }

    fn derivative(self) -> (f64, Wave) {
        match self {
            Wave::Cos(k) => (-f64::from(k) * PI, Wave::Sin(k)),
            Wave::Sin(k) => (f64::from(k) * PI, Wave::Cos(k)),
        }
    }

    /// Product as a sum of two waves with coefficients.
    fn product(self, other: Wave) -> [(f64, Wave); 2] {
        let diff = |a: u32, b: u32| (a.abs_diff(b), if a >= b { 1.0 } else { -1.0 });
        match (self, other) {
            (Wave::Cos(a), Wave::Cos(b)) => [(0.5, Wave::Cos(a.abs_diff(b))), (0.5, Wave::Cos(a + b))],
            (Wave::Sin(a), Wave::Sin(b)) => [(0.5, Wave::Cos(a.abs_diff(b))), (-0.5, Wave::Cos(a + b))],
            (Wave::Sin(a), Wave::Cos(b)) => {
                let (d, s) = diff(a, b);
                [(0.5, Wave::Sin(a + b)), (0.5 * s, Wave::Sin(d))]
            }
            (Wave::Cos(a), Wave::Sin(b)) => {
                let (d, s) = diff(b, a);
                [(0.5, Wave::Sin(a + b)), (0.5 * s, Wave::Sin(d))]
            }
        }
    }
}

/// A trigonometric polynomial in three variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    terms: BTreeMap<[Wave; 3], f64>,
}

const ONE: [Wave; 3] = [Wave::Cos(0); 3];

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.insert(ONE, c);
        p
    }

    /// The single wave `w` in variable `axis`.
    pub fn wave(axis: usize, w: Wave) -> Self {
        let mut key = ONE;
        key[axis] = w;
        let mut p = Self::zero();
        p.insert(key, 1.0);
        p
    }

    /// `sin(kπ x_axis)`.
    pub fn sin(axis: usize, k: u32) -> Self {
        Self::wave(axis, Wave::Sin(k))
    }

    fn insert(&mut self, key: [Wave; 3], c: f64) {
        if c == 0.0 || key.contains(&Wave::Sin(0)) {
            return;
        }
        let e = self.terms.entry(key).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &Point3) -> f64 {
        self.terms.iter().map(|(w, c)| c * w[0].eval(x[0]) * w[1].eval(x[1]) * w[2].eval(x[2])).sum()
    }

    /// Partial derivative in variable `axis`.
    pub fn diff(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let (s, dw) = w[axis].derivative();
            let mut key = *w;
            key[axis] = dw;
            out.insert(key, c * s);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.insert(*w, c * s);
        }
        out
    }

    pub fn gradient(&self) -> [TrigPoly; 3] {
        [self.diff(0), self.diff(1), self.diff(2)]
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, d| &acc + &self.diff(d).diff(d))
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert(*w, *c);
        }
        out
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(-1.0)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let parts = [wa[0].product(wb[0]), wa[1].product(wb[1]), wa[2].product(wb[2])];
                for (s0, w0) in parts[0] {
                    for (s1, w1) in parts[1] {
                        for (s2, w2) in parts[2] {
                            out.insert([w0, w1, w2], ca * cb * s0 * s1 * s2);
                        }
                    }
                }
            }
        }
        out
    }
}

/// A vector field with trigonometric polynomial components.
pub type TrigField = [TrigPoly; 3];

pub fn curl(v: &TrigField) -> TrigField {
    [&v[2].diff(1) - &v[1].diff(2), &v[0].diff(2) - &v[2].diff(0), &v[1].diff(0) - &v[0].diff(1)]
}

pub fn div(v: &TrigField) -> TrigPoly {
    &(&v[0].diff(0) + &v[1].diff(1)) + &v[2].diff(2)
}

fn scale_field(a: &TrigPoly, v: &TrigField) -> TrigField {
    [a * &v[0], a * &v[1], a * &v[2]]
}

fn add_fields(a: &TrigField, b: &TrigField) -> TrigField {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

fn eval_field(v: &TrigField, x: &Point3) -> Vec3 {
    [v[0].eval(x), v[1].eval(x), v[2].eval(x)]
}

/// An exact field with its first derivatives, evaluable at points.
#[derive(Clone)]
pub struct AnalyticField {
    eval: Arc<dyn Fn(&Point3) -> FieldEval + Send + Sync>,
    vector: bool,
}

impl std::fmt::Debug for AnalyticField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AnalyticField {{ vector: {} }}", self.vector)
    }
}

impl AnalyticField {
    /// A scalar field from a value-and-gradient callback.
    pub fn scalar(f: impl Fn(&Point3) -> (f64, Vec3) + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(move |x| {
                let (value, grad) = f(x);
                FieldEval::Scalar { value, grad }
            }),
            vector: false,
        }
    }

    /// A vector field from a value-and-Jacobian callback (`J[r][c] = ∂_c v_r`).
    pub fn vector(f: impl Fn(&Point3) -> (Vec3, Mat3) + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(move |x| {
                let (value, jacobian) = f(x);
                FieldEval::Vector { value, jacobian }
            }),
            vector: true,
        }
    }

    pub fn zero(vector: bool) -> Self {
        if vector {
            Self::vector(|_| ([0.0; 3], [[0.0; 3]; 3]))
        } else {
            Self::scalar(|_| (0.0, [0.0; 3]))
        }
    }

    pub fn from_poly(p: &TrigPoly) -> Self {
        let (p, g) = (p.clone(), p.gradient());
        Self::scalar(move |x| (p.eval(x), eval_field(&g, x)))
    }

    pub fn from_trig_field(v: &TrigField) -> Self {
        let v = v.clone();
        let jac = [v[0].gradient(), v[1].gradient(), v[2].gradient()];
        Self::vector(move |x| {
            (eval_field(&v, x), [eval_field(&jac[0], x), eval_field(&jac[1], x), eval_field(&jac[2], x)])
        })
    }

    pub fn is_vector(&self) -> bool {
        self.vector
    }

    pub fn eval(&self, x: &Point3) -> FieldEval {
        (self.eval)(x)
    }
}

/// Coefficient choices for the manufactured problems.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum CoefficientPreset {
    /// `α ≡ 1` resp. `A = I`.
    #[default]
    Unit,
    /// `α ≡ c` resp. `A = cI`.
    Constant(f64),
    /// `1 + ½ sin πx sin πy sin πz` (times `I` for the quad-curl problem).
    Bump,
}

impl CoefficientPreset {
    pub fn poly(self) -> TrigPoly {
        match self {
            CoefficientPreset::Unit => TrigPoly::constant(1.0),
            CoefficientPreset::Constant(c) => TrigPoly::constant(c),
            CoefficientPreset::Bump => {
                let b = &(&TrigPoly::sin(0, 1) * &TrigPoly::sin(1, 1)) * &TrigPoly::sin(2, 1);
                &TrigPoly::constant(1.0) + &b.scale(0.5)
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            CoefficientPreset::Unit => "1".into(),
            CoefficientPreset::Constant(c) => format!("{c}"),
            CoefficientPreset::Bump => "bump".into(),
        }
    }
}

impl std::str::FromStr for CoefficientPreset {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "1" | "unit" => Ok(CoefficientPreset::Unit),
            "bump" => Ok(CoefficientPreset::Bump),
            _ => match s.parse::<f64>() {
                Ok(c) if c.is_finite() && c > 0.0 => Ok(CoefficientPreset::Constant(c)),
                _ => Err(crate::Error::InvalidArgument(format!(
                    "coefficient must be a positive number or `bump`, got `{s}`"
                ))),
            },
        }
    }
}

/// A manufactured problem: data plus the exact `u` and `φ`.
#[derive(Clone, Debug)]
pub struct Manufactured {
    pub spec: ProblemSpec,
    pub preset: CoefficientPreset,
    pub u: AnalyticField,
    pub phi: AnalyticField,
    /// Symbolic `u` (scalar problems use component 0).
    pub u_poly: TrigField,
    /// Symbolic `f₁` (scalar problems use component 0).
    pub f1_poly: TrigField,
}

/// `u = (sin πx sin πy sin πz)²` for the bi-Laplacian; for the quad-curl
/// problem `u = (p(x)q(y)q(z), q(x)p(y)q(z), q(x)q(y)p(z))` with
/// `p = sin πt`, `q = sin² πt`. Both satisfy the clamped boundary conditions.
pub fn manufactured_solution(kind: ProblemKind, preset: CoefficientPreset) -> Manufactured {
    let a = preset.poly();
    let p = |d| TrigPoly::sin(d, 1);
    let q = |d| &TrigPoly::sin(d, 1) * &TrigPoly::sin(d, 1);
    let coefficient = match preset {
        CoefficientPreset::Unit => Coefficient::Constant(1.0),
        CoefficientPreset::Constant(c) => Coefficient::Constant(c),
        CoefficientPreset::Bump => {
            let a = a.clone();
            Coefficient::Scalar(Arc::new(move |x: &Point3| a.eval(x)))
        }
    };
    match kind {
        ProblemKind::BiLaplacian => {
            let u = &(&q(0) * &q(1)) * &q(2);
            let f1 = (&a * &u.laplacian()).laplacian();
            let f1c = f1.clone();
            let spec = ProblemSpec {
                kind,
                coefficient,
                f1: RhsField::Scalar(Arc::new(move |x: &Point3| f1c.eval(x))),
                f2: RhsField::Zero,
                quad_degree: crate::assembly::DEFAULT_QUAD_DEGREE,
            };
            Manufactured {
                spec,
                preset,
                u: AnalyticField::from_poly(&u),
                phi: AnalyticField::from_trig_field(&u.gradient()),
                u_poly: [u, TrigPoly::zero(), TrigPoly::zero()],
                f1_poly: [f1, TrigPoly::zero(), TrigPoly::zero()],
            }
        }
        ProblemKind::QuadCurl => {
            let u: TrigField = [&(&p(0) * &q(1)) * &q(2), &(&q(0) * &p(1)) * &q(2), &(&q(0) * &q(1)) * &p(2)];
            let curl2 = curl(&curl(&u));
            let f1 = add_fields(&curl(&curl(&scale_field(&a, &curl2))), &u);
            let f1c = f1.clone();
            let spec = ProblemSpec {
                kind,
                coefficient,
                f1: RhsField::Vector(Arc::new(move |x: &Point3| eval_field(&f1c, x))),
                f2: RhsField::Zero,
                quad_degree: crate::assembly::DEFAULT_QUAD_DEGREE,
            };
            Manufactured {
                spec,
                preset,
                u: AnalyticField::from_trig_field(&u),
                phi: AnalyticField::from_trig_field(&curl(&u)),
                u_poly: u,
                f1_poly: f1,
            }
        }
    }
}

/// Evaluates a symbolic vector field.
pub fn eval_trig_field(v: &TrigField, x: &Point3) -> Vec3 {
    eval_field(v, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_to_sum_identities() {
        let x = [0.3, 0.7, 0.2];
        let s = TrigPoly::sin(0, 2);
        let c = TrigPoly::wave(0, Wave::Cos(3));
        let want = (2.0 * PI * 0.3).sin() * (3.0 * PI * 0.3).cos();
        assert!(((&s * &c).eval(&x) - want).abs() < 1e-15);
        assert!(((&c * &s).eval(&x) - want).abs() < 1e-15);
        // sin² + cos² = 1 collapses to a single constant term.
        let one = &(&s * &s) + &(&TrigPoly::wave(0, Wave::Cos(2)) * &TrigPoly::wave(0, Wave::Cos(2)));
        assert_eq!(one, TrigPoly::constant(1.0));
    }

    #[test]
    fn derivative_of_sine() {
        let d = TrigPoly::sin(1, 3).diff(1);
        let x = [0.0, 0.15, 0.0];
        assert!((d.eval(&x) - 3.0 * PI * (3.0 * PI * 0.15).cos()).abs() < 1e-14);
        assert!(TrigPoly::sin(1, 3).diff(0).is_zero());
    }

    #[test]
    fn bilaplacian_solution_peaks_at_centre() {
        let m = manufactured_solution(ProblemKind::BiLaplacian, CoefficientPreset::Unit);
        let FieldEval::Scalar { value, .. } = m.u.eval(&[0.5, 0.5, 0.5]) else { panic!() };
        assert!((value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn presets_parse() {
        assert_eq!("bump".parse::<CoefficientPreset>().unwrap(), CoefficientPreset::Bump);
        assert_eq!("2.5".parse::<CoefficientPreset>().unwrap(), CoefficientPreset::Constant(2.5));
        assert!("-1".parse::<CoefficientPreset>().is_err());
    }
}
