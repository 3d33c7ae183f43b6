//! Quadrature on the reference tetrahedron, triangle and segment.

use crate::{Error, Result};

/// Barycentric points and weights on the reference tetrahedron. Weights sum to
/// its volume, 1/6; to integrate over a cell `K` scale them by `6|K|`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

pub const MAX_DEGREE: usize = 8;

/// A rule exact for polynomials of total degree `degree` (1 to 8).
pub fn quadrature_rule(degree: usize) -> Result<QuadratureRule> {
    match degree {
        1 => Ok(QuadratureRule { points: vec![[0.25; 4]], weights: vec![1.0 / 6.0], degree }),
        2 => {
            let a = 0.585_410_196_624_968_5;
            let b = 0.138_196_601_125_010_5;
            Ok(QuadratureRule {
                points: vec![[a, b, b, b], [b, a, b, b], [b, b, a, b], [b, b, b, a]],
                weights: vec![1.0 / 24.0; 4],
                degree,
            })
        }
        3..=MAX_DEGREE => Ok(collapsed_rule(degree)),
        _ => Err(Error::InvalidArgument(format!("quadrature degree must be in 1..={MAX_DEGREE}, got {degree}"))),
    }
}

/// Tensor Gauss–Legendre rule pulled back through the collapsed-cube map
/// `x = u, y = (1-u)v, z = (1-u)(1-v)w`, whose Jacobian is `(1-u)²(1-v)`.
fn collapsed_rule(degree: usize) -> QuadratureRule {
    let (gu, wu) = gauss_legendre_unit((degree + 4) / 2);
    let (gv, wv) = gauss_legendre_unit((degree + 3) / 2);
    let (gw, ww) = gauss_legendre_unit((degree + 2) / 2);
    let mut points = Vec::with_capacity(gu.len() * gv.len() * gw.len());
    let mut weights = Vec::with_capacity(points.capacity());
    for (u, wu) in gu.iter().zip(&wu) {
        for (v, wv) in gv.iter().zip(&wv) {
            for (w, ww) in gw.iter().zip(&ww) {
                let x = *u;
                let y = (1.0 - u) * v;
                let z = (1.0 - u) * (1.0 - v) * w;
                points.push([1.0 - x - y - z, x, y, z]);
                weights.push(wu * wv * ww * (1.0 - u).powi(2) * (1.0 - v));
            }
        }
    }
    QuadratureRule { points, weights, degree }
}

/// `k`-point Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for i in 0..k {
        // Newton iteration on P_k from the Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(k, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(k, x);
        nodes.push(0.5 * (1.0 - x));
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫_K λ₁^a λ₂^b λ₃^c λ₄^d = 6|K| a! b! c! d! / (a+b+c+d+3)!`.
pub fn integrate_barycentric_monomial(exponents: [u32; 4], volume: f64) -> f64 {
    let total: u32 = exponents.iter().sum();
    let num: f64 = exponents.iter().map(|&e| factorial(e)).product();
    6.0 * volume * num / factorial(total + 3)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Two-point Gauss rule on a segment: parameters in `[0, 1]` and weights
/// summing to 1 (multiply by the length). Exact to degree 3.
pub fn edge_rule() -> ([f64; 2], [f64; 2]) {
    let d = 0.5 / 3f64.sqrt();
    ([0.5 - d, 0.5 + d], [0.5, 0.5])
}

/// Four-point triangle rule exact to degree 3: barycentric points and weights
/// summing to 1 (multiply by the area). The centroid weight is negative.
pub fn triangle_rule() -> ([[f64; 3]; 4], [f64; 4]) {
    let c = 1.0 / 3.0;
    (
        [[c, c, c], [0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6]],
        [-27.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0],
    )
}
