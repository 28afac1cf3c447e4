//! Gauss quadrature on the interval and the reference triangle.
//!
//! 1D rules are Gauss-Legendre with nodes found by Newton iteration on the
//! three-term recurrence. Triangle rules are conical products obtained by
//! collapsing a tensor rule on the unit square onto the reference triangle
//! `{(x, y) : x, y >= 0, x + y <= 1}`; a rule of requested degree `d`
//! integrates every polynomial of total degree `<= d` exactly.

use crate::legendre;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on L_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dl = 0.0;
        for _ in 0..100 {
            let (l, d) = legendre::eval_with_prime(n, x);
            dl = d;
            let dx = l / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (l2, d2) = legendre::eval_with_prime(n, x);
                dl = d2;
                x -= l2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dl * dl);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_on_interval(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// Quadrature rule on the reference triangle, points in barycentric-free
/// coordinates `(x, y)` with weights summing to the triangle area `1/2`.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

/// Conical-product rule exact for total degree `<= degree`.
pub fn triangle_rule(degree: usize) -> TriangleRule {
    // Collapse (u, v) in [0,1]^2 via x = u(1-v), y = v; the Jacobian (1-v)
    // raises the v-degree by one.
    let nu = degree / 2 + 1;
    let nv = degree.div_ceil(2) + 1;
    let (un, uw) = gauss_on_interval(nu, 0.0, 1.0);
    let (vn, vw) = gauss_on_interval(nv, 0.0, 1.0);
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for (u, wu) in un.iter().zip(&uw) {
        for (v, wv) in vn.iter().zip(&vw) {
            points.push([u * (1.0 - v), *v]);
            weights.push(wu * wv * (1.0 - v));
        }
    }
    TriangleRule {
        points,
        weights,
        degree,
    }
}
