//! Lagrange reference bases on the unit triangle.
//!
//! Barycentric coordinates λ = (λ₀, λ₁, λ₂) with λ₀ = 1 - ξ - η on the
//! reference triangle (0,0)-(1,0)-(0,1). Local node order: the three
//! vertices, then the edge nodes of (0,1), (1,2), (2,0) walked from the
//! lower-numbered vertex, then the interior node (degree 3).

use crate::error::{CoreError, Result};

/// Gradients of the barycentric coordinates in reference coordinates (ξ, η).
const GRAD_L: [[f64; 2]; 3] = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];

pub fn local_dim(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Barycentric coordinates of the local nodes.
pub fn local_nodes(degree: usize) -> Result<Vec<[f64; 3]>> {
    let mut nodes: Vec<[f64; 3]> = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    match degree {
        1 => {}
        2 => {
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                let mut n = [0.0; 3];
                n[i] = 0.5;
                n[j] = 0.5;
                nodes.push(n);
            }
        }
        3 => {
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                for t in [1.0 / 3.0, 2.0 / 3.0] {
                    let mut n = [0.0; 3];
                    n[i] = 1.0 - t;
                    n[j] = t;
                    nodes.push(n);
                }
            }
            nodes.push([1.0 / 3.0; 3]);
        }
        d => return Err(CoreError::UnsupportedDegree(d)),
    }
    Ok(nodes)
}

/// Values and reference-coordinate gradients of all local basis functions at
/// a barycentric point.
pub fn reference_basis(degree: usize, bary: [f64; 3]) -> Result<(Vec<f64>, Vec<[f64; 2]>)> {
    let tol = 1e-12;
    if bary.iter().any(|&l| !(-tol..=1.0 + tol).contains(&l))
        || (bary.iter().sum::<f64>() - 1.0).abs() > 1e-10
    {
        return Err(CoreError::PointOutsideReference(bary));
    }
    let l = bary;
    let mut values = Vec::with_capacity(local_dim(degree));
    let mut grads: Vec<[f64; 2]> = Vec::with_capacity(local_dim(degree));
    // Accumulate ∇φ = Σ_i (∂φ/∂λ_i) ∇λ_i.
    let push = |values: &mut Vec<f64>, grads: &mut Vec<[f64; 2]>, v: f64, dl: [f64; 3]| {
        values.push(v);
        let mut g = [0.0; 2];
        for i in 0..3 {
            g[0] += dl[i] * GRAD_L[i][0];
            g[1] += dl[i] * GRAD_L[i][1];
        }
        grads.push(g);
    };
    match degree {
        1 => {
            for i in 0..3 {
                let mut dl = [0.0; 3];
                dl[i] = 1.0;
                push(&mut values, &mut grads, l[i], dl);
            }
        }
        2 => {
            for i in 0..3 {
                let mut dl = [0.0; 3];
                dl[i] = 4.0 * l[i] - 1.0;
                push(&mut values, &mut grads, l[i] * (2.0 * l[i] - 1.0), dl);
            }
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                let mut dl = [0.0; 3];
                dl[i] = 4.0 * l[j];
                dl[j] = 4.0 * l[i];
                push(&mut values, &mut grads, 4.0 * l[i] * l[j], dl);
            }
        }
        3 => {
            for i in 0..3 {
                let mut dl = [0.0; 3];
                dl[i] = 0.5 * (27.0 * l[i] * l[i] - 18.0 * l[i] + 2.0);
                push(
                    &mut values,
                    &mut grads,
                    0.5 * l[i] * (3.0 * l[i] - 1.0) * (3.0 * l[i] - 2.0),
                    dl,
                );
            }
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                // Node at 1/3 toward j: 9/2 λ_i λ_j (3λ_i - 1).
                let mut dl = [0.0; 3];
                dl[i] = 4.5 * l[j] * (6.0 * l[i] - 1.0);
                dl[j] = 4.5 * l[i] * (3.0 * l[i] - 1.0);
                push(
                    &mut values,
                    &mut grads,
                    4.5 * l[i] * l[j] * (3.0 * l[i] - 1.0),
                    dl,
                );
                // Node at 2/3 toward j: 9/2 λ_i λ_j (3λ_j - 1).
                let mut dl = [0.0; 3];
                dl[i] = 4.5 * l[j] * (3.0 * l[j] - 1.0);
                dl[j] = 4.5 * l[i] * (6.0 * l[j] - 1.0);
                push(
                    &mut values,
                    &mut grads,
                    4.5 * l[i] * l[j] * (3.0 * l[j] - 1.0),
                    dl,
                );
            }
            let dl = [27.0 * l[1] * l[2], 27.0 * l[0] * l[2], 27.0 * l[0] * l[1]];
            push(&mut values, &mut grads, 27.0 * l[0] * l[1] * l[2], dl);
        }
        d => return Err(CoreError::UnsupportedDegree(d)),
    }
    Ok((values, grads))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity_and_gradient_sum() {
        for p in 1..=3 {
            for bary in [
                [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
                [0.2, 0.5, 0.3],
                [1.0, 0.0, 0.0],
                [0.0, 0.25, 0.75],
            ] {
                let (vals, grads) = reference_basis(p, bary).unwrap();
                let s: f64 = vals.iter().sum();
                assert!((s - 1.0).abs() < 1e-13, "p={p}");
                let gx: f64 = grads.iter().map(|g| g[0]).sum();
                let gy: f64 = grads.iter().map(|g| g[1]).sum();
                assert!(gx.abs() < 1e-12 && gy.abs() < 1e-12, "p={p}");
            }
        }
    }

    #[test]
    fn p1_centroid_values() {
        let (vals, _) = reference_basis(1, [1.0 / 3.0; 3]).unwrap();
        for v in vals {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn kronecker_property_at_nodes() {
        for p in 1..=3 {
            let nodes = local_nodes(p).unwrap();
            for (k, &node) in nodes.iter().enumerate() {
                let (vals, _) = reference_basis(p, node).unwrap();
                for (i, v) in vals.iter().enumerate() {
                    let expect = if i == k { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-12, "p={p} node {k} basis {i}: {v}");
                }
            }
        }
    }

    #[test]
    fn p2_midpoint_bubble() {
        // At the (0,1) edge midpoint the corresponding bubble is 1.
        let (vals, _) = reference_basis(2, [0.5, 0.5, 0.0]).unwrap();
        assert!((vals[3] - 1.0).abs() < 1e-15);
        for (i, v) in vals.iter().enumerate() {
            if i != 3 {
                assert!(v.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unsupported_degree_rejected() {
        assert!(matches!(
            reference_basis(4, [1.0 / 3.0; 3]),
            Err(CoreError::UnsupportedDegree(4))
        ));
    }

    #[test]
    fn point_outside_reference_rejected() {
        assert!(reference_basis(2, [0.8, 0.8, -0.6]).is_err());
    }
}
