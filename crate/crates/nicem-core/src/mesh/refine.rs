//! Uniform mesh refinement by triangle lattice subdivision.

use super::generate::collect_chains;
use super::{BoundaryEdge, DecomposedMesh, SubdomainMesh};
use crate::error::{CoreError, Result};
use std::collections::HashMap;

/// Replace every triangle by `factor²` similar triangles; interface chains
/// are refined consistently and the original nodes (in particular the
/// interface endpoints) are preserved exactly.
pub fn refine(mesh: &DecomposedMesh, factor: usize) -> Result<DecomposedMesh> {
    if factor != 2 && factor != 3 {
        return Err(CoreError::UnsupportedRefineFactor(factor));
    }
    let mut out = DecomposedMesh {
        domain: mesh.domain,
        subdomains: mesh
            .subdomains
            .iter()
            .map(|s| subdivide(s, factor))
            .collect(),
        interfaces: mesh.interfaces.clone(),
    };
    collect_chains(&mut out);
    out.validate()?;
    Ok(out)
}

fn subdivide(mesh: &SubdomainMesh, f: usize) -> SubdomainMesh {
    let mut vertices = mesh.vertices.clone();
    // Interior points of each undirected edge, ordered from the lower to the
    // higher vertex id; shared by the two adjacent triangles.
    let mut edge_points: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut edge_ids = |vertices: &mut Vec<[f64; 2]>, a: usize, b: usize| -> Vec<usize> {
        let key = (a.min(b), a.max(b));
        let ids = edge_points.entry(key).or_insert_with(|| {
            let (pa, pb) = (vertices[key.0], vertices[key.1]);
            (1..f)
                .map(|i| {
                    let t = i as f64 / f as f64;
                    vertices.push([pa[0] * (1.0 - t) + pb[0] * t, pa[1] * (1.0 - t) + pb[1] * t]);
                    vertices.len() - 1
                })
                .collect()
        });
        if a < b {
            ids.clone()
        } else {
            ids.iter().rev().copied().collect()
        }
    };

    let mut triangles = Vec::with_capacity(mesh.triangles.len() * f * f);
    for &[a, b, c] in &mesh.triangles {
        let (pa, pb, pc) = (mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]);
        let ab = edge_ids(&mut vertices, a, b);
        let bc = edge_ids(&mut vertices, b, c);
        let ca = edge_ids(&mut vertices, c, a);
        // Lattice point (i, j): P = a + i/f (b - a) + j/f (c - a), i + j <= f.
        let mut lattice = vec![vec![usize::MAX; f + 1]; f + 1];
        for i in 0..=f {
            for j in 0..=(f - i) {
                let id = match (i, j) {
                    (0, 0) => a,
                    (i, 0) if i == f => b,
                    (0, j) if j == f => c,
                    (i, 0) => ab[i - 1],
                    (0, j) => ca[f - j - 1],
                    (i, j) if i + j == f => bc[j - 1],
                    (i, j) => {
                        let (ti, tj) = (i as f64 / f as f64, j as f64 / f as f64);
                        vertices.push([
                            pa[0] + ti * (pb[0] - pa[0]) + tj * (pc[0] - pa[0]),
                            pa[1] + ti * (pb[1] - pa[1]) + tj * (pc[1] - pa[1]),
                        ]);
                        vertices.len() - 1
                    }
                };
                lattice[i][j] = id;
            }
        }
        for i in 0..f {
            for j in 0..(f - i) {
                triangles.push([lattice[i][j], lattice[i + 1][j], lattice[i][j + 1]]);
                if i + j < f - 1 {
                    triangles.push([lattice[i + 1][j], lattice[i + 1][j + 1], lattice[i][j + 1]]);
                }
            }
        }
    }

    let mut boundary_edges = Vec::with_capacity(mesh.boundary_edges.len() * f);
    for edge in &mesh.boundary_edges {
        let [u, v] = edge.vertices;
        let inner = edge_ids(&mut vertices, u, v);
        let mut path = Vec::with_capacity(f + 1);
        path.push(u);
        path.extend(&inner);
        path.push(v);
        for w in path.windows(2) {
            boundary_edges.push(BoundaryEdge {
                vertices: [w[0], w[1]],
                tag: edge.tag,
            });
        }
    }

    SubdomainMesh {
        subdomain_id: mesh.subdomain_id,
        vertices,
        triangles,
        boundary_edges,
    }
}
