//! 2D triangulated domain decompositions.
//!
//! Each subdomain carries its own structured triangulation; neighbouring
//! subdomains meet along straight, geometrically conforming interface
//! segments but their node chains on the two sides need not match.

mod generate;
mod io;
mod refine;

pub use generate::{build_rect_partition, DiagonalStyle, SubdomainSpec};
pub use io::{read_text, write_text, write_vtk};
pub use refine::refine;

use crate::error::{CoreError, Result};

/// Geometric tolerance for coordinate identity checks.
pub const GEOM_TOL: f64 = 1e-12;

/// Default admissible bound on the shape-regularity measure h_T / ρ_T.
pub const DEFAULT_REGULARITY_BOUND: f64 = 10.0;

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        assert!(xmax > xmin && ymax > ymin, "empty rectangle");
        Self {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, other: &Rect, tol: f64) -> bool {
        other.xmin >= self.xmin - tol
            && other.xmax <= self.xmax + tol
            && other.ymin >= self.ymin - tol
            && other.ymax <= self.ymax + tol
    }
}

/// Tag carried by a boundary edge of a subdomain mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeTag {
    /// Part of the exterior boundary ∂Ω.
    Exterior,
    /// Part of interface `id` (index into [`DecomposedMesh::interfaces`]).
    Interface(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: EdgeTag,
}

/// Triangulation of a single subdomain.
#[derive(Debug, Clone)]
pub struct SubdomainMesh {
    pub subdomain_id: usize,
    pub vertices: Vec<[f64; 2]>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
}

/// One straight interface segment shared by two subdomains, with the ordered
/// node chain of each side. Both chains run from `start` to `end` and share
/// those endpoints exactly; the interior nodes generally differ.
#[derive(Debug, Clone)]
pub struct Interface {
    pub id: usize,
    /// `(k, l)` with `k < l`, indices into [`DecomposedMesh::subdomains`].
    pub subdomains: (usize, usize),
    pub start: [f64; 2],
    pub end: [f64; 2],
    /// Vertex ids of the chain in mesh `k`, then in mesh `l`.
    pub chains: [Vec<usize>; 2],
}

impl Interface {
    pub fn length(&self) -> f64 {
        dist(self.start, self.end)
    }

    /// The two ordered sides `(k, l)` and `(l, k)` of this interface.
    pub fn side_subdomain(&self, side: usize) -> usize {
        match side {
            0 => self.subdomains.0,
            1 => self.subdomains.1,
            _ => panic!("an interface has exactly two sides"),
        }
    }
}

/// A decomposed domain: subdomain meshes plus tagged interfaces.
#[derive(Debug, Clone)]
pub struct DecomposedMesh {
    pub domain: Rect,
    pub subdomains: Vec<SubdomainMesh>,
    pub interfaces: Vec<Interface>,
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Twice the signed area of triangle `(a, b, c)`.
pub fn signed_area2(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
}

/// Step sizes along an interface chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub h_min: f64,
    pub h_mean: f64,
    pub h_max: f64,
}

impl SubdomainMesh {
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * signed_area2(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.triangle_area(t))
            .sum()
    }

    /// Diameter h_T of triangle `t` (its longest edge).
    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        dist(pa, pb).max(dist(pb, pc)).max(dist(pc, pa))
    }

    /// Shape-regularity measure σ_T = h_T / ρ_T where ρ_T is the inscribed
    /// circle diameter 4·area/perimeter.
    pub fn shape_regularity(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        let perimeter = dist(pa, pb) + dist(pb, pc) + dist(pc, pa);
        let rho = 4.0 * self.triangle_area(t) / perimeter;
        self.triangle_diameter(t) / rho
    }

    /// Mesh size h = max over triangles of h_T.
    pub fn mesh_h(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.triangle_diameter(t))
            .fold(0.0, f64::max)
    }

    /// Distinct (undirected) edge count.
    pub fn edge_count(&self) -> usize {
        let mut edges = std::collections::HashSet::new();
        for tri in &self.triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges.len()
    }

    /// Every invariant a subdomain mesh must satisfy on its own.
    pub fn validate(&self, regularity_bound: f64) -> Result<()> {
        for t in 0..self.triangles.len() {
            let area = self.triangle_area(t);
            if area <= 0.0 {
                return Err(CoreError::DegenerateTriangle {
                    subdomain: self.subdomain_id,
                    triangle: t,
                    area,
                });
            }
            let sigma = self.shape_regularity(t);
            if sigma > regularity_bound {
                return Err(CoreError::MeshInvariant(format!(
                    "triangle {t} of subdomain {} has h_T/ρ_T = {sigma:.3} > {regularity_bound}",
                    self.subdomain_id
                )));
            }
        }
        // Edge incidence: boundary edges in exactly one triangle, interior in two.
        let mut incidence = std::collections::HashMap::new();
        for tri in &self.triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                *incidence.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        let boundary: std::collections::HashSet<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| {
                let [a, b] = e.vertices;
                (a.min(b), a.max(b))
            })
            .collect();
        if boundary.len() != self.boundary_edges.len() {
            return Err(CoreError::MeshInvariant(format!(
                "duplicate boundary edges in subdomain {}",
                self.subdomain_id
            )));
        }
        for (edge, count) in &incidence {
            let expected = if boundary.contains(edge) { 1 } else { 2 };
            if *count != expected {
                return Err(CoreError::MeshInvariant(format!(
                    "edge {edge:?} of subdomain {} appears in {count} triangles, expected {expected}",
                    self.subdomain_id
                )));
            }
        }
        for edge in &boundary {
            if !incidence.contains_key(edge) {
                return Err(CoreError::MeshInvariant(format!(
                    "boundary edge {edge:?} of subdomain {} not part of any triangle",
                    self.subdomain_id
                )));
            }
        }
        // Euler relation for a simply connected triangulated polygon.
        let euler =
            self.vertices.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64;
        if euler != 1 {
            return Err(CoreError::MeshInvariant(format!(
                "Euler relation V - E + T = {euler} != 1 in subdomain {}",
                self.subdomain_id
            )));
        }
        Ok(())
    }
}

/// Chord-length statistics between consecutive chain nodes.
pub fn chain_step_stats(mesh: &SubdomainMesh, chain: &[usize]) -> Result<StepStats> {
    if chain.len() < 2 {
        return Err(CoreError::EmptyChain);
    }
    let steps: Vec<f64> = chain
        .windows(2)
        .map(|w| dist(mesh.vertices[w[0]], mesh.vertices[w[1]]))
        .collect();
    let h_min = steps.iter().copied().fold(f64::INFINITY, f64::min);
    let h_max = steps.iter().copied().fold(0.0, f64::max);
    let h_mean = steps.iter().sum::<f64>() / steps.len() as f64;
    Ok(StepStats {
        h_min,
        h_mean,
        h_max,
    })
}

impl DecomposedMesh {
    /// Global mesh size h = max over subdomains.
    pub fn h_max(&self) -> f64 {
        self.subdomains
            .iter()
            .map(|s| s.mesh_h())
            .fold(0.0, f64::max)
    }

    /// Steps of one side (0 or 1) of interface `id`.
    pub fn interface_steps(&self, id: usize, side: usize) -> Result<StepStats> {
        let itf = &self.interfaces[id];
        let mesh = &self.subdomains[itf.side_subdomain(side)];
        chain_step_stats(mesh, &itf.chains[side])
    }

    /// Min/mean/max over both sides of interface `id`.
    pub fn interface_steps_both(&self, id: usize) -> Result<StepStats> {
        let a = self.interface_steps(id, 0)?;
        let b = self.interface_steps(id, 1)?;
        Ok(StepStats {
            h_min: a.h_min.min(b.h_min),
            h_mean: 0.5 * (a.h_mean + b.h_mean),
            h_max: a.h_max.max(b.h_max),
        })
    }

    /// Full consistency check of the decomposition.
    pub fn validate(&self) -> Result<()> {
        self.validate_with_bound(DEFAULT_REGULARITY_BOUND)
    }

    pub fn validate_with_bound(&self, regularity_bound: f64) -> Result<()> {
        for sub in &self.subdomains {
            sub.validate(regularity_bound)?;
        }
        let total: f64 = self.subdomains.iter().map(|s| s.area()).sum();
        let rel = (total - self.domain.area()).abs() / self.domain.area();
        if rel > GEOM_TOL {
            return Err(CoreError::MeshInvariant(format!(
                "subdomain areas sum to {total}, domain area {} (rel {rel:.2e})",
                self.domain.area()
            )));
        }
        for itf in &self.interfaces {
            let (k, l) = itf.subdomains;
            for (side, sub) in [(0usize, k), (1, l)] {
                let mesh = &self.subdomains[sub];
                let chain = &itf.chains[side];
                if chain.len() < 2 {
                    return Err(CoreError::EmptyChain);
                }
                let first = mesh.vertices[chain[0]];
                let last = mesh.vertices[*chain.last().unwrap()];
                if dist(first, itf.start) > GEOM_TOL || dist(last, itf.end) > GEOM_TOL {
                    return Err(CoreError::MeshInvariant(format!(
                        "interface {} side {side} chain endpoints do not match the segment",
                        itf.id
                    )));
                }
                // Strict monotonicity along the segment direction.
                let dir = [itf.end[0] - itf.start[0], itf.end[1] - itf.start[1]];
                let mut prev = f64::NEG_INFINITY;
                for &v in chain {
                    let p = mesh.vertices[v];
                    let t = (p[0] - itf.start[0]) * dir[0] + (p[1] - itf.start[1]) * dir[1];
                    if t <= prev {
                        return Err(CoreError::MeshInvariant(format!(
                            "interface {} side {side} chain is not strictly monotone",
                            itf.id
                        )));
                    }
                    // Node must lie on the segment.
                    let len2 = dir[0] * dir[0] + dir[1] * dir[1];
                    let s = t / len2;
                    let proj = [itf.start[0] + s * dir[0], itf.start[1] + s * dir[1]];
                    if dist(p, proj) > GEOM_TOL {
                        return Err(CoreError::MeshInvariant(format!(
                            "interface {} side {side} node {v} off the segment",
                            itf.id
                        )));
                    }
                    prev = t;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests;
