//! Continuous Lagrange P1/P2/P3 spaces over a subdomain mesh.

pub mod assemble;
mod basis;

pub use assemble::{
    assemble_load, assemble_reaction_diffusion, dirichlet_values, h1_error, h1_norm,
};
pub use basis::{local_dim, local_nodes, reference_basis};

use crate::error::Result;
use crate::mesh::{dist, EdgeTag, Interface, SubdomainMesh};
use crate::space1d::Space1d;
use std::collections::HashMap;

/// Trace degrees of freedom of one interface side, in chain order from the
/// interface start to its end.
#[derive(Debug, Clone)]
pub struct TraceDofs {
    pub interface: usize,
    /// 0 if this subdomain is the lower-indexed side of the interface.
    pub side: usize,
    pub dofs: Vec<usize>,
    /// Arclength of each trace dof from the interface start.
    pub params: Vec<f64>,
}

impl TraceDofs {
    /// The 1D trace space on this side (breakpoints at the chain nodes).
    pub fn space(&self, degree: usize) -> Result<Space1d> {
        let p = degree;
        let breakpoints: Vec<f64> = self.params.iter().copied().step_by(p).collect();
        Space1d::new(breakpoints, degree)
    }

    /// Extract the trace values of a subdomain coefficient vector.
    pub fn extract(&self, u: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_iterator(self.dofs.len(), self.dofs.iter().map(|&d| u[d]))
    }
}

/// Degree-of-freedom layout of a Lagrange space: vertex dofs first, then
/// `p - 1` per edge, then interior dofs.
#[derive(Debug, Clone)]
pub struct FeSpace {
    pub degree: usize,
    pub dof_coords: Vec<[f64; 2]>,
    /// Global dofs of each triangle in local node order.
    pub cell_dofs: Vec<Vec<usize>>,
    /// Dofs on the exterior (Dirichlet) boundary, sorted.
    pub exterior_dofs: Vec<usize>,
    /// Trace dofs per interface side owned by this subdomain.
    pub traces: Vec<TraceDofs>,
    vertex_count: usize,
    edge_count: usize,
}

impl FeSpace {
    pub fn new(mesh: &SubdomainMesh, degree: usize, interfaces: &[Interface]) -> Result<Self> {
        basis::local_nodes(degree)?; // validates the degree
        let p = degree;
        let nv = mesh.vertices.len();

        // Undirected edge enumeration.
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &mesh.triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let next = edge_ids.len();
                edge_ids.entry(key).or_insert(next);
            }
        }
        let ne = edge_ids.len();
        let per_edge = p - 1;
        let per_cell = (p - 1) * p.saturating_sub(2) / 2;
        let num_dofs = nv + ne * per_edge + mesh.triangles.len() * per_cell;

        let mut dof_coords = vec![[0.0; 2]; num_dofs];
        dof_coords[..nv].copy_from_slice(&mesh.vertices);
        let edge_dof = |eid: usize, t: usize| nv + eid * per_edge + t;
        for (&(a, b), &eid) in &edge_ids {
            let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
            for t in 0..per_edge {
                let s = (t + 1) as f64 / p as f64;
                dof_coords[edge_dof(eid, t)] =
                    [pa[0] * (1.0 - s) + pb[0] * s, pa[1] * (1.0 - s) + pb[1] * s];
            }
        }

        let mut cell_dofs = Vec::with_capacity(mesh.triangles.len());
        let interior_base = nv + ne * per_edge;
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let mut dofs = Vec::with_capacity(basis::local_dim(p));
            dofs.extend_from_slice(&[tri[0], tri[1], tri[2]]);
            for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
                let (gi, gj) = (tri[i], tri[j]);
                let key = (gi.min(gj), gi.max(gj));
                let eid = edge_ids[&key];
                for t_loc in 0..per_edge {
                    let t_glob = if gi < gj { t_loc } else { per_edge - 1 - t_loc };
                    dofs.push(edge_dof(eid, t_glob));
                }
            }
            for s in 0..per_cell {
                dofs.push(interior_base + t * per_cell + s);
            }
            if per_cell > 0 {
                // Interior node coordinates from the local node table.
                let nodes = basis::local_nodes(p)?;
                let (pa, pb, pc) = (
                    mesh.vertices[tri[0]],
                    mesh.vertices[tri[1]],
                    mesh.vertices[tri[2]],
                );
                for s in 0..per_cell {
                    let l = nodes[3 + 3 * per_edge + s];
                    dof_coords[interior_base + t * per_cell + s] = [
                        l[0] * pa[0] + l[1] * pb[0] + l[2] * pc[0],
                        l[0] * pa[1] + l[1] * pb[1] + l[2] * pc[1],
                    ];
                }
            }
            cell_dofs.push(dofs);
        }

        // Exterior Dirichlet dofs: everything on exterior-tagged edges.
        let mut exterior = Vec::new();
        for edge in &mesh.boundary_edges {
            if edge.tag == EdgeTag::Exterior {
                let [a, b] = edge.vertices;
                exterior.push(a);
                exterior.push(b);
                let key = (a.min(b), a.max(b));
                let eid = edge_ids[&key];
                for t in 0..per_edge {
                    exterior.push(edge_dof(eid, t));
                }
            }
        }
        exterior.sort_unstable();
        exterior.dedup();

        // Trace dofs per interface side, walked in chain order.
        let mut traces = Vec::new();
        for itf in interfaces {
            let sides: [usize; 2] = [itf.subdomains.0, itf.subdomains.1];
            for (side, &sub) in sides.iter().enumerate() {
                if sub != mesh.subdomain_id {
                    continue;
                }
                let chain = &itf.chains[side];
                let mut dofs = vec![chain[0]];
                let mut params = vec![0.0];
                let mut arc = 0.0;
                for w in chain.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let seg = dist(mesh.vertices[a], mesh.vertices[b]);
                    let key = (a.min(b), a.max(b));
                    let eid = edge_ids[&key];
                    for t_loc in 0..per_edge {
                        let t_glob = if a < b { t_loc } else { per_edge - 1 - t_loc };
                        dofs.push(edge_dof(eid, t_glob));
                        params.push(arc + seg * (t_loc + 1) as f64 / p as f64);
                    }
                    arc += seg;
                    dofs.push(b);
                    params.push(arc);
                }
                traces.push(TraceDofs {
                    interface: itf.id,
                    side,
                    dofs,
                    params,
                });
            }
        }

        Ok(Self {
            degree,
            dof_coords,
            cell_dofs,
            exterior_dofs: exterior,
            traces,
            vertex_count: nv,
            edge_count: ne,
        })
    }

    pub fn num_dofs(&self) -> usize {
        self.dof_coords.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertex part of a coefficient vector (for export).
    pub fn vertex_values(&self, u: &nalgebra::DVector<f64>) -> Vec<f64> {
        u.as_slice()[..self.vertex_count].to_vec()
    }
}
