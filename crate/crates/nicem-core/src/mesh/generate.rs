//! Structured rectangle partitions with independently meshed subdomains.

use super::{
    dist, BoundaryEdge, DecomposedMesh, EdgeTag, Interface, Rect, SubdomainMesh, GEOM_TOL,
};
use crate::error::{CoreError, Result};

/// Diagonal orientation of the cell split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalStyle {
    /// Diagonal from the lower-left to the upper-right cell corner.
    #[default]
    Right,
    /// Diagonal from the lower-right to the upper-left cell corner.
    Left,
    /// Alternate with cell parity (checkerboard).
    Alternating,
}

/// One subdomain of the layout: its rectangle, division counts and the
/// diagonal orientation of the structured triangulation.
#[derive(Debug, Clone, Copy)]
pub struct SubdomainSpec {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub diagonal: DiagonalStyle,
}

impl SubdomainSpec {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Self {
        Self {
            rect,
            nx,
            ny,
            diagonal: DiagonalStyle::Right,
        }
    }

    pub fn with_diagonal(mut self, diagonal: DiagonalStyle) -> Self {
        self.diagonal = diagonal;
        self
    }
}

/// Build a decomposition of `domain` from a tiling by subdomain rectangles,
/// each meshed independently as a structured triangulation. Interfaces are
/// extracted and tagged; node chains on the two sides of an interface may
/// have different resolutions.
pub fn build_rect_partition(domain: Rect, specs: &[SubdomainSpec]) -> Result<DecomposedMesh> {
    for (i, spec) in specs.iter().enumerate() {
        if spec.nx == 0 || spec.ny == 0 {
            return Err(CoreError::InvalidResolution { index: i });
        }
        if !domain.contains(&spec.rect, GEOM_TOL) {
            return Err(CoreError::RectOutsideDomain { index: i });
        }
    }
    // Pairwise interior overlap means an invalid tiling.
    for a in 0..specs.len() {
        for b in (a + 1)..specs.len() {
            let (ra, rb) = (specs[a].rect, specs[b].rect);
            let wx = ra.xmax.min(rb.xmax) - ra.xmin.max(rb.xmin);
            let wy = ra.ymax.min(rb.ymax) - ra.ymin.max(rb.ymin);
            if wx > GEOM_TOL && wy > GEOM_TOL {
                return Err(CoreError::OverlappingLayout { a, b });
            }
        }
    }
    let covered: f64 = specs.iter().map(|s| s.rect.area()).sum();
    let deficit = domain.area() - covered;
    if deficit.abs() > GEOM_TOL * domain.area() {
        return Err(CoreError::GappedLayout { deficit });
    }

    let interfaces = extract_interface_segments(specs)?;
    let mut subdomains: Vec<SubdomainMesh> = specs
        .iter()
        .enumerate()
        .map(|(k, spec)| structured_mesh(k, spec))
        .collect();

    // Tag boundary edges against the interface segments.
    for (k, mesh) in subdomains.iter_mut().enumerate() {
        for edge in &mut mesh.boundary_edges {
            let [a, b] = edge.vertices;
            let mid = [
                0.5 * (mesh.vertices[a][0] + mesh.vertices[b][0]),
                0.5 * (mesh.vertices[a][1] + mesh.vertices[b][1]),
            ];
            for seg in &interfaces {
                if (seg.subdomains.0 == k || seg.subdomains.1 == k)
                    && on_segment(mid, seg.start, seg.end)
                {
                    edge.tag = EdgeTag::Interface(seg.id);
                    break;
                }
            }
        }
    }

    let mut mesh = DecomposedMesh {
        domain,
        subdomains,
        interfaces,
    };
    collect_chains(&mut mesh);
    mesh.validate()?;
    Ok(mesh)
}

/// Shared full sides between pairs of rectangles. A partial side contact of
/// positive length violates geometric conformity and is rejected.
fn extract_interface_segments(specs: &[SubdomainSpec]) -> Result<Vec<Interface>> {
    let mut out = Vec::new();
    for a in 0..specs.len() {
        for b in (a + 1)..specs.len() {
            let (ra, rb) = (specs[a].rect, specs[b].rect);
            // Vertical contact: a's right side against b's left side, or the reverse.
            let vertical = if (ra.xmax - rb.xmin).abs() <= GEOM_TOL {
                Some(ra.xmax)
            } else if (rb.xmax - ra.xmin).abs() <= GEOM_TOL {
                Some(rb.xmax)
            } else {
                None
            };
            if let Some(x) = vertical {
                let lo = ra.ymin.max(rb.ymin);
                let hi = ra.ymax.min(rb.ymax);
                if hi - lo > GEOM_TOL {
                    let full = (ra.ymin - rb.ymin).abs() <= GEOM_TOL
                        && (ra.ymax - rb.ymax).abs() <= GEOM_TOL;
                    if !full {
                        return Err(CoreError::NonConformingLayout { a, b });
                    }
                    out.push(Interface {
                        id: out.len(),
                        subdomains: (a, b),
                        start: [x, lo],
                        end: [x, hi],
                        chains: [Vec::new(), Vec::new()],
                    });
                    continue;
                }
            }
            let horizontal = if (ra.ymax - rb.ymin).abs() <= GEOM_TOL {
                Some(ra.ymax)
            } else if (rb.ymax - ra.ymin).abs() <= GEOM_TOL {
                Some(rb.ymax)
            } else {
                None
            };
            if let Some(y) = horizontal {
                let lo = ra.xmin.max(rb.xmin);
                let hi = ra.xmax.min(rb.xmax);
                if hi - lo > GEOM_TOL {
                    let full = (ra.xmin - rb.xmin).abs() <= GEOM_TOL
                        && (ra.xmax - rb.xmax).abs() <= GEOM_TOL;
                    if !full {
                        return Err(CoreError::NonConformingLayout { a, b });
                    }
                    out.push(Interface {
                        id: out.len(),
                        subdomains: (a, b),
                        start: [lo, y],
                        end: [hi, y],
                        chains: [Vec::new(), Vec::new()],
                    });
                }
            }
        }
    }
    Ok(out)
}

fn structured_mesh(id: usize, spec: &SubdomainSpec) -> SubdomainMesh {
    let (nx, ny) = (spec.nx, spec.ny);
    let r = spec.rect;
    // Endpoint-exact interpolation: t = 1 reproduces the far corner bitwise.
    let lerp = |a: f64, b: f64, i: usize, n: usize| {
        let t = i as f64 / n as f64;
        a * (1.0 - t) + b * t
    };
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([lerp(r.xmin, r.xmax, i, nx), lerp(r.ymin, r.ymax, j, ny)]);
        }
    }
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
            let right = match spec.diagonal {
                DiagonalStyle::Right => true,
                DiagonalStyle::Left => false,
                DiagonalStyle::Alternating => (i + j) % 2 == 0,
            };
            if right {
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            } else {
                triangles.push([v00, v10, v01]);
                triangles.push([v10, v11, v01]);
            }
        }
    }
    let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(i, 0), vid(i + 1, 0)],
            tag: EdgeTag::Exterior,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(i, ny), vid(i + 1, ny)],
            tag: EdgeTag::Exterior,
        });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(0, j), vid(0, j + 1)],
            tag: EdgeTag::Exterior,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(nx, j), vid(nx, j + 1)],
            tag: EdgeTag::Exterior,
        });
    }
    SubdomainMesh {
        subdomain_id: id,
        vertices,
        triangles,
        boundary_edges,
    }
}

pub(super) fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2;
    if !(-GEOM_TOL..=1.0 + GEOM_TOL).contains(&t) {
        return false;
    }
    let proj = [a[0] + t * d[0], a[1] + t * d[1]];
    dist(p, proj) <= GEOM_TOL
}

/// Collect, for every interface side, the mesh vertices lying on the segment,
/// ordered from `start` to `end`.
pub(super) fn collect_chains(mesh: &mut DecomposedMesh) {
    for itf in &mut mesh.interfaces {
        let (k, l) = itf.subdomains;
        for (slot, sub) in [(0usize, k), (1, l)] {
            let m = &mesh.subdomains[sub];
            let dir = [itf.end[0] - itf.start[0], itf.end[1] - itf.start[1]];
            let mut nodes: Vec<(f64, usize)> = m
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, &p)| on_segment(p, itf.start, itf.end))
                .map(|(v, &p)| {
                    let t = (p[0] - itf.start[0]) * dir[0] + (p[1] - itf.start[1]) * dir[1];
                    (t, v)
                })
                .collect();
            nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            itf.chains[slot] = nodes.into_iter().map(|(_, v)| v).collect();
        }
    }
}
