//! Assembly of the reaction-diffusion form `∫ (∇u·∇v + uv)`, load vectors,
//! Dirichlet data and H¹ error evaluation.

use super::FeSpace;
use crate::mesh::SubdomainMesh;
use crate::quadrature::triangle_rule;
use crate::sparse::SymTriplets;
use nalgebra::DVector;

struct MappedCell {
    j: [[f64; 2]; 2],
    det: f64,
    origin: [f64; 2],
}

impl MappedCell {
    fn new(mesh: &SubdomainMesh, tri: &[usize; 3]) -> Self {
        let (a, b, c) = (
            mesh.vertices[tri[0]],
            mesh.vertices[tri[1]],
            mesh.vertices[tri[2]],
        );
        let j = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        Self { j, det, origin: a }
    }

    fn physical(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.origin[0] + self.j[0][0] * p[0] + self.j[0][1] * p[1],
            self.origin[1] + self.j[1][0] * p[0] + self.j[1][1] * p[1],
        ]
    }

    fn grad_to_physical(&self, g: [f64; 2]) -> [f64; 2] {
        [
            (self.j[1][1] * g[0] - self.j[1][0] * g[1]) / self.det,
            (-self.j[0][1] * g[0] + self.j[0][0] * g[1]) / self.det,
        ]
    }
}

/// Basis values and gradients tabulated at the points of a triangle rule.
fn tabulate(
    degree: usize,
    rule: &crate::quadrature::TriangleRule,
) -> Vec<(Vec<f64>, Vec<[f64; 2]>)> {
    rule.points
        .iter()
        .map(|&[x, y]| super::reference_basis(degree, [1.0 - x - y, x, y]).unwrap())
        .collect()
}

/// Stiffness-plus-mass matrix of the subdomain, assembled with a rule exact
/// for degree `2p` (or `quad_degree` when given).
pub fn assemble_reaction_diffusion(
    space: &FeSpace,
    mesh: &SubdomainMesh,
    quad_degree: Option<usize>,
) -> SymTriplets {
    let p = space.degree;
    let rule = triangle_rule(quad_degree.unwrap_or(2 * p));
    let tab = tabulate(p, &rule);
    let nloc = super::local_dim(p);
    let mut out = SymTriplets::new(space.num_dofs());
    let mut local = vec![0.0; nloc * nloc];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let cell = MappedCell::new(mesh, tri);
        local.fill(0.0);
        for (q, w) in rule.weights.iter().enumerate() {
            let (vals, ref_grads) = &tab[q];
            let grads: Vec<[f64; 2]> = ref_grads
                .iter()
                .map(|&g| cell.grad_to_physical(g))
                .collect();
            let scale = w * cell.det;
            for i in 0..nloc {
                for k in 0..nloc {
                    local[i * nloc + k] += scale
                        * (grads[i][0] * grads[k][0]
                            + grads[i][1] * grads[k][1]
                            + vals[i] * vals[k]);
                }
            }
        }
        let dofs = &space.cell_dofs[t];
        for i in 0..nloc {
            for k in 0..nloc {
                out.push(dofs[i], dofs[k], local[i * nloc + k]);
            }
        }
    }
    out
}

/// Load vector `∫ f φ_i`, default rule exact for degree `2p + 4`.
pub fn assemble_load(
    space: &FeSpace,
    mesh: &SubdomainMesh,
    f: &dyn Fn(f64, f64) -> f64,
    quad_degree: Option<usize>,
) -> DVector<f64> {
    let p = space.degree;
    let rule = triangle_rule(quad_degree.unwrap_or(2 * p + 4));
    let tab = tabulate(p, &rule);
    let mut out = DVector::zeros(space.num_dofs());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let cell = MappedCell::new(mesh, tri);
        let dofs = &space.cell_dofs[t];
        for (q, w) in rule.weights.iter().enumerate() {
            let x = cell.physical(rule.points[q]);
            let fv = f(x[0], x[1]) * w * cell.det;
            for (i, v) in tab[q].0.iter().enumerate() {
                out[dofs[i]] += fv * v;
            }
        }
    }
    out
}

/// Dirichlet pairs (dof, g(dof)) over the exterior boundary dofs.
pub fn dirichlet_values(space: &FeSpace, g: &dyn Fn(f64, f64) -> f64) -> Vec<(usize, f64)> {
    space
        .exterior_dofs
        .iter()
        .map(|&d| {
            let p = space.dof_coords[d];
            (d, g(p[0], p[1]))
        })
        .collect()
}

/// `(‖u_h - u‖_{H¹(Ω_k)}, ‖u‖_{H¹(Ω_k)})` by element quadrature (default
/// exactness `2p + 4`).
pub fn h1_error(
    space: &FeSpace,
    mesh: &SubdomainMesh,
    u_h: &DVector<f64>,
    exact: &dyn Fn(f64, f64) -> f64,
    exact_grad: &dyn Fn(f64, f64) -> [f64; 2],
    quad_degree: Option<usize>,
) -> (f64, f64) {
    let p = space.degree;
    let rule = triangle_rule(quad_degree.unwrap_or(2 * p + 4));
    let tab = tabulate(p, &rule);
    let nloc = super::local_dim(p);
    let mut err_sq = 0.0;
    let mut norm_sq = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let cell = MappedCell::new(mesh, tri);
        let dofs = &space.cell_dofs[t];
        for (q, w) in rule.weights.iter().enumerate() {
            let x = cell.physical(rule.points[q]);
            let (vals, ref_grads) = &tab[q];
            let mut uh = 0.0;
            let mut guh = [0.0; 2];
            for i in 0..nloc {
                let c = u_h[dofs[i]];
                uh += c * vals[i];
                let g = cell.grad_to_physical(ref_grads[i]);
                guh[0] += c * g[0];
                guh[1] += c * g[1];
            }
            let ue = exact(x[0], x[1]);
            let ge = exact_grad(x[0], x[1]);
            let scale = w * cell.det;
            err_sq += scale
                * ((uh - ue) * (uh - ue)
                    + (guh[0] - ge[0]) * (guh[0] - ge[0])
                    + (guh[1] - ge[1]) * (guh[1] - ge[1]));
            norm_sq += scale * (ue * ue + ge[0] * ge[0] + ge[1] * ge[1]);
        }
    }
    (err_sq.sqrt(), norm_sq.sqrt())
}

/// `‖u_h‖_{H¹(Ω_k)}` of a discrete field.
pub fn h1_norm(
    space: &FeSpace,
    mesh: &SubdomainMesh,
    u_h: &DVector<f64>,
    quad_degree: Option<usize>,
) -> f64 {
    h1_error(
        space,
        mesh,
        u_h,
        &|_, _| 0.0,
        &|_, _| [0.0, 0.0],
        quad_degree,
    )
    .0
}
