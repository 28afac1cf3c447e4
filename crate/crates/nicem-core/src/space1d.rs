//! Piecewise-polynomial spaces on a 1D interface mesh and exact cross-mesh
//! mass matrices.
//!
//! An interface side is parametrized by arclength; its node chain induces
//! breakpoints `s_0 < ... < s_N`. Degrees `p >= 1` give the continuous
//! nodal space of dimension `N·p + 1` with equispaced Lagrange nodes per
//! segment (matching the trace of a 2D Lagrange space along the chain);
//! degree `0` gives discontinuous piecewise constants.

use crate::error::{CoreError, Result};
use nalgebra::DMatrix;

/// Piecewise polynomials of fixed degree on a 1D breakpoint mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Space1d {
    breakpoints: Vec<f64>,
    degree: usize,
}

impl Space1d {
    pub fn new(breakpoints: Vec<f64>, degree: usize) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(CoreError::EmptyChain);
        }
        for w in breakpoints.windows(2) {
            if w[1] <= w[0] {
                return Err(CoreError::MeshInvariant(
                    "1D breakpoints must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self {
            breakpoints,
            degree,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn dim(&self) -> usize {
        match self.degree {
            0 => self.segments(),
            p => self.segments() * p + 1,
        }
    }

    /// Global parameters of the Lagrange nodes (degree >= 1).
    pub fn node_params(&self) -> Vec<f64> {
        assert!(self.degree >= 1, "piecewise constants have no nodes");
        let p = self.degree;
        let mut out = Vec::with_capacity(self.dim());
        out.push(self.breakpoints[0]);
        for seg in 0..self.segments() {
            let (a, b) = (self.breakpoints[seg], self.breakpoints[seg + 1]);
            for j in 1..=p {
                let t = j as f64 / p as f64;
                out.push(a * (1.0 - t) + b * t);
            }
        }
        out
    }

    /// Segment containing `s` (clamped to the ends).
    pub fn segment_of(&self, s: f64) -> usize {
        let n = self.segments();
        match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }

    /// Global basis indices supported on segment `seg`, in local node order.
    pub fn segment_dofs(&self, seg: usize) -> Vec<usize> {
        match self.degree {
            0 => vec![seg],
            p => (0..=p).map(|j| seg * p + j).collect(),
        }
    }

    /// Local basis values at local coordinate `t ∈ [0, 1]` of a segment.
    pub fn local_basis(&self, t: f64) -> Vec<f64> {
        match self.degree {
            0 => vec![1.0],
            p => lagrange_equispaced(p, t),
        }
    }

    /// Evaluate a coefficient vector at parameter `s`.
    pub fn eval(&self, coeffs: &[f64], s: f64) -> f64 {
        let seg = self.segment_of(s);
        let (a, b) = (self.breakpoints[seg], self.breakpoints[seg + 1]);
        let t = (s - a) / (b - a);
        self.segment_dofs(seg)
            .iter()
            .zip(self.local_basis(t))
            .map(|(&i, phi)| coeffs[i] * phi)
            .sum()
    }

    /// Nodal interpolation of a function of the arclength parameter.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        assert!(self.degree >= 1);
        self.node_params().iter().map(|&s| f(s)).collect()
    }
}

/// Values of the `p + 1` equispaced Lagrange basis polynomials at `t`.
fn lagrange_equispaced(p: usize, t: f64) -> Vec<f64> {
    let nodes: Vec<f64> = (0..=p).map(|j| j as f64 / p as f64).collect();
    (0..=p)
        .map(|i| {
            let mut v = 1.0;
            for j in 0..=p {
                if j != i {
                    v *= (t - nodes[j]) / (nodes[i] - nodes[j]);
                }
            }
            v
        })
        .collect()
}

/// Exact mass matrix `∫ ψ_i φ_j` between two spaces on the same geometric
/// segment but different breakpoint meshes: merge both breakpoint sets and
/// apply a Gauss rule of sufficient exactness on every merged subinterval.
pub fn cross_mass(rows: &Space1d, cols: &Space1d) -> Result<DMatrix<f64>> {
    let len = rows.end() - rows.start();
    let tol = 1e-12 * len.max(1.0);
    if (rows.start() - cols.start()).abs() > tol || (rows.end() - cols.end()).abs() > tol {
        return Err(CoreError::SegmentMismatch {
            a0: rows.start(),
            a1: rows.end(),
            b0: cols.start(),
            b1: cols.end(),
        });
    }
    let merged = merge_breakpoints(rows.breakpoints(), cols.breakpoints(), tol);
    let npts = (rows.degree() + cols.degree()) / 2 + 1;
    let (gx, gw) = crate::quadrature::gauss_legendre(npts);
    let mut m = DMatrix::zeros(rows.dim(), cols.dim());
    for w in merged.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let rseg = rows.segment_of(mid);
        let cseg = cols.segment_of(mid);
        let rdofs = rows.segment_dofs(rseg);
        let cdofs = cols.segment_dofs(cseg);
        let (ra, rb) = (rows.breakpoints[rseg], rows.breakpoints[rseg + 1]);
        let (ca, cb) = (cols.breakpoints[cseg], cols.breakpoints[cseg + 1]);
        for (x, wq) in gx.iter().zip(&gw) {
            let s = mid + half * x;
            let weight = wq * half;
            let rvals = rows.local_basis((s - ra) / (rb - ra));
            let cvals = cols.local_basis((s - ca) / (cb - ca));
            for (ri, rv) in rdofs.iter().zip(&rvals) {
                for (ci, cv) in cdofs.iter().zip(&cvals) {
                    m[(*ri, *ci)] += weight * rv * cv;
                }
            }
        }
    }
    Ok(m)
}

fn merge_breakpoints(a: &[f64], b: &[f64], tol: f64) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut out = Vec::with_capacity(all.len());
    for x in all {
        if out.last().is_none_or(|&last: &f64| x - last > tol) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_nodes() {
        let sp = Space1d::new(vec![0.0, 0.25, 0.5, 1.0], 2).unwrap();
        assert_eq!(sp.dim(), 7);
        let nodes = sp.node_params();
        assert_eq!(nodes.len(), 7);
        assert_eq!(nodes[0], 0.0);
        assert!((nodes[1] - 0.125).abs() < 1e-15);
        assert_eq!(*nodes.last().unwrap(), 1.0);
        let constants = Space1d::new(vec![0.0, 0.5, 1.0], 0).unwrap();
        assert_eq!(constants.dim(), 2);
    }

    #[test]
    fn identical_meshes_give_standard_mass_matrix() {
        let sp = Space1d::new(vec![0.0, 0.5, 1.0], 1).unwrap();
        let m = cross_mass(&sp, &sp).unwrap();
        // Standard P1 mass matrix with h = 1/2: diag h/3 doubled inside.
        let h = 0.5;
        assert!((m[(0, 0)] - h / 3.0).abs() < 1e-15);
        assert!((m[(1, 1)] - 2.0 * h / 3.0).abs() < 1e-15);
        assert!((m[(0, 1)] - h / 6.0).abs() < 1e-15);
        assert!((m[(2, 0)]).abs() < 1e-15);
        assert!((m.clone() - m.transpose()).norm() < 1e-15);
    }

    #[test]
    fn hat_against_constants_integrates_half() {
        // Interior hat on {0, 0.5, 1} tested against piecewise constants on
        // {0, 1/3, 2/3, 1}: the hat row sums to ∫ hat = 0.5.
        let hats = Space1d::new(vec![0.0, 0.5, 1.0], 1).unwrap();
        let consts = Space1d::new(vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], 0).unwrap();
        let m = cross_mass(&hats, &consts).unwrap();
        let row: f64 = (0..consts.dim()).map(|j| m[(1, j)]).sum();
        assert!((row - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cross_mass_matches_adaptive_quadrature_oracle() {
        // Random P2 coefficient pair on non-matching meshes, ∫ u v by
        // adaptive Simpson as an independent oracle.
        let a = Space1d::new(vec![0.0, 0.3, 0.55, 1.0], 2).unwrap();
        let b = Space1d::new(vec![0.0, 0.2, 0.4, 0.7, 1.0], 2).unwrap();
        let m = cross_mass(&a, &b).unwrap();
        let ua: Vec<f64> = (0..a.dim())
            .map(|i| ((i * 7 + 3) % 11) as f64 - 5.0)
            .collect();
        let ub: Vec<f64> = (0..b.dim())
            .map(|i| ((i * 5 + 1) % 13) as f64 - 6.0)
            .collect();
        let bilinear: f64 = (0..a.dim())
            .map(|i| (0..b.dim()).map(|j| ua[i] * m[(i, j)] * ub[j]).sum::<f64>())
            .sum();
        let f = |s: f64| a.eval(&ua, s) * b.eval(&ub, s);
        let oracle = adaptive_simpson(&f, 0.0, 1.0, 1e-13, 30);
        assert!(
            (bilinear - oracle).abs() < 1e-12 * (1.0 + oracle.abs()),
            "{bilinear} vs {oracle}"
        );
    }

    #[test]
    fn mismatched_segments_rejected() {
        let a = Space1d::new(vec![0.0, 1.0], 1).unwrap();
        let b = Space1d::new(vec![0.0, 0.9], 1).unwrap();
        assert!(matches!(
            cross_mass(&a, &b),
            Err(CoreError::SegmentMismatch { .. })
        ));
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        for p in 1..=3usize {
            let sp = Space1d::new(vec![0.0, 0.4, 1.0], p).unwrap();
            let f = |s: f64| (0..=p).map(|k| s.powi(k as i32)).sum::<f64>();
            let coeffs = sp.interpolate(f);
            for s in [0.0, 0.13, 0.4, 0.77, 1.0] {
                assert!((sp.eval(&coeffs, s) - f(s)).abs() < 1e-13);
            }
        }
    }

    pub(crate) fn adaptive_simpson(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        let whole = simpson(f, a, b);
        let mid = 0.5 * (a + b);
        let halves = simpson(f, a, mid) + simpson(f, mid, b);
        if depth == 0 || (whole - halves).abs() < 15.0 * tol {
            halves + (halves - whole) / 15.0
        } else {
            adaptive_simpson(f, a, mid, tol / 2.0, depth - 1)
                + adaptive_simpson(f, mid, b, tol / 2.0, depth - 1)
        }
    }
}
