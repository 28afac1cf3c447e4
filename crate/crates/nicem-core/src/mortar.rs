//! Mortar multiplier spaces on interface sides and the L² projection π.
//!
//! On a chain with segments `s_0 < ... < s_N` and trace degree `p`, the
//! mortar space W̃ consists of the continuous piecewise-P_p functions whose
//! degree drops to `p - 1` on the first and the last segment; its dimension
//! is `N·p - 1` for `N >= 2`. It is realized inside the trace space by a
//! local change of basis: the two endpoint nodal values are slaved to the
//! remaining nodes of their segment through the vanishing of the leading
//! divided difference, so every matrix over W̃ is a contraction of a trace
//! matrix with the embedding.
//!
//! A single-segment side (`N = 1`) falls outside that construction; here W̃
//! is taken to be the full polynomial space of degree `p - 1` on the segment
//! (dimension `p`), which keeps `dim W̃ < dim trace`.

use crate::error::{CoreError, Result};
use crate::space1d::{cross_mass, Space1d};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// The mortar space of one interface side, embedded in its trace space.
#[derive(Debug, Clone)]
pub struct MortarSpace {
    trace: Space1d,
    /// Trace-node indices acting as mortar degrees of freedom.
    free_nodes: Vec<usize>,
    /// Expansion of the first trace node value on the mortar dofs.
    first_weights: Vec<(usize, f64)>,
    /// Expansion of the last trace node value on the mortar dofs;
    /// `None` when that node is itself free (single-segment convention).
    last_weights: Option<Vec<(usize, f64)>>,
}

impl MortarSpace {
    /// Build W̃ over the given trace space (degree >= 1).
    pub fn new(trace: Space1d) -> Result<Self> {
        let p = trace.degree();
        if p < 1 {
            return Err(CoreError::UnsupportedDegree(0));
        }
        let n = trace.segments();
        let t_dim = trace.dim();
        // Binomial slaving weights: for equispaced nodes t_0..t_p a degree
        // <= p-1 polynomial satisfies f(t_0) = Σ_{j>=1} (-1)^{j+1} C(p,j) f(t_j).
        let binom = |j: usize| -> f64 {
            let mut c = 1.0;
            for i in 0..j {
                c = c * (p - i) as f64 / (i + 1) as f64;
            }
            if j % 2 == 1 {
                c
            } else {
                -c
            }
        };
        if n == 1 {
            // Single segment: drop the left endpoint only.
            let free_nodes: Vec<usize> = (1..t_dim).collect();
            let first_weights = (1..=p).map(|j| (j - 1, binom(j))).collect();
            return Ok(Self {
                trace,
                free_nodes,
                first_weights,
                last_weights: None,
            });
        }
        let free_nodes: Vec<usize> = (1..t_dim - 1).collect();
        // Mortar dof m corresponds to trace node m + 1.
        let first_weights: Vec<(usize, f64)> = (1..=p).map(|j| (j - 1, binom(j))).collect();
        let last_weights: Vec<(usize, f64)> =
            (1..=p).map(|j| (free_nodes.len() - j, binom(j))).collect();
        Ok(Self {
            trace,
            free_nodes,
            first_weights,
            last_weights: Some(last_weights),
        })
    }

    pub fn trace(&self) -> &Space1d {
        &self.trace
    }

    pub fn dim(&self) -> usize {
        self.free_nodes.len()
    }

    /// Trace coefficients of a mortar element (the embedding E).
    pub fn embed(&self, mortar: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.trace.dim());
        for (m, &node) in self.free_nodes.iter().enumerate() {
            out[node] = mortar[m];
        }
        out[0] = self.first_weights.iter().map(|&(m, w)| w * mortar[m]).sum();
        if let Some(weights) = &self.last_weights {
            let last = self.trace.dim() - 1;
            out[last] = weights.iter().map(|&(m, w)| w * mortar[m]).sum();
        }
        out
    }

    /// Dense embedding matrix, trace_dim × mortar_dim.
    pub fn embedding_matrix(&self) -> DMatrix<f64> {
        let mut e = DMatrix::zeros(self.trace.dim(), self.dim());
        for (m, &node) in self.free_nodes.iter().enumerate() {
            e[(node, m)] = 1.0;
        }
        for &(m, w) in &self.first_weights {
            e[(0, m)] += w;
        }
        if let Some(weights) = &self.last_weights {
            let last = self.trace.dim() - 1;
            for &(m, w) in weights {
                e[(last, m)] += w;
            }
        }
        e
    }

    /// Evaluate a mortar element at arclength `s`.
    pub fn eval(&self, mortar: &DVector<f64>, s: f64) -> f64 {
        let trace_coeffs = self.embed(mortar);
        self.trace.eval(trace_coeffs.as_slice(), s)
    }

    /// Mortar coefficients of the constant function 1 (all ones).
    pub fn ones(&self) -> DVector<f64> {
        DVector::from_element(self.dim(), 1.0)
    }
}

/// Assembled coupling of one ordered interface side `(k, l)` to its
/// neighbour side `(l, k)`: the mortar mass `M_W` (factorized once) and the
/// moment matrices against the own trace, the neighbour trace and the
/// neighbour mortar basis.
#[derive(Debug, Clone)]
pub struct CouplingMatrices {
    pub m_w: DMatrix<f64>,
    pub m_chol: Cholesky<f64, Dyn>,
    /// `∫ ψ_i φ_j` — own mortar × own trace.
    pub b_own: DMatrix<f64>,
    /// `∫ ψ_i φ^nbr_j` — own mortar × neighbour trace.
    pub b_nbr_trace: DMatrix<f64>,
    /// `∫ ψ_i ψ^nbr_j` — own mortar × neighbour mortar.
    pub b_nbr_mortar: DMatrix<f64>,
}

impl CouplingMatrices {
    pub fn new(own: &MortarSpace, nbr: &MortarSpace) -> Result<Self> {
        let e_own = own.embedding_matrix();
        let m_own = cross_mass(own.trace(), own.trace())?;
        let cross = cross_mass(own.trace(), nbr.trace())?;
        let e_nbr = nbr.embedding_matrix();
        let m_w = e_own.transpose() * &m_own * &e_own;
        let m_w = 0.5 * (&m_w + m_w.transpose());
        let m_chol = Cholesky::new(m_w.clone())
            .ok_or_else(|| CoreError::Factorization("mortar mass matrix not SPD".into()))?;
        let b_own = e_own.transpose() * &m_own;
        let b_nbr_trace = e_own.transpose() * &cross;
        let b_nbr_mortar = &b_nbr_trace * &e_nbr;
        Ok(Self {
            m_w,
            m_chol,
            b_own,
            b_nbr_trace,
            b_nbr_mortar,
        })
    }

    /// L² norm squared of a mortar element given by coefficients.
    pub fn norm_sq(&self, mortar: &DVector<f64>) -> f64 {
        (mortar.transpose() * &self.m_w * mortar)[(0, 0)]
    }

    /// π applied to an own-trace coefficient vector.
    pub fn project_own_trace(&self, v: &DVector<f64>) -> DVector<f64> {
        self.m_chol.solve(&(&self.b_own * v))
    }

    /// π applied to a neighbour-trace coefficient vector.
    pub fn project_nbr_trace(&self, v: &DVector<f64>) -> DVector<f64> {
        self.m_chol.solve(&(&self.b_nbr_trace * v))
    }

    /// π applied to a neighbour-mortar coefficient vector.
    pub fn project_nbr_mortar(&self, v: &DVector<f64>) -> DVector<f64> {
        self.m_chol.solve(&(&self.b_nbr_mortar * v))
    }

    /// Mortar coefficients from a moment vector `(∫ g ψ_i)_i`.
    pub fn from_moments(&self, moments: &DVector<f64>) -> DVector<f64> {
        self.m_chol.solve(moments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_on_interval;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_space(n: usize, p: usize) -> Space1d {
        let pts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        Space1d::new(pts, p).unwrap()
    }

    #[test]
    fn mortar_dimensions() {
        // N·p - 1 for N >= 2; p for the single-segment convention.
        for (n, p, dim) in [(4, 1, 3), (2, 2, 3), (5, 3, 14), (1, 2, 2), (1, 1, 1)] {
            let m = MortarSpace::new(uniform_space(n, p)).unwrap();
            assert_eq!(m.dim(), dim, "N={n} p={p}");
            assert!(m.dim() < m.trace().dim());
        }
    }

    #[test]
    fn constants_lie_in_the_mortar_space() {
        for (n, p) in [(4, 1), (3, 2), (2, 3), (1, 2)] {
            let m = MortarSpace::new(uniform_space(n, p)).unwrap();
            let trace = m.embed(&m.ones());
            for v in trace.iter() {
                assert!((v - 1.0).abs() < 1e-13, "N={n} p={p}: embedding {v}");
            }
        }
    }

    #[test]
    fn end_segments_have_reduced_degree() {
        // Sample a random mortar element on the first segment and check its
        // p-th derivative vanishes there (degree <= p-1), while a generic
        // trace element does not.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2usize, 3] {
            let ms = MortarSpace::new(uniform_space(4, p)).unwrap();
            let coeffs =
                DVector::from_iterator(ms.dim(), (0..ms.dim()).map(|_| rng.gen_range(-1.0..1.0)));
            // Finite-difference estimate of the p-th derivative on [0, 1/4].
            let h = 0.25 / p as f64;
            let fd: f64 = (0..=p)
                .map(|j| {
                    let sign = if (p - j) % 2 == 0 { 1.0 } else { -1.0 };
                    let c = (0..j).fold(1.0, |acc, i| acc * (p - i) as f64 / (i + 1) as f64);
                    sign * c * ms.eval(&coeffs, j as f64 * h)
                })
                .sum();
            assert!(fd.abs() < 1e-10, "p={p}: leading difference {fd}");
        }
    }

    #[test]
    fn projection_is_identity_on_mortar_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, p) in [(4usize, 1usize), (3, 2), (5, 3)] {
            let own = MortarSpace::new(uniform_space(n, p)).unwrap();
            let nbr = MortarSpace::new(uniform_space(n + 1, p)).unwrap();
            let c = CouplingMatrices::new(&own, &nbr).unwrap();
            for _ in 0..20 {
                let w = DVector::from_iterator(
                    own.dim(),
                    (0..own.dim()).map(|_| rng.gen_range(-1.0..1.0)),
                );
                let trace = own.embed(&w);
                let proj = c.project_own_trace(&trace);
                assert!((&proj - &w).amax() < 1e-12, "π not idempotent on W̃");
            }
        }
    }

    #[test]
    fn projection_preserves_constants() {
        let own = MortarSpace::new(uniform_space(5, 2)).unwrap();
        let nbr = MortarSpace::new(uniform_space(3, 2)).unwrap();
        let c = CouplingMatrices::new(&own, &nbr).unwrap();
        let ones_trace = DVector::from_element(own.trace().dim(), 1.0);
        let proj = c.project_own_trace(&ones_trace);
        assert!((&proj - own.ones()).amax() < 1e-13);
        // Constant from the neighbour side projects to 1 as well.
        let ones_nbr = DVector::from_element(nbr.trace().dim(), 1.0);
        let proj2 = c.project_nbr_trace(&ones_nbr);
        assert!((&proj2 - own.ones()).amax() < 1e-13);
    }

    #[test]
    fn row_sum_identity_for_constants() {
        // B_own · 1_trace = M_W · 1_mortar: both integrate 1 · ψ_i.
        let own = MortarSpace::new(uniform_space(4, 3)).unwrap();
        let nbr = MortarSpace::new(uniform_space(7, 3)).unwrap();
        let c = CouplingMatrices::new(&own, &nbr).unwrap();
        let lhs = &c.b_own * DVector::from_element(own.trace().dim(), 1.0);
        let rhs = &c.m_w * own.ones();
        assert!((lhs - rhs).amax() < 1e-13);
    }

    #[test]
    fn orthogonality_residual_via_independent_quadrature() {
        // v = own-trace interpolant of sin(πs) on N = 8, p = 2: the defining
        // relation ∫ (π(v) - v) ψ_j = 0 re-checked by pointwise quadrature.
        let own = MortarSpace::new(uniform_space(8, 2)).unwrap();
        let nbr = MortarSpace::new(uniform_space(5, 2)).unwrap();
        let c = CouplingMatrices::new(&own, &nbr).unwrap();
        let v = own
            .trace()
            .interpolate(|s| (std::f64::consts::PI * s).sin());
        let v = DVector::from_vec(v);
        let proj = c.project_own_trace(&v);
        // Piecewise-exact rule: Gauss per segment (the integrand is a
        // polynomial of degree 2p there).
        let breaks = own.trace().breakpoints().to_vec();
        let mut worst: f64 = 0.0;
        for j in 0..own.dim() {
            let mut basis = DVector::zeros(own.dim());
            basis[j] = 1.0;
            let mut integral = 0.0;
            for w in breaks.windows(2) {
                let (xs, ws) = gauss_on_interval(4, w[0], w[1]);
                integral += xs
                    .iter()
                    .zip(&ws)
                    .map(|(&s, &wq)| {
                        let diff = own.eval(&proj, s) - own.trace().eval(v.as_slice(), s);
                        wq * diff * own.eval(&basis, s)
                    })
                    .sum::<f64>();
            }
            worst = worst.max(integral.abs());
        }
        assert!(worst < 1e-11, "orthogonality residual {worst}");
    }

    #[test]
    fn projection_contracts_and_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let own = MortarSpace::new(uniform_space(6, 2)).unwrap();
        let nbr = MortarSpace::new(uniform_space(4, 2)).unwrap();
        let c = CouplingMatrices::new(&own, &nbr).unwrap();
        let m_own = cross_mass(own.trace(), own.trace()).unwrap();
        for _ in 0..50 {
            let t_dim = own.trace().dim();
            let u = DVector::from_iterator(t_dim, (0..t_dim).map(|_| rng.gen_range(-1.0..1.0)));
            let v = DVector::from_iterator(t_dim, (0..t_dim).map(|_| rng.gen_range(-1.0..1.0)));
            // Contraction: ‖π(v)‖ <= ‖v‖.
            let pv = c.project_own_trace(&v);
            let norm_pv = c.norm_sq(&pv);
            let norm_v = (v.transpose() * &m_own * &v)[(0, 0)];
            assert!(norm_pv <= norm_v * (1.0 + 1e-12));
            // Symmetry: ∫ π(u) v = ∫ u π(v).
            let pu = c.project_own_trace(&u);
            let lhs = (own.embed(&pu).transpose() * &m_own * &v)[(0, 0)];
            let rhs = (u.transpose() * &m_own * own.embed(&pv))[(0, 0)];
            assert!(
                (lhs - rhs).abs() < 1e-11 * (1.0 + lhs.abs()),
                "symmetry identity: {lhs} vs {rhs}"
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn mortar_dim_formula(n in 2usize..9, p in 1usize..4) {
                let m = MortarSpace::new(uniform_space(n, p)).unwrap();
                prop_assert_eq!(m.dim(), n * p - 1);
                prop_assert!(m.dim() < n * p + 1);
            }

            #[test]
            fn embedded_elements_are_continuous(
                n in 2usize..7, p in 1usize..4, seed in 0u64..1000,
            ) {
                let ms = MortarSpace::new(uniform_space(n, p)).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let w = DVector::from_iterator(
                    ms.dim(), (0..ms.dim()).map(|_| rng.gen_range(-1.0..1.0)));
                // Continuity at breakpoints: left and right limits agree.
                for i in 1..n {
                    let s = i as f64 / n as f64;
                    let left = ms.eval(&w, s - 1e-9);
                    let right = ms.eval(&w, s + 1e-9);
                    prop_assert!((left - right).abs() < 1e-6);
                }
            }
        }
    }
}
