//! Legendre-polynomial machinery for the interface stability analysis.
//!
//! The central objects live on `[-1, 1]`:
//! - `Q^p`, polynomials of degree `<= p` vanishing at `-1`, represented in
//!   the basis `b_m = L_m + L_{m-1}` by coefficients `(η_1, ..., η_p)`;
//! - the constrained maximizer `S(η)` of
//!   `J(ψ; η) = ∫ (ηψ - ¼(η - ψ)²)` over `ψ ∈ P_{p-1}` with `ψ(1) = η(1)`;
//! - the discriminant `Δ(η) = (2η(1) - 3η_p)² + p²(-4‖η‖² + 9η_p²/(2p+1))`,
//!   whose negativity on `Q^p \ {0}` for `p <= 13` is what the certification
//!   commands check, both through its spectrum and through closed forms.
//!
//! Generic float computations are here; number-exact variants of the
//! matrices and closed-form values are in [`rational`].

pub mod rational;

mod lem1;
pub use lem1::{build_lem1_function, Lem1Outcome};

use crate::error::{CoreError, Result};
use nalgebra::{DMatrix, DVector};

/// `L_m(x)` by the three-term recurrence
/// `(m+1) L_{m+1}(x) = (2m+1) x L_m(x) - m L_{m-1}(x)`.
pub fn eval(m: usize, x: f64) -> f64 {
    eval_with_prime(m, x).0
}

/// `L'_m(x)` via `L'_{m+1} = L'_{m-1} + (2m+1) L_m`.
pub fn eval_prime(m: usize, x: f64) -> f64 {
    eval_with_prime(m, x).1
}

/// `(L_m(x), L'_m(x))` in one pass of the recurrences.
pub fn eval_with_prime(m: usize, x: f64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let (mut lp, mut l) = (1.0, x); // L_{k-1}, L_k
    let (mut dp, mut d) = (0.0, 1.0); // L'_{k-1}, L'_k
    for k in 1..m {
        let kf = k as f64;
        let ln = ((2.0 * kf + 1.0) * x * l - kf * lp) / (kf + 1.0);
        let dn = dp + (2.0 * kf + 1.0) * l;
        lp = l;
        l = ln;
        dp = d;
        d = dn;
    }
    (l, d)
}

/// `∫ L_m² = 2 / (2m + 1)`.
pub fn norm_sq(m: usize) -> f64 {
    2.0 / (2.0 * m as f64 + 1.0)
}

/// A polynomial of `Q^p` (degree `<= p`, vanishing at `-1`) stored as
/// coefficients `(η_1, ..., η_p)` in the basis `b_m = L_m + L_{m-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaCoeffs {
    degree: usize,
    coeffs: Vec<f64>,
}

impl EtaCoeffs {
    /// Wrap coefficients `(η_1, ..., η_p)`; `coeffs.len()` fixes `p`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(CoreError::DegreeOutOfRange(0));
        }
        Ok(Self {
            degree: coeffs.len(),
            coeffs,
        })
    }

    /// Rebuild from Legendre coefficients `c_0..c_p` of a polynomial that
    /// vanishes at `-1`. Back-substitutes from the top; the value at `-1`
    /// is forced to zero, so an inconsistent `c_0` is overridden.
    pub fn from_legendre(c: &[f64]) -> Result<Self> {
        if c.len() < 2 {
            return Err(CoreError::DegreeOutOfRange(c.len()));
        }
        let p = c.len() - 1;
        let mut eta = vec![0.0; p];
        eta[p - 1] = c[p];
        for m in (1..p).rev() {
            eta[m - 1] = c[m] - eta[m];
        }
        Ok(Self {
            degree: p,
            coeffs: eta,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `(η_1, ..., η_p)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Legendre coefficients `c_0..c_p`: `c_0 = η_1`, `c_m = η_m + η_{m+1}`,
    /// `c_p = η_p`.
    pub fn to_legendre(&self) -> Vec<f64> {
        let p = self.degree;
        let mut c = vec![0.0; p + 1];
        c[0] = self.coeffs[0];
        for m in 1..p {
            c[m] = self.coeffs[m - 1] + self.coeffs[m];
        }
        c[p] = self.coeffs[p - 1];
        c
    }

    /// `η(1) = 2 Σ η_m` since every `b_m(1) = 2`.
    pub fn value_at_one(&self) -> f64 {
        2.0 * self.coeffs.iter().sum::<f64>()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.to_legendre()
            .iter()
            .enumerate()
            .map(|(m, c)| c * eval(m, x))
            .sum()
    }

    /// `‖η‖²_{L²(-1,1)}` from Legendre orthogonality.
    pub fn norm_l2_sq(&self) -> f64 {
        self.to_legendre()
            .iter()
            .enumerate()
            .map(|(m, c)| c * c * norm_sq(m))
            .sum()
    }
}

/// Result of the constrained maximization defining `S`.
#[derive(Debug, Clone)]
pub struct SOperator {
    /// Legendre coefficients `ψ_0..ψ_{p-1}` of `ψ = S(η)`.
    pub psi: Vec<f64>,
    /// Optimal Lagrange multiplier `μ* = (2η(1) - 3η_p) / p²`.
    pub mu: f64,
}

/// The maximizer `ψ = S(η) = 3η - 3η_p L_p - μ* R_{p-1}` with
/// `R_{p-1} = Σ_{m<p} (2m+1) L_m`; satisfies `ψ(1) = η(1)` exactly.
pub fn s_operator(eta: &EtaCoeffs) -> Result<SOperator> {
    if eta.coeffs.iter().all(|&c| c == 0.0) {
        return Err(CoreError::ZeroPolynomial);
    }
    let p = eta.degree;
    let c = eta.to_legendre();
    let eta_p = eta.coeffs[p - 1];
    let mu = (2.0 * eta.value_at_one() - 3.0 * eta_p) / (p as f64 * p as f64);
    let psi = (0..p)
        .map(|m| 3.0 * c[m] - mu * (2 * m + 1) as f64)
        .collect();
    Ok(SOperator { psi, mu })
}

/// `J(ψ; η) = ∫ (ηψ - ¼(η - ψ)²)` computed from Legendre coefficients;
/// `psi` holds `ψ_0..ψ_{p-1}` (any shorter/longer slice is zero-padded).
pub fn j_functional(eta: &EtaCoeffs, psi: &[f64]) -> f64 {
    let c = eta.to_legendre();
    let n = c.len().max(psi.len());
    (0..n)
        .map(|m| {
            let cm = c.get(m).copied().unwrap_or(0.0);
            let pm = psi.get(m).copied().unwrap_or(0.0);
            (cm * pm - 0.25 * (cm - pm) * (cm - pm)) * norm_sq(m)
        })
        .sum()
}

/// `Δ(η) = (2η(1) - 3η_p)² + p² (-4‖η‖² + 9η_p²/(2p+1))`.
pub fn delta_of_eta(eta: &EtaCoeffs) -> f64 {
    let p = eta.degree as f64;
    let eta_p = eta.coeffs[eta.degree - 1];
    let lin = 2.0 * eta.value_at_one() - 3.0 * eta_p;
    lin * lin + p * p * (-4.0 * eta.norm_l2_sq() + 9.0 * eta_p * eta_p / (2.0 * p + 1.0))
}

/// Spectral certificate of the sign of `Δ` over `Q^p`.
#[derive(Debug, Clone)]
pub struct DeltaSpectrum {
    /// Matrix `D` of the quadratic form: `Δ(η) = ηᵀ D η` in the `b_m` basis.
    pub form: DMatrix<f64>,
    /// Gram matrix `G` of the `b_m` basis (tridiagonal).
    pub gram: DMatrix<f64>,
    /// Largest generalized eigenvalue of `D η = λ G η`; `Δ(η) <= λ_max ‖η‖²`
    /// with equality attained.
    pub lambda_max: f64,
    pub eigenvalues: Vec<f64>,
}

/// Assemble the `Δ` form and Gram matrices exactly, then solve the dense
/// generalized symmetric eigenproblem in floating point.
pub fn delta_form_spectrum(p: usize) -> Result<DeltaSpectrum> {
    if p == 0 || p > 30 {
        return Err(CoreError::DegreeOutOfRange(p));
    }
    let form_q = rational::delta_form_matrix(p);
    let gram_q = rational::gram_matrix(p);
    let to_f = |m: &Vec<Vec<num_rational::BigRational>>| {
        DMatrix::from_fn(p, p, |i, j| rational::to_f64(&m[i][j]))
    };
    let form = to_f(&form_q);
    let gram = to_f(&gram_q);
    // G = L Lᵀ, reduce to the standard symmetric problem L⁻¹ D L⁻ᵀ.
    let chol = nalgebra::Cholesky::new(gram.clone())
        .ok_or_else(|| CoreError::Factorization("Gram matrix not SPD".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| CoreError::Factorization("Gram Cholesky factor singular".into()))?;
    let reduced = &linv * &form * linv.transpose();
    let sym = nalgebra::SymmetricEigen::new(0.5 * (&reduced + reduced.transpose()));
    let mut eigenvalues: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lambda_max = *eigenvalues.last().unwrap();
    Ok(DeltaSpectrum {
        form,
        gram,
        lambda_max,
        eigenvalues,
    })
}

/// Legendre coefficients of the interpolating polynomial through equispaced
/// nodal values on `[-1, 1]` (degree = `values.len() - 1`).
pub fn legendre_coeffs_from_equispaced_values(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let nodes: Vec<f64> = (0..n)
        .map(|i| -1.0 + 2.0 * i as f64 / (n - 1).max(1) as f64)
        .collect();
    let vand = DMatrix::from_fn(n, n, |i, m| eval(m, nodes[i]));
    let rhs = DVector::from_column_slice(values);
    vand.lu()
        .solve(&rhs)
        .expect("Legendre Vandermonde is invertible for distinct nodes")
        .iter()
        .copied()
        .collect()
}
