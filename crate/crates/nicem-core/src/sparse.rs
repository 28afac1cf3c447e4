//! Symmetric sparse systems: triplet assembly, symmetric Dirichlet
//! elimination and a reusable LDLᵀ factorization.
//!
//! Subdomain operators are factorized once and solved against many right-hand
//! sides, so the eliminated matrix keeps its full dimension (unit diagonal on
//! constrained rows) and only the right-hand side changes per solve.

use crate::error::{CoreError, Result};
use nalgebra::DVector;
use sprs::{CsMat, TriMat};
use sprs_ldl::{Ldl, LdlNumeric};

/// Symmetric matrix under assembly, duplicate entries summed.
#[derive(Debug, Clone)]
pub struct SymTriplets {
    dim: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymTriplets {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        if val != 0.0 {
            self.rows.push(row);
            self.cols.push(col);
            self.vals.push(val);
        }
    }

    pub fn to_csr(&self) -> CsMat<f64> {
        let mut tri = TriMat::new((self.dim, self.dim));
        for ((&r, &c), &v) in self.rows.iter().zip(&self.cols).zip(&self.vals) {
            tri.add_triplet(r, c, v);
        }
        tri.to_csr()
    }

    /// Largest relative asymmetry |a_ij - a_ji| / max|a|.
    pub fn asymmetry(&self) -> f64 {
        let csr = self.to_csr();
        let max = csr
            .iter()
            .map(|(v, _)| v.abs())
            .fold(0.0, f64::max)
            .max(1e-300);
        let t = csr.transpose_view().to_csr();
        let diff = &csr - &t;
        diff.iter().map(|(v, _)| v.abs()).fold(0.0, f64::max) / max
    }
}

/// Matrix-vector product for a CSR matrix.
pub fn spmv(m: &CsMat<f64>, x: &DVector<f64>) -> DVector<f64> {
    let mut y = DVector::zeros(m.rows());
    for (row, vec) in m.outer_iterator().enumerate() {
        let mut acc = 0.0;
        for (col, v) in vec.iter() {
            acc += v * x[col];
        }
        y[row] = acc;
    }
    y
}

/// Energy `xᵀ M x`.
pub fn energy(m: &CsMat<f64>, x: &DVector<f64>) -> f64 {
    spmv(m, x).dot(x)
}

/// A factorized SPD operator with Dirichlet constraints eliminated
/// symmetrically. Constrained rows and columns are zeroed with a unit
/// diagonal; the column contribution moves to a constant right-hand-side
/// correction so a fresh load vector can be eliminated per solve.
pub struct EliminatedOperator {
    factor: LdlNumeric<f64, usize>,
    correction: DVector<f64>,
    constrained: Vec<(usize, f64)>,
    dim: usize,
}

impl EliminatedOperator {
    /// Eliminate `constraints` (dof, value) from the symmetric `triplets`
    /// and factorize the result.
    pub fn new(triplets: &SymTriplets, constraints: &[(usize, f64)]) -> Result<Self> {
        let dim = triplets.dim;
        let mut is_constrained = vec![false; dim];
        let mut value = vec![0.0; dim];
        for &(dof, v) in constraints {
            is_constrained[dof] = true;
            value[dof] = v;
        }
        let mut reduced = TriMat::new((dim, dim));
        let mut correction = DVector::zeros(dim);
        for ((&r, &c), &v) in triplets.rows.iter().zip(&triplets.cols).zip(&triplets.vals) {
            match (is_constrained[r], is_constrained[c]) {
                (false, false) => reduced.add_triplet(r, c, v),
                (false, true) => correction[r] += v * value[c],
                _ => {}
            }
        }
        for &(dof, _) in constraints {
            reduced.add_triplet(dof, dof, 1.0);
        }
        let csr: CsMat<f64> = reduced.to_csr();
        let factor = Ldl::new()
            .check_symmetry(sprs::SymmetryCheck::DontCheckSymmetry)
            .fill_in_reduction(sprs::FillInReduction::ReverseCuthillMcKee)
            .numeric(csr.view())
            .map_err(|e| CoreError::Factorization(format!("{e:?}")))?;
        Ok(Self {
            factor,
            correction,
            constrained: constraints.to_vec(),
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solve against a raw load vector (constraint corrections applied here).
    pub fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let mut r = rhs - &self.correction;
        for &(dof, v) in &self.constrained {
            r[dof] = v;
        }
        let x = self.factor.solve(r.as_slice());
        DVector::from_vec(x)
    }

    /// Solve with the constraint values replaced by zero (same matrix).
    pub fn solve_homogeneous(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let mut r = rhs.clone();
        for &(dof, _) in &self.constrained {
            r[dof] = 0.0;
        }
        let x = self.factor.solve(r.as_slice());
        DVector::from_vec(x)
    }

    pub fn constraint_values_zero(&self) -> bool {
        self.constrained.iter().all(|&(_, v)| v == 0.0)
    }
}
