//! The Robin-coupled Schwarz iteration over a decomposed mesh.
//!
//! Per step, every subdomain `k` solves (Jacobi ordering, neighbour data
//! frozen at the previous step)
//!
//! ```text
//! ∫ (∇u_k·∇v + u_k v) + α ∫ π(u_k) π(v) = ∫ f v + ∫ π(-p_l + α u_l) v
//! ```
//!
//! and then recovers its multipliers `p_k = π(-p_l + α u_l) - α π(u_k)`,
//! which keeps the discrete interface condition satisfied exactly at every
//! iterate. The residual is the mortar-projected jump of `p + αu` across the
//! interfaces; energies `E^n` (sum of subdomain H¹ energies) and `B^n` (the
//! weighted interface term) track the convergence mechanism.

use crate::error::{CoreError, Result};
use crate::fem::{assemble_load, assemble_reaction_diffusion, dirichlet_values, FeSpace};
use crate::mesh::{DecomposedMesh, StepStats};
use crate::mortar::{CouplingMatrices, MortarSpace};
use crate::sparse::{energy, EliminatedOperator};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sprs::CsMat;
use std::time::Instant;

/// Robin parameter minimizing the two-subdomain convergence factor,
/// evaluated at the effective step `h / p`:
/// `[((π/L)² + 1)((π/(h/p))² + 1)]^{1/4}`.
pub fn alpha_opt(length: f64, h: f64, degree: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let hp = h / degree as f64;
    (((pi / length).powi(2) + 1.0) * ((pi / hp).powi(2) + 1.0)).powf(0.25)
}

/// Which interface step statistic feeds `alpha_opt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaStat {
    Min,
    Mean,
    Max,
}

/// Per-interface `alpha_opt(L, h_stat / p)` values; the statistic is taken
/// over both sides of each interface.
pub fn alpha_values(mesh: &DecomposedMesh, degree: usize, stat: AlphaStat) -> Result<Vec<f64>> {
    mesh.interfaces
        .iter()
        .map(|itf| {
            let steps: StepStats = mesh.interface_steps_both(itf.id)?;
            let h = match stat {
                AlphaStat::Min => steps.h_min,
                AlphaStat::Mean => steps.h_mean,
                AlphaStat::Max => steps.h_max,
            };
            Ok(alpha_opt(itf.length(), h, degree))
        })
        .collect()
}

/// One ordered interface side `(owner -> neighbour)` with its coupling.
pub struct SideCoupling {
    pub interface: usize,
    pub owner: usize,
    pub nbr: usize,
    /// Side index of the opposite orientation.
    pub reverse: usize,
    /// Position of this side in the owner's trace list.
    pub trace_pos: usize,
    /// Position of the reverse side in the neighbour's trace list.
    pub nbr_trace_pos: usize,
    pub alpha: f64,
    pub mortar: MortarSpace,
    pub coupling: CouplingMatrices,
}

/// A subdomain with its assembled and factorized Robin operator.
pub struct SubdomainSolver {
    pub space: FeSpace,
    /// Plain reaction-diffusion matrix (no Robin term, no constraints).
    pub a_full: CsMat<f64>,
    op: EliminatedOperator,
    pub load: DVector<f64>,
    pub side_ids: Vec<usize>,
}

/// The assembled coupled problem, ready for iteration.
pub struct SchwarzProblem {
    pub mesh: DecomposedMesh,
    pub degree: usize,
    pub subs: Vec<SubdomainSolver>,
    pub sides: Vec<SideCoupling>,
    pub h_max: f64,
}

/// Per-subdomain solution and per-side multiplier coefficients.
#[derive(Debug, Clone)]
pub struct SchwarzState {
    pub u: Vec<DVector<f64>>,
    pub p: Vec<DVector<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct IterRecord {
    pub iteration: usize,
    /// E^n: sum of subdomain H¹ energies of the iterate.
    pub energy: f64,
    /// B^n: (1/4α) Σ ‖p - α π(u)‖² over interface sides.
    pub interface_term: f64,
    /// Mortar-projected interface jump (absolute).
    pub residual: f64,
    /// Largest coefficient magnitude over all subdomains.
    pub sup_norm: f64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Default)]
pub struct IterationHistory {
    pub records: Vec<IterRecord>,
    pub converged: bool,
}

impl IterationHistory {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }
}

/// Stopping rule of the outer iteration.
#[derive(Debug, Clone, Copy)]
pub enum StopRule {
    /// Interface residual relative to the first iterate's residual.
    ResidualRelative(f64),
    /// Absolute interface residual.
    ResidualAbsolute(f64),
    /// `E^n <= factor · E^1` (e.g. 1e-12 reduces the H¹ error by 1e6).
    EnergyReduction(f64),
}

#[derive(Debug, Clone, Copy)]
pub enum InitialGuess {
    Zero,
    /// Multiplier coefficients drawn uniformly from [-1, 1] with a fixed
    /// seed; the solution part starts at zero.
    RandomMultipliers {
        seed: u64,
    },
}

pub fn build_problem(
    mesh: &DecomposedMesh,
    degree: usize,
    f: &dyn Fn(f64, f64) -> f64,
    g: &dyn Fn(f64, f64) -> f64,
    alphas: &[f64],
) -> Result<SchwarzProblem> {
    build_problem_with_orders(mesh, degree, f, g, alphas, None, None)
}

/// As [`build_problem`] with explicit quadrature degrees for the matrix and
/// the load (defaults `2p` and `2p + 4`).
pub fn build_problem_with_orders(
    mesh: &DecomposedMesh,
    degree: usize,
    f: &dyn Fn(f64, f64) -> f64,
    g: &dyn Fn(f64, f64) -> f64,
    alphas: &[f64],
    matrix_quad: Option<usize>,
    load_quad: Option<usize>,
) -> Result<SchwarzProblem> {
    assert_eq!(
        alphas.len(),
        mesh.interfaces.len(),
        "one Robin parameter per interface"
    );
    for &a in alphas {
        if a <= 0.0 {
            return Err(CoreError::NonPositiveAlpha(a));
        }
    }
    let h_max = mesh.h_max();
    if let Some(&worst) = alphas
        .iter()
        .filter(|&&a| a * h_max > 1.0)
        .max_by(|a, b| a.partial_cmp(b).unwrap())
    {
        eprintln!(
            "warning: alpha * h_max = {:.3} > 1; the contraction argument needs alpha*h small",
            worst * h_max
        );
    }

    let spaces: Vec<FeSpace> = mesh
        .subdomains
        .iter()
        .map(|sub| FeSpace::new(sub, degree, &mesh.interfaces))
        .collect::<Result<_>>()?;

    // Two ordered sides per interface: ids 2i (lower subdomain) and 2i+1.
    let mut sides = Vec::with_capacity(2 * mesh.interfaces.len());
    for itf in &mesh.interfaces {
        let (k, l) = itf.subdomains;
        for (ord, owner, nbr) in [(0usize, k, l), (1, l, k)] {
            let trace_pos = spaces[owner]
                .traces
                .iter()
                .position(|t| t.interface == itf.id)
                .expect("owner has a trace on its interface");
            let nbr_trace_pos = spaces[nbr]
                .traces
                .iter()
                .position(|t| t.interface == itf.id)
                .expect("neighbour has a trace on its interface");
            let own_trace = spaces[owner].traces[trace_pos].space(degree)?;
            let nbr_trace = spaces[nbr].traces[nbr_trace_pos].space(degree)?;
            let mortar = MortarSpace::new(own_trace)?;
            let nbr_mortar = MortarSpace::new(nbr_trace)?;
            let coupling = CouplingMatrices::new(&mortar, &nbr_mortar)?;
            sides.push(SideCoupling {
                interface: itf.id,
                owner,
                nbr,
                reverse: 2 * itf.id + (1 - ord),
                trace_pos,
                nbr_trace_pos,
                alpha: alphas[itf.id],
                mortar,
                coupling,
            });
        }
    }

    let mut subs = Vec::with_capacity(mesh.subdomains.len());
    for (k, space) in spaces.into_iter().enumerate() {
        let sub_mesh = &mesh.subdomains[k];
        let mut triplets = assemble_reaction_diffusion(&space, sub_mesh, matrix_quad);
        let a_full = triplets.to_csr();
        let side_ids: Vec<usize> = sides
            .iter()
            .enumerate()
            .filter(|(_, s)| s.owner == k)
            .map(|(i, _)| i)
            .collect();
        // Robin term α C with C = B_ownᵀ M_W⁻¹ B_own on the trace dofs.
        for &sid in &side_ids {
            let side = &sides[sid];
            let b = &side.coupling.b_own;
            let minv_b = side.coupling.m_chol.solve(b);
            let c = b.transpose() * minv_b;
            let c = 0.5 * (&c + c.transpose());
            let dofs = &space.traces[side.trace_pos].dofs;
            for i in 0..dofs.len() {
                for j in 0..dofs.len() {
                    triplets.push(dofs[i], dofs[j], side.alpha * c[(i, j)]);
                }
            }
        }
        let bc = dirichlet_values(&space, g);
        let op = EliminatedOperator::new(&triplets, &bc)?;
        let load = assemble_load(&space, sub_mesh, f, load_quad);
        subs.push(SubdomainSolver {
            space,
            a_full,
            op,
            load,
            side_ids,
        });
    }

    Ok(SchwarzProblem {
        mesh: mesh.clone(),
        degree,
        subs,
        sides,
        h_max,
    })
}

impl SchwarzProblem {
    pub fn initial_state(&self, init: InitialGuess) -> SchwarzState {
        let u = self
            .subs
            .iter()
            .map(|s| DVector::zeros(s.space.num_dofs()))
            .collect();
        let p = match init {
            InitialGuess::Zero => self
                .sides
                .iter()
                .map(|s| DVector::zeros(s.mortar.dim()))
                .collect(),
            InitialGuess::RandomMultipliers { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                self.sides
                    .iter()
                    .map(|s| {
                        DVector::from_iterator(
                            s.mortar.dim(),
                            (0..s.mortar.dim()).map(|_| rng.gen_range(-1.0..1.0)),
                        )
                    })
                    .collect()
            }
        };
        SchwarzState { u, p }
    }

    /// Incoming mortar data per side: `γ_s = π(-p_nbr + α u_nbr)`.
    pub fn gather(&self, state: &SchwarzState) -> Vec<DVector<f64>> {
        self.sides
            .iter()
            .map(|side| {
                let rev_p = &state.p[side.reverse];
                let nbr_trace = self.subs[side.nbr].space.traces[side.nbr_trace_pos]
                    .extract(&state.u[side.nbr]);
                let moments = -(&side.coupling.b_nbr_mortar * rev_p)
                    + side.alpha * (&side.coupling.b_nbr_trace * nbr_trace);
                side.coupling.from_moments(&moments)
            })
            .collect()
    }

    /// Solve every subdomain against the given incoming data; `forced`
    /// includes loads and Dirichlet data, otherwise the homogeneous problem.
    pub fn solve_subdomains(&self, gammas: &[DVector<f64>], forced: bool) -> Vec<DVector<f64>> {
        self.subs
            .par_iter()
            .map(|sub| {
                let mut rhs = if forced {
                    sub.load.clone()
                } else {
                    DVector::zeros(sub.space.num_dofs())
                };
                for &sid in &sub.side_ids {
                    let side = &self.sides[sid];
                    let lifted = side.coupling.b_own.transpose() * &gammas[sid];
                    for (pos, &dof) in self.subs[side.owner].space.traces[side.trace_pos]
                        .dofs
                        .iter()
                        .enumerate()
                    {
                        rhs[dof] += lifted[pos];
                    }
                }
                if forced {
                    sub.op.solve(&rhs)
                } else {
                    sub.op.solve_homogeneous(&rhs)
                }
            })
            .collect()
    }

    /// `p_s = γ_s - α π(u_owner)` per side.
    pub fn recover_multipliers(
        &self,
        gammas: &[DVector<f64>],
        u: &[DVector<f64>],
    ) -> Vec<DVector<f64>> {
        self.sides
            .iter()
            .enumerate()
            .map(|(sid, side)| {
                let trace =
                    self.subs[side.owner].space.traces[side.trace_pos].extract(&u[side.owner]);
                &gammas[sid] - side.alpha * side.coupling.project_own_trace(&trace)
            })
            .collect()
    }

    /// One Jacobi step; returns the new state and the incoming data it used.
    pub fn step(&self, state: &SchwarzState) -> (SchwarzState, Vec<DVector<f64>>) {
        let gammas = self.gather(state);
        let u = self.solve_subdomains(&gammas, true);
        let p = self.recover_multipliers(&gammas, &u);
        (SchwarzState { u, p }, gammas)
    }

    /// Interface residual of `state`, given the incoming data its solves
    /// used and the freshly gathered data of the state itself:
    /// the L² norm of the mortar-projected jump of `p + αu` vs `-p + αu`.
    pub fn jump_residual(&self, used: &[DVector<f64>], fresh: &[DVector<f64>]) -> f64 {
        self.sides
            .iter()
            .enumerate()
            .map(|(sid, side)| side.coupling.norm_sq(&(&used[sid] - &fresh[sid])))
            .sum::<f64>()
            .sqrt()
    }

    /// `(E, B)` of a state.
    pub fn diagnostics(&self, state: &SchwarzState) -> (f64, f64) {
        let e: f64 = self
            .subs
            .iter()
            .zip(&state.u)
            .map(|(sub, u)| energy(&sub.a_full, u))
            .sum();
        let b: f64 = self
            .sides
            .iter()
            .enumerate()
            .map(|(sid, side)| {
                let trace = self.subs[side.owner].space.traces[side.trace_pos]
                    .extract(&state.u[side.owner]);
                let q = &state.p[sid] - side.alpha * side.coupling.project_own_trace(&trace);
                side.coupling.norm_sq(&q) / (4.0 * side.alpha)
            })
            .sum();
        (e, b)
    }

    /// Residuals of the coupled discrete equations at a state: the subdomain
    /// equations tested on free dofs and the interface condition tested
    /// against every mortar function, both relative to the problem scale.
    pub fn fixed_point_residuals(&self, state: &SchwarzState) -> (f64, f64) {
        let mut pde_res: f64 = 0.0;
        for (k, sub) in self.subs.iter().enumerate() {
            let mut r = crate::sparse::spmv(&sub.a_full, &state.u[k]) - &sub.load;
            for &sid in &sub.side_ids {
                let side = &self.sides[sid];
                let lifted = side.coupling.b_own.transpose() * &state.p[sid];
                for (pos, &dof) in sub.space.traces[side.trace_pos].dofs.iter().enumerate() {
                    r[dof] -= lifted[pos];
                }
            }
            for &d in &sub.space.exterior_dofs {
                r[d] = 0.0;
            }
            let scale = crate::sparse::spmv(&sub.a_full, &state.u[k])
                .amax()
                .max(sub.load.amax())
                .max(1e-300);
            pde_res = pde_res.max(r.amax() / scale);
        }
        let mut itf_res: f64 = 0.0;
        for (sid, side) in self.sides.iter().enumerate() {
            let own_trace =
                self.subs[side.owner].space.traces[side.trace_pos].extract(&state.u[side.owner]);
            let nbr_trace =
                self.subs[side.nbr].space.traces[side.nbr_trace_pos].extract(&state.u[side.nbr]);
            let jump = &self.sides[sid].coupling.m_w * &state.p[sid]
                + side.alpha * (&side.coupling.b_own * &own_trace)
                + &side.coupling.b_nbr_mortar * &state.p[side.reverse]
                - side.alpha * (&side.coupling.b_nbr_trace * nbr_trace);
            let scale = (&self.sides[sid].coupling.m_w * &state.p[sid]).amax()
                + side.alpha * (&side.coupling.b_own * &own_trace).amax();
            itf_res = itf_res.max(jump.amax() / scale.max(1e-300));
        }
        (pde_res, itf_res)
    }

    /// True when loads and Dirichlet data all vanish (error-equation mode).
    fn is_homogeneous(&self) -> bool {
        self.subs
            .iter()
            .all(|s| s.load.amax() == 0.0 && s.op.constraint_values_zero())
    }
}

/// Run the Jacobi iteration until the stopping rule or `max_iter`.
pub fn run_schwarz(
    problem: &SchwarzProblem,
    init: InitialGuess,
    stop: StopRule,
    max_iter: usize,
    mut observer: Option<&mut dyn FnMut(&IterRecord)>,
) -> (SchwarzState, IterationHistory) {
    let started = Instant::now();
    let mut state = problem.initial_state(init);
    let mut history = IterationHistory::default();

    // A zero state is already the fixed point of the homogeneous problem.
    if matches!(init, InitialGuess::Zero) && problem.is_homogeneous() {
        history.converged = true;
        return (state, history);
    }

    let mut gammas = problem.gather(&state);
    let mut first_residual = None;
    let mut first_energy = None;
    for n in 1..=max_iter {
        let u = problem.solve_subdomains(&gammas, true);
        let p = problem.recover_multipliers(&gammas, &u);
        state = SchwarzState { u, p };
        let fresh = problem.gather(&state);
        let residual = problem.jump_residual(&gammas, &fresh);
        gammas = fresh;
        let (energy, interface_term) = problem.diagnostics(&state);
        let sup_norm = state.u.iter().map(|u| u.amax()).fold(0.0, f64::max);
        let record = IterRecord {
            iteration: n,
            energy,
            interface_term,
            residual,
            sup_norm,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        };
        let r1 = *first_residual.get_or_insert(residual);
        let e1 = *first_energy.get_or_insert(energy);
        if let Some(obs) = observer.as_deref_mut() {
            obs(&record);
        }
        history.records.push(record);
        let done = match stop {
            StopRule::ResidualRelative(tol) => r1 == 0.0 || residual <= tol * r1,
            StopRule::ResidualAbsolute(tol) => residual <= tol,
            StopRule::EnergyReduction(factor) => e1 == 0.0 || energy <= factor * e1,
        };
        if done {
            history.converged = true;
            break;
        }
    }
    (state, history)
}

/// Index of the first entry at or below `ratio` times the first entry:
/// the number of iterations needed beyond the baseline.
pub fn iterations_to_reduce(values: &[f64], ratio: f64) -> Option<usize> {
    let base = *values.first()?;
    values.iter().position(|&v| v <= ratio * base)
}

/// Dense matrix wrapper used by couplings (re-exported for tests).
pub type Dense = DMatrix<f64>;
