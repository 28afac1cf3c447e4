//! Core algorithms for a non-overlapping Schwarz domain-decomposition solver
//! of the reaction-diffusion problem `(Id - Δ)u = f` on 2D triangulated
//! domains. Subdomains carry independently generated (non-matching) meshes;
//! Robin data `-p + αu` is exchanged across each interface through an L²
//! projection onto a mortar multiplier space.
//!
//! Module map:
//! - [`mesh`]: structured rectangle partitions, refinement, mesh I/O.
//! - [`fem`]: Lagrange P1/P2/P3 spaces, assembly, H¹ error evaluation.
//! - [`space1d`] / [`mortar`]: 1D interface trace spaces, mortar space W̃,
//!   cross-mesh mass matrices and the projection π.
//! - [`schwarz`] / [`gmres`]: the Robin iteration, its diagnostics, and the
//!   Krylov-accelerated interface solve.
//! - [`legendre`]: Legendre-polynomial machinery certifying the quadratic
//!   form that underpins the end-segment stability construction.

pub mod error;
pub mod fem;
pub mod gmres;
pub mod legendre;
pub mod mesh;
pub mod mortar;
pub mod quadrature;
pub mod schwarz;
pub mod space1d;
pub mod sparse;

pub use error::CoreError;
pub use fem::FeSpace;
pub use mesh::{DecomposedMesh, Rect, SubdomainMesh};
pub use mortar::{CouplingMatrices, MortarSpace};
pub use schwarz::{IterationHistory, SchwarzProblem, SchwarzState};
