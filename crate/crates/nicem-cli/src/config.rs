//! Experiment configuration: a TOML file with strict schema validation,
//! overridable from the command line.

use anyhow::{bail, Context, Result};
use nicem_core::mesh::{build_rect_partition, DiagonalStyle, SubdomainSpec};
use nicem_core::schwarz::{alpha_values, AlphaStat};
use nicem_core::{DecomposedMesh, Rect};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    #[default]
    Schwarz,
    Gmres,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StopKind {
    /// Interface residual relative to the first iterate.
    #[default]
    ResidualRel,
    ResidualAbs,
    /// Stop when E^n falls below tol · E^1.
    EnergyReduction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaPolicyKind {
    Fixed,
    #[default]
    Min,
    Mean,
    Max,
    /// One value per interface from its own step statistics (α*).
    PerInterface,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AlphaConfig {
    #[serde(default)]
    pub policy: AlphaPolicyKind,
    /// Required for `policy = "fixed"`.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Single,
    #[default]
    Split2,
    Quad4,
    Grid4x3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalKind {
    #[default]
    Right,
    Left,
    Alternating,
}

impl From<DiagonalKind> for DiagonalStyle {
    fn from(d: DiagonalKind) -> Self {
        match d {
            DiagonalKind::Right => DiagonalStyle::Right,
            DiagonalKind::Left => DiagonalStyle::Left,
            DiagonalKind::Alternating => DiagonalStyle::Alternating,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default)]
    pub preset: Preset,
    /// `(nx, ny)` division counts, one pair per subdomain of the preset;
    /// empty selects the preset defaults.
    #[serde(default)]
    pub resolutions: Vec<[usize; 2]>,
    #[serde(default)]
    pub diagonal: DiagonalKind,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            preset: Preset::Split2,
            resolutions: Vec::new(),
            diagonal: DiagonalKind::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RefineConfig {
    /// For `converge-study`: number of levels (>= 3). For other commands:
    /// number of refinements applied before solving.
    pub levels: usize,
    pub factor: usize,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            levels: 0,
            factor: 2,
        }
    }
}

fn default_case() -> String {
    "caseA".into()
}

fn default_degree() -> usize {
    2
}

fn default_tol() -> f64 {
    1e-14
}

fn default_max_iter() -> usize {
    4000
}

fn default_seed() -> u64 {
    42
}

fn default_reduction() -> f64 {
    1e-6
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Manufactured case: caseA, caseB, poly1..poly3 or zero.
    #[serde(default = "default_case")]
    pub case: String,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default)]
    pub alpha: AlphaConfig,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub stop: StopKind,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Start from random multiplier coefficients (error-equation protocol).
    #[serde(default)]
    pub random_init: bool,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub refine: RefineConfig,
    /// Explicit Robin-parameter grid for sweeps; empty derives one from
    /// `sweep_multipliers` times the global alpha_min.
    #[serde(default)]
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub sweep_multipliers: Vec<f64>,
    /// H¹ reduction factor counted in sweeps (energy factor is its square).
    #[serde(default = "default_reduction")]
    pub reduction: f64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Optional quadrature degree override for loads and error evaluation.
    #[serde(default)]
    pub quad_order: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            case: "caseA".into(),
            degree: 2,
            solver: Solver::default(),
            alpha: AlphaConfig::default(),
            tol: default_tol(),
            stop: StopKind::default(),
            max_iter: default_max_iter(),
            seed: default_seed(),
            random_init: false,
            mesh: MeshConfig::default(),
            refine: RefineConfig::default(),
            alphas: Vec::new(),
            sweep_multipliers: Vec::new(),
            reduction: default_reduction(),
            output_dir: default_output(),
            quad_order: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = toml::from_str(&text).context("parsing config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.degree) {
            bail!("degree must be 1, 2 or 3, got {}", self.degree);
        }
        if self.tol <= 0.0 {
            bail!("tol must be positive");
        }
        if self.refine.factor != 2 && self.refine.factor != 3 {
            bail!("refine.factor must be 2 or 3");
        }
        if matches!(self.alpha.policy, AlphaPolicyKind::Fixed) && self.alpha.value.is_none() {
            bail!("alpha.policy = \"fixed\" requires alpha.value");
        }
        Ok(())
    }

    /// Build the initial mesh of the configured preset over `domain`.
    pub fn build_mesh(&self, domain: Rect) -> Result<DecomposedMesh> {
        let (rects, defaults): (Vec<Rect>, Vec<[usize; 2]>) = match self.mesh.preset {
            Preset::Single => (vec![domain], vec![[8, 8]]),
            Preset::Split2 => {
                let xm = 0.5 * (domain.xmin + domain.xmax);
                (
                    vec![
                        Rect::new(domain.xmin, domain.ymin, xm, domain.ymax),
                        Rect::new(xm, domain.ymin, domain.xmax, domain.ymax),
                    ],
                    vec![[8, 8], [11, 11]],
                )
            }
            Preset::Quad4 => {
                let xm = 0.5 * (domain.xmin + domain.xmax);
                let ym = 0.5 * (domain.ymin + domain.ymax);
                (
                    vec![
                        Rect::new(domain.xmin, domain.ymin, xm, ym),
                        Rect::new(xm, domain.ymin, domain.xmax, ym),
                        Rect::new(domain.xmin, ym, xm, domain.ymax),
                        Rect::new(xm, ym, domain.xmax, domain.ymax),
                    ],
                    vec![[4, 4], [6, 6], [5, 5], [7, 7]],
                )
            }
            Preset::Grid4x3 => {
                let mut rects = Vec::with_capacity(12);
                for row in 0..3 {
                    for col in 0..4 {
                        let x0 = domain.xmin + domain.width() * col as f64 / 4.0;
                        let x1 = domain.xmin + domain.width() * (col + 1) as f64 / 4.0;
                        let y0 = domain.ymin + domain.height() * row as f64 / 3.0;
                        let y1 = domain.ymin + domain.height() * (row + 1) as f64 / 3.0;
                        rects.push(Rect::new(x0, y0, x1, y1));
                    }
                }
                let defaults = vec![
                    [3, 3],
                    [4, 3],
                    [3, 4],
                    [5, 3],
                    [4, 5],
                    [3, 3],
                    [5, 4],
                    [4, 4],
                    [3, 5],
                    [4, 3],
                    [5, 5],
                    [4, 4],
                ];
                (rects, defaults)
            }
        };
        let resolutions = if self.mesh.resolutions.is_empty() {
            defaults
        } else {
            self.mesh.resolutions.clone()
        };
        if resolutions.len() != rects.len() {
            bail!(
                "preset needs {} resolution pairs, got {}",
                rects.len(),
                resolutions.len()
            );
        }
        let specs: Vec<SubdomainSpec> = rects
            .into_iter()
            .zip(&resolutions)
            .map(|(rect, &[nx, ny])| {
                SubdomainSpec::new(rect, nx, ny).with_diagonal(self.mesh.diagonal.into())
            })
            .collect();
        Ok(build_rect_partition(domain, &specs)?)
    }

    /// Resolve the per-interface Robin parameters of the configured policy.
    pub fn resolve_alphas(&self, mesh: &DecomposedMesh, degree: usize) -> Result<Vec<f64>> {
        let n = mesh.interfaces.len();
        Ok(match self.alpha.policy {
            AlphaPolicyKind::Fixed => vec![self.alpha.value.unwrap(); n],
            AlphaPolicyKind::Min => vec![global_alpha(mesh, degree, AlphaStat::Min)?; n],
            AlphaPolicyKind::Mean => vec![global_alpha(mesh, degree, AlphaStat::Mean)?; n],
            AlphaPolicyKind::Max => vec![global_alpha(mesh, degree, AlphaStat::Max)?; n],
            AlphaPolicyKind::PerInterface => alpha_values(mesh, degree, AlphaStat::Min)?,
        })
    }
}

/// Collapse the per-interface formula values to one global constant: the
/// most conservative choice per statistic (largest for `min`, smallest for
/// `max`, the average for `mean`).
pub fn global_alpha(mesh: &DecomposedMesh, degree: usize, stat: AlphaStat) -> Result<f64> {
    let values = alpha_values(mesh, degree, stat)?;
    Ok(match stat {
        AlphaStat::Min => values.iter().copied().fold(f64::MIN, f64::max),
        AlphaStat::Max => values.iter().copied().fold(f64::MAX, f64::min),
        AlphaStat::Mean => values.iter().sum::<f64>() / values.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_roundtrip_and_defaults() {
        let text = r#"
case = "caseA"
degree = 2

[mesh]
preset = "quad4"

[alpha]
policy = "min"
"#;
        let cfg: ExperimentConfig = toml::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.tol, 1e-14);
        assert_eq!(cfg.max_iter, 4000);
        assert_eq!(cfg.seed, 42);
        let mesh = cfg.build_mesh(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        assert_eq!(mesh.subdomains.len(), 4);
        assert_eq!(mesh.interfaces.len(), 4);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"
case = "caseA"
degree = 1
surprise = true
"#;
        assert!(toml::from_str::<ExperimentConfig>(text).is_err());
    }

    #[test]
    fn fixed_policy_needs_value() {
        let mut cfg = ExperimentConfig::default();
        cfg.alpha.policy = AlphaPolicyKind::Fixed;
        assert!(cfg.validate().is_err());
        cfg.alpha.value = Some(3.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn grid_preset_builds_twelve_subdomains() {
        let mut cfg = ExperimentConfig::default();
        cfg.mesh.preset = Preset::Grid4x3;
        let mesh = cfg.build_mesh(Rect::new(-3.0, -2.0, 3.0, 2.0)).unwrap();
        assert_eq!(mesh.subdomains.len(), 12);
        // 3 vertical interfaces per row × 3 rows + 4 horizontal × 2 = 17.
        assert_eq!(mesh.interfaces.len(), 17);
    }

    #[test]
    fn resolution_count_mismatch_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.mesh.resolutions = vec![[2, 2]];
        assert!(cfg.build_mesh(Rect::new(0.0, 0.0, 1.0, 1.0)).is_err());
    }
}
