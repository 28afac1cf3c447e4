use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use nicem_cli::commands;
use nicem_cli::config::{AlphaPolicyKind, ExperimentConfig, Solver, StopKind};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "nicem",
    about = "Non-overlapping Schwarz solver with mortar-coupled Robin interfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the experiment subcommands; every flag overrides the
/// config-file value.
#[derive(Args, Clone)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_parser = ["schwarz", "gmres"])]
    solver: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_parser = ["residual-rel", "residual-abs", "energy-reduction"])]
    stop: Option<String>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Start from random multiplier coefficients.
    #[arg(long)]
    random_init: bool,
    /// Fixed Robin parameter (sets alpha.policy = fixed).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    factor: Option<usize>,
    /// Comma-separated Robin parameters for sweeps.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
}

impl Common {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.output_dir {
            cfg.output_dir = v;
        }
        if let Some(v) = self.case {
            cfg.case = v;
        }
        if let Some(v) = self.degree {
            cfg.degree = v;
        }
        if let Some(v) = self.solver.as_deref() {
            cfg.solver = match v {
                "gmres" => Solver::Gmres,
                _ => Solver::Schwarz,
            };
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.stop.as_deref() {
            cfg.stop = match v {
                "residual-abs" => StopKind::ResidualAbs,
                "energy-reduction" => StopKind::EnergyReduction,
                _ => StopKind::ResidualRel,
            };
        }
        if let Some(v) = self.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.random_init {
            cfg.random_init = true;
        }
        if let Some(v) = self.alpha {
            cfg.alpha.policy = AlphaPolicyKind::Fixed;
            cfg.alpha.value = Some(v);
        }
        if let Some(v) = self.levels {
            cfg.refine.levels = v;
        }
        if let Some(v) = self.factor {
            cfg.refine.factor = v;
        }
        if !self.alphas.is_empty() {
            cfg.alphas = self.alphas;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the coupled solver once and export solution, history and summary.
    Solve(Common),
    /// Solve a refinement sequence and fit the H¹ convergence order.
    ConvergeStudy(Common),
    /// Error-equation iteration counts over a Robin-parameter grid.
    AlphaSweep(Common),
    /// Paired Jacobi/GMRES error histories over the Robin-parameter grid.
    CompareKrylov(Common),
    /// Certification report for the interface quadratic form.
    LegendreVerify {
        #[arg(long, default_value_t = 20)]
        p_max: usize,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Write the configured mesh as `nicem-mesh v1` text and VTK.
    MeshExport(Common),
}

fn init_threads() {
    if let Ok(n) = std::env::var("NICEM_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn main() -> Result<()> {
    init_threads();
    match Cli::parse().command {
        Command::Solve(common) => {
            let cfg = common.into_config()?;
            let report = commands::cmd_solve(&cfg)?;
            println!(
                "converged in {} iterations, final residual {:.3e}",
                report.iterations, report.final_residual
            );
            if let Some(rel) = report.rel_h1_error {
                println!("relative H1 error: {rel:.6e}");
            }
        }
        Command::ConvergeStudy(common) => {
            let cfg = common.into_config()?;
            let report = commands::cmd_converge_study(&cfg)?;
            for row in &report.rows {
                println!(
                    "level {} h {:.6e} rel_h1_error {:.6e} ({} iterations)",
                    row.level, row.h, row.rel_error, row.iterations
                );
            }
            println!("fitted slope: {:.4}", report.slope);
        }
        Command::AlphaSweep(common) => {
            let cfg = common.into_config()?;
            let report = commands::cmd_alpha_sweep(&cfg)?;
            for row in &report.rows {
                let mark = if row.censored { " (censored)" } else { "" };
                println!(
                    "alpha {:.4} -> {} iterations{}",
                    row.alpha, row.iterations, mark
                );
            }
            println!(
                "alpha_min {:.4} alpha_mean {:.4} alpha_max {:.4}",
                report.alpha_min, report.alpha_mean, report.alpha_max
            );
        }
        Command::CompareKrylov(common) => {
            let cfg = common.into_config()?;
            let report = commands::cmd_compare_krylov(&cfg)?;
            for (i, alpha) in report.alphas.iter().enumerate() {
                println!(
                    "alpha {:.4}: schwarz {} gmres {}",
                    alpha, report.schwarz_counts[i], report.gmres_counts[i]
                );
            }
            println!(
                "spread: schwarz {} gmres {}",
                commands::CompareReport::spread(&report.schwarz_counts),
                commands::CompareReport::spread(&report.gmres_counts)
            );
        }
        Command::LegendreVerify { p_max, output_dir } => {
            let report = commands::cmd_legendre_verify(p_max, &output_dir)?;
            for row in &report.rows {
                println!(
                    "p {:>2}: lambda_max {:>13.6e} duality residual {:.3e}",
                    row.p, row.lambda_max, row.duality_residual
                );
            }
            println!("certified through p = 13: {}", report.certified_through_13);
        }
        Command::MeshExport(common) => {
            let cfg = common.into_config()?;
            commands::cmd_mesh_export(&cfg)?;
            println!("mesh written to {}", cfg.output_dir.display());
        }
    }
    Ok(())
}
