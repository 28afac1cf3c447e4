//! Manufactured solutions of `(Id - Δ)u = f` with closed-form gradients and
//! forcing terms. Hand-differentiated forcings are validated against finite
//! differences when a case is constructed.

use anyhow::{bail, Result};
use nicem_core::Rect;

type Field = Box<dyn Fn(f64, f64) -> f64 + Sync + Send>;
type Gradient = Box<dyn Fn(f64, f64) -> [f64; 2] + Sync + Send>;

pub struct ManufacturedCase {
    pub name: String,
    pub domain: Rect,
    pub u: Field,
    pub grad: Gradient,
    pub f: Field,
}

impl ManufacturedCase {
    /// Look up a case by name: `caseA`, `caseB`, `poly1`, `poly2`, `poly3`
    /// or `zero` (the homogeneous error equation).
    pub fn by_name(name: &str) -> Result<Self> {
        let case = match name {
            "caseA" => Self {
                name: name.into(),
                domain: Rect::new(0.0, 0.0, 1.0, 1.0),
                u: Box::new(|x, y| x.powi(4) * y.powi(4) + x * y * (10.0 * x * y).cos()),
                grad: Box::new(|x, y| {
                    let w = 10.0 * x * y;
                    [
                        4.0 * x.powi(3) * y.powi(4) + y * w.cos() - 10.0 * x * y * y * w.sin(),
                        4.0 * x.powi(4) * y.powi(3) + x * w.cos() - 10.0 * x * x * y * w.sin(),
                    ]
                }),
                f: Box::new(|x, y| {
                    let w = 10.0 * x * y;
                    let u = x.powi(4) * y.powi(4) + x * y * w.cos();
                    let lap = 12.0 * x * x * y.powi(4) + 12.0 * x.powi(4) * y * y
                        - 20.0 * (x * x + y * y) * w.sin()
                        - 100.0 * x * y * (x * x + y * y) * w.cos();
                    u - lap
                }),
            },
            "caseB" => Self {
                name: name.into(),
                domain: Rect::new(-3.0, -2.0, 3.0, 2.0),
                u: Box::new(|x, y| x.powi(3) * y * y + (x * y).sin()),
                grad: Box::new(|x, y| {
                    [
                        3.0 * x * x * y * y + y * (x * y).cos(),
                        2.0 * x.powi(3) * y + x * (x * y).cos(),
                    ]
                }),
                f: Box::new(|x, y| {
                    let u = x.powi(3) * y * y + (x * y).sin();
                    let lap = 6.0 * x * y * y + 2.0 * x.powi(3) - (x * x + y * y) * (x * y).sin();
                    u - lap
                }),
            },
            "poly1" => Self {
                name: name.into(),
                domain: Rect::new(0.0, 0.0, 1.0, 1.0),
                u: Box::new(|x, y| 1.0 + 2.0 * x - 3.0 * y),
                grad: Box::new(|_, _| [2.0, -3.0]),
                f: Box::new(|x, y| 1.0 + 2.0 * x - 3.0 * y),
            },
            "poly2" => Self {
                name: name.into(),
                domain: Rect::new(0.0, 0.0, 1.0, 1.0),
                u: Box::new(|x, y| x * x + x * y - y),
                grad: Box::new(|x, y| [2.0 * x + y, x - 1.0]),
                f: Box::new(|x, y| x * x + x * y - y - 2.0),
            },
            "poly3" => Self {
                name: name.into(),
                domain: Rect::new(0.0, 0.0, 1.0, 1.0),
                u: Box::new(|x, y| x.powi(3) - x * y * y + x * x + 1.0),
                grad: Box::new(|x, y| [3.0 * x * x - y * y + 2.0 * x, -2.0 * x * y]),
                f: Box::new(|x, y| x.powi(3) - x * y * y + x * x + 1.0 - (4.0 * x + 2.0)),
            },
            "zero" => Self {
                name: name.into(),
                domain: Rect::new(0.0, 0.0, 1.0, 1.0),
                u: Box::new(|_, _| 0.0),
                grad: Box::new(|_, _| [0.0, 0.0]),
                f: Box::new(|_, _| 0.0),
            },
            other => bail!("unknown case {other:?}"),
        };
        case.validate()?;
        Ok(case)
    }

    /// Check `f = u - Δu` by centered finite differences at 100
    /// deterministic sample points (step 1e-4, relative error < 1e-5).
    pub fn validate(&self) -> Result<()> {
        let h = 1e-4;
        let d = self.domain;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x = d.xmin + h + (d.width() - 2.0 * h) * next();
            let y = d.ymin + h + (d.height() - 2.0 * h) * next();
            let u = &self.u;
            let lap =
                (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h);
            let f_num = u(x, y) - lap;
            let f_val = (self.f)(x, y);
            let rel = (f_num - f_val).abs() / (1.0 + f_val.abs());
            worst = worst.max(rel);
            // Gradient check rides along.
            let gx = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
            let gy = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
            let g = (self.grad)(x, y);
            let grel = ((gx - g[0]).abs() + (gy - g[1]).abs()) / (1.0 + g[0].abs() + g[1].abs());
            worst = worst.max(grel);
        }
        if worst >= 1e-5 {
            bail!(
                "case {}: forcing/gradient disagrees with finite differences (rel {worst:.2e})",
                self.name
            );
        }
        Ok(())
    }

    /// The patch-test polynomial case of a given degree.
    pub fn poly(degree: usize) -> Result<Self> {
        Self::by_name(&format!("poly{degree}"))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.name == "zero"
    }
}
