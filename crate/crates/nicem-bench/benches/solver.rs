//! Criterion benchmarks for the solver building blocks: assembly, mortar
//! projection, one coupled sweep, a GMRES interface solve and the
//! quadratic-form spectrum.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use nalgebra::DVector;
use nicem_core::fem::{assemble_reaction_diffusion, FeSpace};
use nicem_core::gmres::run_gmres;
use nicem_core::legendre::delta_form_spectrum;
use nicem_core::mesh::{build_rect_partition, Rect, SubdomainSpec};
use nicem_core::mortar::{CouplingMatrices, MortarSpace};
use nicem_core::schwarz::{build_problem, InitialGuess, SchwarzProblem, StopRule};
use nicem_core::space1d::Space1d;
use nicem_core::DecomposedMesh;

fn split2(nl: usize, nr: usize) -> DecomposedMesh {
    build_rect_partition(
        Rect::new(0.0, 0.0, 1.0, 1.0),
        &[
            SubdomainSpec::new(Rect::new(0.0, 0.0, 0.5, 1.0), nl, nl),
            SubdomainSpec::new(Rect::new(0.5, 0.0, 1.0, 1.0), nr, nr),
        ],
    )
    .unwrap()
}

fn zero(_: f64, _: f64) -> f64 {
    0.0
}

fn problem(degree: usize) -> SchwarzProblem {
    let mesh = split2(24, 33);
    build_problem(&mesh, degree, &zero, &zero, &[20.0]).unwrap()
}

fn bench_assembly(c: &mut Criterion) {
    let mesh = split2(32, 32);
    let sub = &mesh.subdomains[0];
    for degree in [1usize, 2, 3] {
        let space = FeSpace::new(sub, degree, &mesh.interfaces).unwrap();
        c.bench_function(&format!("assemble_p{degree}_32x32"), |b| {
            b.iter(|| assemble_reaction_diffusion(&space, sub, None))
        });
    }
}

fn bench_projection(c: &mut Criterion) {
    let own_pts: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
    let nbr_pts: Vec<f64> = (0..=96).map(|i| i as f64 / 96.0).collect();
    let own = MortarSpace::new(Space1d::new(own_pts, 2).unwrap()).unwrap();
    let nbr = MortarSpace::new(Space1d::new(nbr_pts, 2).unwrap()).unwrap();
    let coupling = CouplingMatrices::new(&own, &nbr).unwrap();
    let v = DVector::from_fn(own.trace().dim(), |i, _| (i as f64 * 0.37).sin());
    c.bench_function("mortar_projection_p2_n64", |b| {
        b.iter(|| coupling.project_own_trace(&v))
    });
}

fn bench_schwarz_step(c: &mut Criterion) {
    let p = problem(2);
    let state = p.initial_state(InitialGuess::RandomMultipliers { seed: 1 });
    c.bench_function("schwarz_step_p2_24x33", |b| {
        b.iter_batched(|| state.clone(), |s| p.step(&s), BatchSize::SmallInput)
    });
}

fn bench_gmres(c: &mut Criterion) {
    let p = problem(2);
    c.bench_function("gmres_error_equation_p2_24x33", |b| {
        b.iter(|| {
            run_gmres(
                &p,
                InitialGuess::RandomMultipliers { seed: 1 },
                StopRule::ResidualRelative(1e-8),
                200,
                false,
                None,
            )
        })
    });
}

fn bench_spectrum(c: &mut Criterion) {
    c.bench_function("delta_form_spectrum_p13", |b| {
        b.iter(|| delta_form_spectrum(13).unwrap())
    });
}

criterion_group!(
    benches,
    bench_assembly,
    bench_projection,
    bench_schwarz_step,
    bench_gmres,
    bench_spectrum
);
criterion_main!(benches);
