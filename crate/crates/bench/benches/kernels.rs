use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use krein_photon::fock::{build_mode_basis, gupta_bleuler_eta, FockSector};
use krein_photon::krein::{involution_residual, Precision};
use krein_photon::representation::lorentz_act_rep;
use krein_photon::transversal::extract_theta;
use krein_photon::wavefunction::SampledState;
use krein_photon::{
    b_eigensystem, b_matrix, build_grid, cone_point, krein_inner, GridConfig, Sl2c,
};
use krein_photon_bench::{light_grid, mixed_state};

fn pointwise(c: &mut Criterion) {
    let p = cone_point([0.3, -1.2, 0.7]).unwrap();
    c.bench_function("b_matrix", |b| b.iter(|| b_matrix(black_box(&p)).unwrap()));
    c.bench_function("b_eigensystem", |b| {
        b.iter(|| b_eigensystem(black_box(&p)).unwrap())
    });
    c.bench_function("involution_residual_dd", |b| {
        b.iter(|| involution_residual(black_box(&p), Precision::DoubleDouble).unwrap())
    });
    let alpha =
        Sl2c::boost([0.0, 0.6, 0.8], 0.9).unwrap() * Sl2c::rotation([1.0, 0.0, 0.0], 0.4).unwrap();
    c.bench_function("extract_theta", |b| {
        b.iter(|| extract_theta(black_box(&alpha), &p).unwrap())
    });
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature");
    group.sample_size(10);
    group.bench_function("build_light_grid", |b| b.iter(light_grid));
    group.bench_function("build_default_grid", |b| {
        b.iter(|| build_grid(GridConfig::default()).unwrap())
    });
    let g = light_grid();
    let phi = mixed_state();
    let moved = lorentz_act_rep(&Sl2c::boost([0.0, 0.0, 1.0], 0.7).unwrap(), &phi).unwrap();
    group.bench_function("krein_inner_two_grid", |b| {
        b.iter(|| krein_inner(&phi, &moved, &g).unwrap())
    });
    group.bench_function("sampled_state", |b| {
        b.iter(|| SampledState::new(&moved, &g).unwrap())
    });
    let s = SampledState::new(&phi, &g).unwrap();
    let t = SampledState::new(&moved, &g).unwrap();
    group.bench_function("sampled_krein", |b| b.iter(|| s.krein(&t, &g).unwrap()));
    group.finish();
}

fn fock(c: &mut Criterion) {
    let mut group = c.benchmark_group("fock");
    group.sample_size(10);
    let g = light_grid();
    let basis = build_mode_basis(&[mixed_state()], &g).unwrap();
    group.bench_function("mode_basis", |b| {
        b.iter(|| build_mode_basis(&[mixed_state()], &g).unwrap())
    });
    group.bench_function("sector_and_eta_cutoff4", |b| {
        b.iter(|| gupta_bleuler_eta(&FockSector::new(basis.clone(), 4).unwrap()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, pointwise, quadrature, fock);
criterion_main!(benches);
