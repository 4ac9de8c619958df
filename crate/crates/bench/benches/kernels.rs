use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qpg_core::model::{hadamard_model, t_matrix};
use qpg_core::hadamard::fourier_matrix;
use qpg_core::perm::{families, strongest_transitive_certificate, PermGroup};
use qpg_core::random::haar_samples;
use qpg_core::weyl::{extract_cocycle, t_matrix_closed_form, uniform_samples, weyl_model, WeylBasis};

fn groups(c: &mut Criterion) {
    let g = families::pgl2(7).unwrap();
    let gens = g.generators().to_vec();
    c.bench_function("closure pgl2(7)", |b| {
        b.iter(|| PermGroup::closure(8, black_box(&gens)).unwrap())
    });
    c.bench_function("certificate pgl2(7)", |b| {
        b.iter(|| strongest_transitive_certificate(black_box(&g)))
    });
}

fn sampling(c: &mut Criterion) {
    c.bench_function("haar 4x4, 1000 samples", |b| {
        b.iter(|| haar_samples(4, black_box(1000), 7))
    });
}

fn moments(c: &mut Criterion) {
    let basis = WeylBasis::new(&[2]).unwrap();
    let cocycle = extract_cocycle(&basis).unwrap();
    let samples = uniform_samples(haar_samples(2, 2000, 3));
    c.bench_function("weyl T3 closed form", |b| {
        b.iter(|| t_matrix_closed_form(&basis, &cocycle, black_box(&samples), 3).unwrap())
    });
    let model = weyl_model(&basis, &samples).unwrap();
    c.bench_function("weyl T3 generic", |b| b.iter(|| t_matrix(black_box(&model), 3).unwrap()));
    let f = hadamard_model(&fourier_matrix(&[2, 2]).unwrap());
    c.bench_function("fourier 2x2 T3", |b| b.iter(|| t_matrix(black_box(&f), 3).unwrap()));
}

criterion_group!(benches, groups, sampling, moments);
criterion_main!(benches);
