use criterion::{criterion_group, criterion_main, Criterion};
use psym_bench::{half_filled, ring, rng};
use psym_core::fockstate::{apply_orbital_rotation, project, weights, Spin, WeightMode};
use psym_core::linalg::haar_unitary;
use psym_core::slater::{overlap_det, SlaterDeterminant};

fn weights_benzene(c: &mut Criterion) {
    let (g, rep) = ring(6, "D6h");
    let s = half_filled(6, 1);
    c.bench_function("weights/exact/D6h/12q", |b| {
        b.iter(|| weights(&s, &g, &rep, WeightMode::Exact).unwrap())
    });
    c.bench_function("weights/sampled/D6h/12q/1e3", |b| {
        b.iter(|| weights(&s, &g, &rep, WeightMode::Sampled { shots: 1000, seed: 3 }).unwrap())
    });
    let (g2, rep2) = ring(6, "D2h");
    c.bench_function("weights/pauli/D2h/12q", |b| {
        b.iter(|| weights(&s, &g2, &rep2, WeightMode::Pauli).unwrap())
    });
    c.bench_function("project/A1g/D6h/12q", |b| {
        b.iter(|| project(&s, &g, &rep, "A1g").unwrap())
    });
}

fn rotation(c: &mut Criterion) {
    for n in [6usize, 8] {
        let s = half_filled(n, 2);
        let u = haar_unitary(n, &mut rng(4));
        c.bench_function(&format!("rotation/{}q", 2 * n), |b| {
            b.iter(|| apply_orbital_rotation(&s, &u, Spin::Both).unwrap())
        });
    }
}

fn determinant(c: &mut Criterion) {
    let (_, rep) = ring(12, "D2h");
    let sd = SlaterDeterminant::closed_shell(12, (0..6).collect()).unwrap();
    let id = rep.element_ids()[1].clone();
    c.bench_function("overlap_det/24q", |b| b.iter(|| overlap_det(&sd, &rep, &id).unwrap()));
}

criterion_group!(benches, weights_benzene, rotation, determinant);
criterion_main!(benches);
