use criterion::{criterion_group, criterion_main, Criterion};
use psym_bench::{half_filled, rng};
use psym_core::tncompress::{compress, BrickWallCircuit, CompressOptions, Mps};

fn mps(c: &mut Criterion) {
    let s = half_filled(6, 5);
    c.bench_function("mps/from_fock/12q", |b| {
        b.iter(|| Mps::from_fock(&s, usize::MAX).unwrap())
    });
    let circuit = BrickWallCircuit::random(6, 4, &mut rng(6));
    c.bench_function("mps/prepare/12q/L4", |b| b.iter(|| circuit.prepare(64).unwrap()));
}

fn fit(c: &mut Criterion) {
    let (target, _) = BrickWallCircuit::random(4, 2, &mut rng(7)).prepare(64).unwrap();
    let opts = CompressOptions {
        chi: 64,
        max_sweeps: 10,
        restarts: 1,
        ..CompressOptions::new(2)
    };
    let mut group = c.benchmark_group("compress");
    group.sample_size(10);
    group.bench_function("8q/L2/10 sweeps", |b| b.iter(|| compress(&target, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, mps, fit);
criterion_main!(benches);
