use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{haar_unitary, random_unit_vector};

fn dense_gate(amps: &[C64], g: &CMat, p: usize, q: usize) -> Vec<C64> {
    let mut out = vec![ZERO; amps.len()];
    for (x, &z) in amps.iter().enumerate() {
        let y_in = 2 * (x >> p & 1) + (x >> q & 1);
        let base = x & !(1 << p) & !(1 << q);
        for y_out in 0..4 {
            let idx = base | ((y_out >> 1) << p) | ((y_out & 1) << q);
            out[idx] += g[(y_out, y_in)] * z;
        }
    }
    out
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn random_bond2(n: usize, rng: &mut ChaCha8Rng) -> Mps {
    let sites = (0..n)
        .map(|p| {
            let l = if p == 0 { 1 } else { 2 };
            let r = if p == n - 1 { 1 } else { 2 };
            SiteTensor::new(l, r, random_unit_vector(l * 2 * r, rng)).unwrap()
        })
        .collect();
    let mut m = Mps::new(sites).unwrap();
    m.canonicalize();
    m
}

#[test]
fn product_state_has_unit_bonds() {
    let mut amps = vec![ZERO; 1 << 6];
    amps[0] = ONE;
    let (m, err) = Mps::from_amplitudes(&amps, 8).unwrap();
    assert_eq!(m.bond_dims(), vec![1; 6]);
    assert_eq!(err, 0.0);
    assert!(Mps::from_amplitudes(&amps, 0).is_err());
    assert_eq!(m.to_amplitudes(24).unwrap(), Mps::vacuum(6).to_amplitudes(24).unwrap());
}

#[test]
fn bell_pair_has_bond_two() {
    let h = 1.0 / 2f64.sqrt();
    let amps = vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)];
    let (m, err) = Mps::from_amplitudes(&amps, 4).unwrap();
    assert_eq!(m.bond_dims(), vec![2, 1]);
    assert!(err < 1e-15);
    let (m1, err1) = Mps::from_amplitudes(&amps, 1).unwrap();
    assert_eq!(m1.max_bond(), 1);
    assert!((err1 - 0.5).abs() < 1e-12);
    assert!((m1.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn lossless_round_trip_and_right_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let amps = random_unit_vector(1 << 10, &mut rng);
    let (m, err) = Mps::from_amplitudes(&amps, 1024).unwrap();
    assert!(err < 1e-20);
    assert!(m.is_right_normalized());
    for site in m.sites() {
        assert!(site.right_normalization_residual() < 1e-10);
    }
    let back = m.to_amplitudes(24).unwrap();
    assert!(dist(&back, &amps) < 1e-10);
    assert!((m.norm() - 1.0).abs() < 1e-10);
    assert!(matches!(m.to_amplitudes(8), Err(Error::SizeGuard { .. })));
}

#[test]
fn identity_and_swap_gates() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let amps = random_unit_vector(1 << 6, &mut rng);
    let (m, _) = Mps::from_amplitudes(&amps, 64).unwrap();
    let mut moved = m.clone();
    moved.apply_gate(&CMat::identity(4, 4), 2, 3, 64).unwrap();
    assert!((m.overlap(&moved).unwrap().norm() - 1.0).abs() < 1e-12);

    let swap = CMat::from_fn(4, 4, |x, y| {
        if (x == 0 && y == 0) || (x == 3 && y == 3) || (x == 1 && y == 2) || (x == 2 && y == 1) {
            ONE
        } else {
            ZERO
        }
    });
    // qubit 0 empty, qubit 1 occupied
    let mut amps = vec![ZERO; 4];
    amps[0b10] = ONE;
    let (mut m, _) = Mps::from_amplitudes(&amps, 2).unwrap();
    m.apply_gate(&swap, 0, 1, 2).unwrap();
    let out = m.to_amplitudes(24).unwrap();
    assert!((out[0b01] - ONE).norm() < 1e-12);
    assert!(m.apply_gate(&swap, 0, 2, 2).is_err());
}

#[test]
fn gates_match_dense_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut amps = random_unit_vector(1 << 8, &mut rng);
    let (mut m, _) = Mps::from_amplitudes(&amps, 256).unwrap();
    for p in [0, 3, 6, 1, 5, 2] {
        let g = haar_unitary(4, &mut rng);
        m.apply_gate(&g, p, p + 1, 256).unwrap();
        amps = dense_gate(&amps, &g, p, p + 1);
    }
    assert!(dist(&m.to_amplitudes(24).unwrap(), &amps) < 1e-10);
}

#[test]
fn gate_counts_follow_the_brick_pattern() {
    for n in 2..=8 {
        for l in 1..=8 {
            let c = BrickWallCircuit::identity(n, l);
            let odd = l.div_ceil(2);
            assert_eq!(c.gate_total(), odd * n + (l - odd) * (n - 1));
            for (k, layer) in c.layers().iter().enumerate() {
                assert_eq!(layer.len(), if k % 2 == 0 { n } else { n - 1 });
            }
        }
    }
    assert_eq!(gate_qubits(1, 1), (0, 1));
    assert_eq!(gate_qubits(2, 1), (1, 2));
    assert!(BrickWallCircuit::new(4, vec![vec![CMat::identity(4, 4)]]).is_err());
}

#[test]
fn single_gate_environment_recovers_the_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u = haar_unitary(4, &mut rng);
    let circuit = BrickWallCircuit::new(2, vec![vec![u.clone()]]).unwrap();
    let (target, _) = circuit.prepare(4).unwrap();
    let start = BrickWallCircuit::identity(1, 1);
    let env = environment(&Mps::vacuum(2), &target, &start, 1, 1).unwrap();
    let s = linalg::svd_sorted(&env).s;
    assert!((s[0] - 1.0).abs() < 1e-12);
    let g = svd_update(&env).unwrap();
    let col = |m: &CMat| m.column(0).into_owned();
    assert!((col(&g) - col(&u)).norm() < 1e-10);
}

#[test]
fn unreachable_target_has_zero_environment() {
    let mut amps = vec![ZERO; 16];
    amps[0b1100] = ONE;
    let (target, _) = Mps::from_amplitudes(&amps, 4).unwrap();
    let c = BrickWallCircuit::identity(2, 1);
    let env = environment(&Mps::vacuum(4), &target, &c, 1, 1).unwrap();
    assert!(env.iter().all(|z| z.norm() < 1e-14));
}

#[test]
fn environment_is_the_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let circuit = BrickWallCircuit::random(3, 3, &mut rng);
    let (target, _) = Mps::from_amplitudes(&random_unit_vector(1 << 6, &mut rng), 64).unwrap();
    let mut left = Mps::vacuum(6);
    circuit.apply_layer(&mut left, 1, false, 64).unwrap();
    let mut right = target.clone();
    circuit.apply_layer(&mut right, 3, true, 64).unwrap();
    for gate in 1..=2 {
        let env = environment(&left, &right, &circuit, 2, gate).unwrap();
        let value = |c: &BrickWallCircuit| {
            let mut s = left.clone();
            c.apply_layer(&mut s, 2, false, 64).unwrap();
            right.overlap(&s).unwrap().re
        };
        let re_tr = |u: &CMat| -> f64 { env.iter().zip(u.iter()).map(|(e, g)| (e.conj() * g).re).sum() };
        let u0 = circuit.layers()[1][gate - 1].clone();
        assert!((value(&circuit) - re_tr(&u0)).abs() < 1e-10);
        let k = haar_unitary(4, &mut rng);
        let herm = (&k + k.adjoint()) * C64::new(0.0, 1e-3);
        let u1 = &u0 * herm.exp();
        let mut layers = circuit.layers().to_vec();
        layers[1][gate - 1] = u1.clone();
        let moved = BrickWallCircuit::new(6, layers).unwrap();
        let fd = value(&moved) - value(&circuit);
        assert!((fd - re_tr(&(&u1 - &u0))).abs() < 1e-6);
    }
}

#[test]
fn svd_update_special_cases() {
    let eye = CMat::identity(4, 4);
    assert!(linalg::max_abs_diff(&svd_update(&eye).unwrap(), &eye) < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = haar_unitary(4, &mut rng);
    let d = nalgebra::DVector::from_vec(vec![C64::new(3.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0), C64::new(0.5, 0.0)]);
    let h = &a * CMat::from_diagonal(&d) * a.adjoint();
    assert!(linalg::max_abs_diff(&svd_update(&h).unwrap(), &eye) < 1e-10);
    let mut bad = eye.clone();
    bad[(0, 0)] = C64::new(f64::NAN, 0.0);
    assert!(svd_update(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn svd_update_is_optimal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let env = CMat::from_fn(4, 4, |_, _| linalg::complex_gaussian(&mut rng));
        let u = svd_update(&env).unwrap();
        let re_tr = |w: &CMat| -> f64 { env.iter().zip(w.iter()).map(|(e, g)| (e.conj() * g).re).sum() };
        let best = re_tr(&u);
        let bound: f64 = linalg::svd_sorted(&env).s.iter().sum();
        prop_assert!((best - bound).abs() < 1e-10);
        for _ in 0..1000 {
            prop_assert!(re_tr(&haar_unitary(4, &mut rng)) <= best + 1e-12);
        }
    }
}

#[test]
fn product_target_is_fit_in_one_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut amps = vec![ONE];
    for _ in 0..6 {
        let q = random_unit_vector(2, &mut rng);
        // the new qubit is the most significant bit
        amps = q.iter().flat_map(|&c| amps.iter().map(move |&a| a * c)).collect();
    }
    let (target, _) = Mps::from_amplitudes(&amps, 64).unwrap();
    let mut opts = CompressOptions::new(1);
    opts.init = Init::Identity;
    opts.max_sweeps = 1;
    let res = compress(&target, &opts).unwrap();
    assert!(res.infidelity < 1e-12);
    assert!(res.cost_trace.last().unwrap().abs() < 1e-12);
}

#[test]
fn bond_two_targets_compress_with_monotone_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let target = random_bond2(8, &mut rng);
    let mut opts = CompressOptions::new(4);
    opts.chi = 64;
    opts.max_sweeps = 100;
    opts.tol = 1e-9;
    let res = compress(&target, &opts).unwrap();
    for w in res.cost_trace.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    assert!(res.infidelity < 0.05, "infidelity {}", res.infidelity);
    assert!(res.overlap.re <= 1.0 + 1e-10 && res.overlap.re >= -1.0 - 1e-10);
    let (inf, _) = infidelity(&target, &res.circuit, 64).unwrap();
    assert!((inf - res.infidelity).abs() < 1e-12);
}

#[test]
fn infidelity_limits_and_dense_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let circuit = BrickWallCircuit::random(5, 3, &mut rng);
    let (state, _) = circuit.prepare(1024).unwrap();
    assert!(infidelity(&state, &circuit, 1024).unwrap().0.abs() < 1e-12);

    let mut flipped = vec![ZERO; 1 << 10];
    let psi = state.to_amplitudes(24).unwrap();
    // a vector orthogonal to psi
    let other = random_unit_vector(1 << 10, &mut rng);
    let ov: C64 = psi.iter().zip(&other).map(|(a, b)| a.conj() * b).sum();
    for i in 0..flipped.len() {
        flipped[i] = other[i] - ov * psi[i];
    }
    let (orth, _) = Mps::from_amplitudes(&flipped, 1024).unwrap();
    assert!((infidelity(&orth, &circuit, 1024).unwrap().0 - 1.0).abs() < 1e-10);

    let target = random_unit_vector(1 << 10, &mut rng);
    let (tm, _) = Mps::from_amplitudes(&target, 1024).unwrap();
    let dense: C64 = target.iter().zip(&psi).map(|(a, b)| a.conj() * b).sum();
    let (inf, _) = infidelity(&tm, &circuit, 1024).unwrap();
    assert!((inf - (1.0 - dense.norm_sqr())).abs() < 1e-8);
}
