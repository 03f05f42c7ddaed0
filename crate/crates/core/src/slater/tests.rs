use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fockstate::overlap_ug;
use crate::huckel::HuckelRing;
use crate::linalg::haar_unitary;
use crate::pointgroup::builtin_group;
use crate::representation::{diagonalize, from_basis_overlap};

fn benzene() -> (PointGroup, RepSet) {
    let g = builtin_group("D6h").unwrap();
    let rep = HuckelRing::benzene().rep_set(&g).unwrap();
    (g, rep)
}

fn shell<'a>(rep: &'a RepSet, label: &str) -> &'a Shell {
    rep.shells().iter().find(|s| s.label == label).unwrap()
}

fn hf() -> SlaterDeterminant {
    SlaterDeterminant::closed_shell(6, vec![0, 1, 2]).unwrap()
}

#[test]
fn validation() {
    assert!(SlaterDeterminant::new(3, vec![1, 0], vec![]).is_err());
    assert!(SlaterDeterminant::new(3, vec![0, 0], vec![]).is_err());
    assert!(SlaterDeterminant::new(3, vec![3], vec![]).is_err());
}

#[test]
fn identity_and_reference() {
    let (g, rep) = benzene();
    assert_eq!(overlap_det(&hf(), &rep, "E").unwrap(), ONE);
    let w = weights_sd(&hf(), &g, &rep).unwrap();
    assert!((w.weight("A1g").unwrap() - 1.0).abs() < 1e-10);
    let vacuum = SlaterDeterminant::new(6, vec![], vec![]).unwrap();
    let w = weights_sd(&vacuum, &g, &rep).unwrap();
    assert!((w.weight("A1g").unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn single_excitation_support() {
    let (g, rep) = benzene();
    let configs =
        enumerate_single_excitations(&hf(), shell(&rep, "e1g"), shell(&rep, "e2u")).unwrap();
    assert_eq!(configs.len(), 8);
    for c in &configs {
        let w = weights_sd(c, &g, &rep).unwrap();
        assert!((w.sum_of_weights - 1.0).abs() < 1e-12);
        for e in &w.weights {
            if !["B1u", "B2u", "E1u"].contains(&e.irrep.as_str()) {
                assert!(e.weight.abs() < 1e-10, "{} = {}", e.irrep, e.weight);
            }
        }
    }
}

#[test]
fn manifold_totals() {
    let (g, rep) = benzene();
    let configs =
        enumerate_single_excitations(&hf(), shell(&rep, "e1g"), shell(&rep, "e2u")).unwrap();
    let red = reduce_manifold(&configs, &g, &rep).unwrap();
    for e in &red.entries {
        let expected = match e.irrep.as_str() {
            "B1u" | "B2u" => 2.0,
            "E1u" => 4.0,
            _ => 0.0,
        };
        assert!((e.total - expected).abs() < 1e-9, "{} = {}", e.irrep, e.total);
    }
    let single = reduce_manifold(&[hf()], &g, &rep).unwrap();
    assert!((single.total("A1g").unwrap() - 1.0).abs() < 1e-10);
    assert!(reduce_manifold(&[], &g, &rep).is_err());
}

#[test]
fn excitation_counts() {
    let a = Shell { label: "a".into(), orbitals: vec![0] };
    let b = Shell { label: "b".into(), orbitals: vec![1] };
    let reference = SlaterDeterminant::closed_shell(2, vec![0]).unwrap();
    assert_eq!(enumerate_single_excitations(&reference, &a, &b).unwrap().len(), 2);
    assert!(enumerate_single_excitations(&reference, &b, &a).is_err());

    let from = Shell { label: "e1".into(), orbitals: vec![1, 2] };
    let to = Shell { label: "e2".into(), orbitals: vec![3, 4] };
    let reference = SlaterDeterminant::closed_shell(5, vec![0, 1, 2]).unwrap();
    let configs = enumerate_single_excitations(&reference, &from, &to).unwrap();
    assert_eq!(configs.len(), 8);
    let distinct: std::collections::HashSet<_> = configs.iter().collect();
    assert_eq!(distinct.len(), 8);
}

fn random_det(n: usize, rng: &mut ChaCha8Rng) -> SlaterDeterminant {
    let pick = |rng: &mut ChaCha8Rng| -> Vec<usize> { (0..n).filter(|_| rng.random_bool(0.5)).collect() };
    let up = pick(rng);
    let down = pick(rng);
    SlaterDeterminant::new(n, up, down).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn determinant_overlap_matches_statevector(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, rep) = benzene();
        let eig = diagonalize(&rep).unwrap();
        let sd = random_det(6, &mut rng);
        let state = sd.to_fock();
        for k in [1usize, 5, 9, 13, 17, 22] {
            let id = &g.elements[k].id;
            let a = overlap_det(&sd, &rep, id).unwrap();
            let b = overlap_ug(&state, &rep, &eig, id).unwrap();
            prop_assert!((a - b).norm() < 1e-10);
            prop_assert!(a.norm() <= 1.0 + 1e-12);
        }
        let w = weights_sd(&sd, &g, &rep).unwrap();
        prop_assert!((w.sum_of_weights - 1.0).abs() < 1e-12);
    }

    #[test]
    fn manifold_totals_survive_remixing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = HuckelRing::benzene();
        let g = builtin_group("D6h").unwrap();
        let mut x = ring.coefficients().map(|v| C64::new(v, 0.0));
        for pair in [[1usize, 2], [3, 4]] {
            let cols = x.select_columns(&pair) * haar_unitary(2, &mut rng);
            for (k, &p) in pair.iter().enumerate() {
                x.set_column(p, &cols.column(k));
            }
        }
        let db: Vec<(String, CMat)> = g
            .elements
            .iter()
            .map(|e| (e.id.clone(), ring.basis_matrix(e.cartesian.as_ref().unwrap()).unwrap()))
            .collect();
        let rep = from_basis_overlap(&x, &CMat::identity(6, 6), &db, None, Some(&g)).unwrap();
        let configs = enumerate_single_excitations(&hf(), shell(&rep, "e1g"), shell(&rep, "e2u")).unwrap();
        let red = reduce_manifold(&configs, &g, &rep).unwrap();
        prop_assert!((red.total("B1u").unwrap() - 2.0).abs() < 1e-9);
        prop_assert!((red.total("B2u").unwrap() - 2.0).abs() < 1e-9);
        prop_assert!((red.total("E1u").unwrap() - 4.0).abs() < 1e-9);
        for e in &red.entries {
            prop_assert!((e.total - e.total.round()).abs() < 1e-9);
        }
    }
}
