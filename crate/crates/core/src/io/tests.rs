use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fockstate::{FockState, UcjLayer, UcjParams};
use crate::huckel::HuckelRing;
use crate::linalg::{haar_unitary, C64};
use crate::pointgroup::{builtin_group, BUILTIN_GROUPS};
use crate::slater::SlaterDeterminant;
use crate::tncompress::{BrickWallCircuit, Mps};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(11)
}

#[test]
fn builtin_groups_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in BUILTIN_GROUPS {
        let g = builtin_group(name).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        write_json(&path, &group_to_json(&g)).unwrap();
        let back = group_from_json(&read_json(&path).unwrap()).unwrap();
        assert_eq!(back.name, g.name);
        assert_eq!(back.elements.len(), g.elements.len());
        assert_eq!(back.table.irreps, g.table.irreps);
        for (a, b) in back.table.chi.iter().flatten().zip(g.table.chi.iter().flatten()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn group_json_accepts_real_characters() {
    let text = r#"{
        "name": "C2",
        "classes": [{"label": "E", "size": 1}, {"label": "C2", "size": 1}],
        "elements": [{"id": "E", "class": "E"}, {"id": "C2", "class": "C2"}],
        "irreps": [{"label": "A", "dim": 1, "chi": [1, 1]},
                   {"label": "B", "dim": 1, "chi": [1, [-1.0, 0.0]]}]
    }"#;
    let g = group_from_json(&serde_json::from_str(text).unwrap()).unwrap();
    assert_eq!(g.order(), 2);
    assert_eq!(g.table.chi[1][1], C64::new(-1.0, 0.0));
}

#[test]
fn rep_round_trip_keeps_one_based_orbitals() {
    let d6h = builtin_group("D6h").unwrap();
    let rep = HuckelRing::benzene().rep_set(&d6h).unwrap();
    let file = rep_to_json(&rep).unwrap();
    assert!(file.shells.iter().all(|s| s.orbitals.iter().all(|&p| p >= 1)));
    let text = serde_json::to_string(&file).unwrap();
    let back = rep_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.element_ids(), rep.element_ids());
    for e in 0..rep.element_ids().len() {
        assert!((back.matrix(e) - rep.matrix(e)).camax() < 1e-14);
    }
}

#[test]
fn rep_rejects_zero_index() {
    let text = r#"{"n_spatial": 1, "shells": [{"label": "a", "orbitals": [0]}],
                   "matrices": {"E": [[[1]]]}}"#;
    let file: RepFile = serde_json::from_str(text).unwrap();
    assert!(rep_from_json(&file).is_err());
}

#[test]
fn raw_basis_builds_rep() {
    let text = r#"{"S": [[1, 0], [0, 1]], "x": [[1, 0], [0, 1]],
                   "DB": {"E": [[1, 0], [0, 1]], "s": [[0, 1], [1, 0]]}}"#;
    let file: RawBasisFile = serde_json::from_str(text).unwrap();
    let rep = raw_basis_from_json(&file, None).unwrap();
    assert_eq!(rep.n_spatial(), 2);
    assert_eq!(rep.element_ids(), ["E", "s"]);
}

#[test]
fn wavefunction_round_trip_both_orderings() {
    let dir = tempfile::tempdir().unwrap();
    let state = FockState::random_in_sector(3, 2, 1, &mut rng());
    for ordering in [Ordering::Interleaved, Ordering::Blocked] {
        let path = dir.path().join("psi.bin");
        write_wavefunction(&path, &state, ordering).unwrap();
        let back = read_wavefunction(&path).unwrap();
        assert!(back.distance(&state) < 1e-15);
        let side: Sidecar = read_json(&wavefunction_sidecar(&path)).unwrap();
        assert!((side.norm - 1.0).abs() < 1e-12);
        assert_eq!((side.n_alpha, side.n_beta), (Some(2), Some(1)));
    }
}

#[test]
fn wavefunction_rejects_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.bin");
    write_wavefunction(&path, &FockState::vacuum(2), Ordering::Interleaved).unwrap();
    let mut bytes = std::fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 3);
    std::fs::write(&path, bytes).unwrap();
    assert!(read_wavefunction(&path).is_err());
}

#[test]
fn fcidump_round_trip() {
    let mut h = HuckelRing::benzene().hubbard_hamiltonian(2.0);
    h.set_core(0.75);
    let f = Fcidump {
        hamiltonian: h,
        nelec: 6,
        ms2: 0,
        orbsym: vec![1; 6],
        isym: 1,
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("FCIDUMP");
    write_fcidump(&path, &f).unwrap();
    let back = read_fcidump(&path).unwrap();
    assert_eq!((back.nelec, back.ms2, back.isym), (6, 0, 1));
    assert_eq!(back.orbsym, f.orbsym);
    let (a, b) = (&back.hamiltonian, &f.hamiltonian);
    assert!((a.core() - b.core()).abs() < 1e-14);
    assert!((a.h() - b.h()).amax() < 1e-12);
    for p in 0..6 {
        for q in 0..6 {
            for r in 0..6 {
                for s in 0..6 {
                    assert!((a.eri(p, q, r, s) - b.eri(p, q, r, s)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn fcidump_parses_fortran_exponents_and_symmetry() {
    let text = "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,2,\n ISYM=1,\n/\n\
                0.5D+00 2 1 2 1\n-1.0D0 1 1 0 0\n 0.25 2 2 1 1\n1.5 0 0 0 0\n";
    let f = fcidump::parse_fcidump(text).unwrap();
    let h = &f.hamiltonian;
    assert_eq!(f.orbsym, vec![1, 2]);
    assert_eq!(h.h()[(0, 0)], -1.0);
    assert_eq!(h.core(), 1.5);
    for (p, q, r, s) in [(0, 1, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1)] {
        assert_eq!(h.eri(p, q, r, s), 0.5);
    }
    assert_eq!(h.eri(0, 0, 1, 1), 0.25);
}

#[test]
fn fcidump_rejects_bad_index() {
    let text = "&FCI NORB=1,NELEC=0,MS2=0,\n&END\n1.0 2 1 0 0\n";
    assert!(fcidump::parse_fcidump(text).is_err());
}

#[test]
fn dets_round_trip() {
    let dets = vec![
        SlaterDeterminant::new(4, vec![0, 2], vec![1]).unwrap(),
        SlaterDeterminant::closed_shell(4, vec![0, 1]).unwrap(),
    ];
    let file = dets_to_json(&dets);
    assert_eq!(file.dets[0].up, vec![1, 3]);
    assert_eq!(dets_from_json(&file).unwrap(), dets);
}

#[test]
fn ucj_round_trip() {
    let mut r = rng();
    let n = 3;
    let sym = |seed: f64| DMatrix::from_fn(n, n, |i, j| seed * (i + j) as f64);
    let layers = (0..2)
        .map(|k| UcjLayer {
            u: haar_unitary(n, &mut r),
            j_same: sym(0.1 * k as f64),
            j_anti: sym(0.3),
        })
        .collect();
    let params = UcjParams::new(n, layers).unwrap();
    let text = serde_json::to_string(&ucj_to_json(&params)).unwrap();
    let back = ucj_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.repetitions(), 2);
    for (a, b) in back.layers().iter().zip(params.layers()) {
        assert!((&a.u - &b.u).camax() < 1e-15);
        assert_eq!(a.j_same, b.j_same);
    }
}

#[test]
fn circuit_and_mps_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = BrickWallCircuit::random(2, 3, &mut rng());
    let back = circuit_from_json(&circuit_to_json(&c)).unwrap();
    assert_eq!(back.layers(), c.layers());

    let (mps, _) = c.prepare(64).unwrap();
    let path = dir.path().join("psi.mps");
    write_mps(&path, &mps).unwrap();
    let read: Mps = read_mps(&path).unwrap();
    assert_eq!(read.bond_dims(), mps.bond_dims());
    assert!((read.overlap(&mps).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn circuit_rejects_nonunitary_gate() {
    let mut file = circuit_to_json(&BrickWallCircuit::identity(2, 1));
    file.layers[0][0] = (0..4).map(|_| (0..4).map(|_| json::Entry::Real(0.5)).collect()).collect();
    assert!(circuit_from_json(&file).is_err());
}

#[test]
fn weights_csv_has_header_and_rows() {
    let d2h = builtin_group("D2h").unwrap();
    let ring = HuckelRing::new(4, 0.0, -1.0).unwrap();
    let rep = ring.rep_set(&d2h).unwrap();
    let report = crate::fockstate::weights(
        &ring.hf_state(),
        &d2h,
        &rep,
        crate::fockstate::WeightMode::Exact,
    )
    .unwrap();
    let csv = weights_to_csv(&report);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "irrep,weight,d_gamma");
    assert_eq!(lines.len(), 1 + d2h.table.irreps.len());
}
