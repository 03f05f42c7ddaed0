use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};
use crate::pointgroup::{weights_from_ordered, PointGroup, WeightReport};
use crate::representation::{diagonalize, pauli_shortcut, RepEigen, RepSet};

use super::rotation::ExteriorPower;
use super::{split, FockState, Spin};

fn element(rep: &RepSet, id: &str) -> Result<usize> {
    rep.element_index(id)
        .ok_or_else(|| Error::Invalid(format!("representation has no matrix for element `{id}`")))
}

fn check_dims(state: &FockState, rep: &RepSet) -> Result<()> {
    if state.n_spatial() != rep.n_spatial() {
        return Err(Error::Dimension(format!(
            "state has {} spatial orbitals, representation has {}",
            state.n_spatial(),
            rep.n_spatial()
        )));
    }
    Ok(())
}

/// `U(V(g)†)|psi>`, the state rotated into the eigenbasis of `D(g)`.
fn rotate_to_eigenbasis(state: &FockState, rep: &RepSet, eig: &RepEigen, e: usize) -> FockState {
    if eig.is_diagonal(e) {
        return state.clone();
    }
    let v = eig.eigenvectors(rep, e);
    ExteriorPower::new(&v.adjoint()).apply(state, Spin::Both)
}

/// Phase `sum_p phi_p (n_p,up + n_p,down)` of the basis state `idx`.
#[inline]
fn occupation_phase(idx: usize, phases: &[f64]) -> f64 {
    let (a, b) = split(idx);
    let mut theta = 0.0;
    let mut m = a;
    while m != 0 {
        theta += phases[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    let mut m = b;
    while m != 0 {
        theta += phases[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    theta
}

pub(crate) fn overlap_index(state: &FockState, rep: &RepSet, eig: &RepEigen, e: usize) -> C64 {
    if linalg::is_exact_identity(&rep.matrix(e)) {
        return ONE;
    }
    let phases = eig.orbital_phases(rep, e);
    let rotated = rotate_to_eigenbasis(state, rep, eig, e);
    rotated
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, z)| **z != ZERO)
        .map(|(idx, z)| C64::from_polar(z.norm_sqr(), occupation_phase(idx, &phases)))
        .sum()
}

/// `<psi|U(g)|psi>` by rotating into the eigenbasis of `D(g)` and summing the
/// diagonal phase over computational basis states.
pub fn overlap_ug(state: &FockState, rep: &RepSet, eig: &RepEigen, element_id: &str) -> Result<C64> {
    check_dims(state, rep)?;
    Ok(overlap_index(state, rep, eig, element(rep, element_id)?))
}

/// `<psi|U(g)|psi>` by applying the full orbital rotation `D(g)`.
pub fn overlap_ug_direct(state: &FockState, rep: &RepSet, element_id: &str) -> Result<C64> {
    check_dims(state, rep)?;
    let d = rep.matrix(element(rep, element_id)?);
    let moved = ExteriorPower::new(&d).apply(state, Spin::Both);
    Ok(state.inner(&moved))
}

/// Expectation of `prod Z` over both spin qubits of the listed orbitals.
pub fn overlap_pauli(state: &FockState, orbitals: &[usize]) -> Result<f64> {
    let mut mask = 0usize;
    for &p in orbitals {
        if p >= state.n_spatial() {
            return Err(Error::Invalid(format!(
                "orbital {} out of range for {} spatial orbitals",
                p + 1,
                state.n_spatial()
            )));
        }
        mask ^= 0b11 << (2 * p);
    }
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let s = if (idx & mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            s * z.norm_sqr()
        })
        .sum())
}

/// Shot-based estimate of `<psi|U(g)|psi>` with per-component standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledOverlap {
    pub estimate: C64,
    pub std_error_re: f64,
    pub std_error_im: f64,
}

impl SampledOverlap {
    fn exact_one() -> Self {
        Self {
            estimate: ONE,
            std_error_re: 0.0,
            std_error_im: 0.0,
        }
    }
}

fn sampler(state: &FockState) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(state.amplitudes().iter().map(|z| z.norm_sqr()))
        .map_err(|e| Error::Invalid(format!("cannot sample from state: {e}")))
}

fn phase_statistics(samples: impl Iterator<Item = f64>, shots: usize) -> SampledOverlap {
    let (mut sr, mut si, mut qr, mut qi) = (0.0, 0.0, 0.0, 0.0);
    for theta in samples {
        let (s, c) = theta.sin_cos();
        sr += c;
        si += s;
        qr += c * c;
        qi += s * s;
    }
    let m = shots as f64;
    let (mr, mi) = (sr / m, si / m);
    let var = |q: f64, mean: f64| {
        if shots > 1 {
            ((q - m * mean * mean) / (m - 1.0)).max(0.0)
        } else {
            0.0
        }
    };
    SampledOverlap {
        estimate: C64::new(mr, mi),
        std_error_re: (var(qr, mr) / m).sqrt(),
        std_error_im: (var(qi, mi) / m).sqrt(),
    }
}

fn element_rng(seed: u64, e: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(e as u64);
    rng
}

fn sampled_index(
    state: &FockState,
    rep: &RepSet,
    eig: &RepEigen,
    e: usize,
    shots: usize,
    seed: u64,
) -> Result<SampledOverlap> {
    if linalg::is_exact_identity(&rep.matrix(e)) {
        return Ok(SampledOverlap::exact_one());
    }
    let phases = eig.orbital_phases(rep, e);
    let rotated = rotate_to_eigenbasis(state, rep, eig, e);
    let dist = sampler(&rotated)?;
    let mut rng = element_rng(seed, e);
    let draws = (0..shots).map(|_| occupation_phase(dist.sample(&mut rng), &phases));
    Ok(phase_statistics(draws, shots))
}

/// Estimates `<psi|U(g)|psi>` from `shots` computational-basis samples of the
/// rotated state. Deterministic for a fixed seed.
pub fn sampled_overlap(
    state: &FockState,
    rep: &RepSet,
    eig: &RepEigen,
    element_id: &str,
    shots: usize,
    seed: u64,
) -> Result<SampledOverlap> {
    check_dims(state, rep)?;
    if shots == 0 {
        return Err(Error::Invalid("shots must be at least 1".into()));
    }
    sampled_index(state, rep, eig, element(rep, element_id)?, shots, seed)
}

/// How element overlaps are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Exact,
    Pauli,
    Sampled { shots: usize, seed: u64 },
}

/// Irrep weights of `state` over `group`, with overlaps from the chosen mode.
pub fn weights(
    state: &FockState,
    group: &PointGroup,
    rep: &RepSet,
    mode: WeightMode,
) -> Result<WeightReport> {
    check_dims(state, rep)?;
    let idx = rep.align(group)?;
    let (overlaps, backend, shots): (Vec<C64>, &str, Option<usize>) = match mode {
        WeightMode::Exact => {
            let eig = diagonalize(rep)?;
            let o = idx
                .iter()
                .map(|&e| overlap_index(state, rep, &eig, e))
                .collect();
            (o, "statevector-exact", None)
        }
        WeightMode::Pauli => {
            let sets = pauli_shortcut(rep).ok_or(Error::NoPauliShortcut)?;
            let o = idx
                .iter()
                .map(|&e| overlap_pauli(state, &sets[e].1).map(|v| C64::new(v, 0.0)))
                .collect::<Result<_>>()?;
            (o, "statevector-pauli", None)
        }
        WeightMode::Sampled { shots, seed } => {
            if shots == 0 {
                return Err(Error::Invalid("shots must be at least 1".into()));
            }
            let eig = diagonalize(rep)?;
            let identity = group.identity();
            let shared = idx.iter().all(|&e| eig.is_diagonal(e));
            let mut o = Vec::with_capacity(idx.len());
            if shared {
                let dist = sampler(state)?;
                let mut rng = element_rng(seed, 0);
                let draws: Vec<usize> = (0..shots).map(|_| dist.sample(&mut rng)).collect();
                for (k, &e) in idx.iter().enumerate() {
                    if k == identity {
                        o.push(ONE);
                        continue;
                    }
                    let phases = eig.orbital_phases(rep, e);
                    let stats = phase_statistics(
                        draws.iter().map(|&z| occupation_phase(z, &phases)),
                        shots,
                    );
                    o.push(stats.estimate);
                }
            } else {
                for (k, &e) in idx.iter().enumerate() {
                    if k == identity {
                        o.push(ONE);
                    } else {
                        o.push(sampled_index(state, rep, &eig, e, shots, seed)?.estimate);
                    }
                }
            }
            (o, "statevector-sampled", Some(shots))
        }
    };
    let mut report = weights_from_ordered(group, &overlaps, backend);
    report.shots = shots;
    Ok(report)
}

/// `P_irrep |psi>` as an explicit character-weighted sum of rotated states,
/// together with its norm.
pub fn project(
    state: &FockState,
    group: &PointGroup,
    rep: &RepSet,
    irrep: &str,
) -> Result<(FockState, f64)> {
    check_dims(state, rep)?;
    let g = group.table.irrep_index(irrep)?;
    let idx = rep.align(group)?;
    let scale = group.table.irreps[g].dim as f64 / group.order() as f64;
    let mut out = state.scaled(ZERO);
    for (k, &e) in idx.iter().enumerate() {
        let coeff = group.character(g, k).conj() * scale;
        if coeff == ZERO {
            continue;
        }
        let d = rep.matrix(e);
        if linalg::is_exact_identity(&d) {
            out.add_scaled(state, coeff);
        } else {
            out.add_scaled(&ExteriorPower::new(&d).apply(state, Spin::Both), coeff);
        }
    }
    let norm = out.norm();
    Ok((out, norm))
}
