//! Jordan-Wigner statevector backend.
//!
//! Qubit `2p + s` holds spatial orbital `p` with spin `s` (0 = up, 1 = down),
//! and qubit `k` is bit `k` of the basis-state index. A basis state is the
//! ascending-mode product `c†_{k1} c†_{k2} ... |0>` with `k1 < k2 < ...`.

mod hamiltonian;
mod overlap;
mod rotation;
mod ucj;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};

pub use hamiltonian::{filter, FciHamiltonian, DEFAULT_FILTER_MAX_SPATIAL};
pub use overlap::{
    overlap_pauli, overlap_ug, overlap_ug_direct, project, sampled_overlap, weights,
    SampledOverlap, WeightMode,
};
pub use rotation::{apply_orbital_rotation, ExteriorPower};
pub use ucj::{apply_ucj, UcjLayer, UcjParams};

/// Which spin sector(s) a one-body operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
    Both,
}

/// Qubit index of spatial orbital `p` with spin `s` (0 = up, 1 = down).
pub const fn qubit(p: usize, s: usize) -> usize {
    2 * p + s
}

/// Complex amplitudes over `4^n_spatial` Jordan-Wigner basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_spatial: usize,
    amps: Vec<C64>,
}

impl FockState {
    pub fn new(n_spatial: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = 1usize
            .checked_shl(2 * n_spatial as u32)
            .ok_or_else(|| Error::Dimension(format!("n_spatial = {n_spatial} is too large")))?;
        if amps.len() != dim {
            return Err(Error::Dimension(format!(
                "{} amplitudes for n_spatial = {n_spatial} (expected {dim})",
                amps.len()
            )));
        }
        Ok(Self { n_spatial, amps })
    }

    pub fn vacuum(n_spatial: usize) -> Self {
        Self::basis(n_spatial, 0)
    }

    pub fn basis(n_spatial: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << (2 * n_spatial)];
        amps[index] = linalg::ONE;
        Self { n_spatial, amps }
    }

    /// `prod_{p in up} c†_{p up} prod_{q in down} c†_{q down} |0>`, both products
    /// ascending, expressed in the interleaved basis.
    pub fn from_occupations(n_spatial: usize, up: &[usize], down: &[usize]) -> Result<Self> {
        let mut a = 0usize;
        let mut b = 0usize;
        for (mask, list) in [(&mut a, up), (&mut b, down)] {
            for &p in list {
                if p >= n_spatial || *mask & (1 << p) != 0 {
                    return Err(Error::Invalid(format!(
                        "orbital {} is out of range or repeated",
                        p + 1
                    )));
                }
                *mask |= 1 << p;
            }
        }
        let mut s = Self::basis(n_spatial, interleave(a, b));
        s.amps[interleave(a, b)] *= blocked_sign(a, b);
        Ok(s)
    }

    pub fn random<R: Rng + ?Sized>(n_spatial: usize, rng: &mut R) -> Self {
        Self {
            n_spatial,
            amps: linalg::random_unit_vector(1 << (2 * n_spatial), rng),
        }
    }

    /// Random normalized state supported on the `(n_up, n_down)` sector only.
    pub fn random_in_sector<R: Rng + ?Sized>(
        n_spatial: usize,
        n_up: usize,
        n_down: usize,
        rng: &mut R,
    ) -> Self {
        let mut amps = vec![ZERO; 1 << (2 * n_spatial)];
        for (idx, z) in amps.iter_mut().enumerate() {
            let (a, b) = split(idx);
            if a.count_ones() as usize == n_up && b.count_ones() as usize == n_down {
                *z = linalg::complex_gaussian(rng);
            }
        }
        let mut s = Self { n_spatial, amps };
        s.normalize();
        s
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scales to unit norm; returns the previous norm.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.amps {
                *z /= n;
            }
        }
        n
    }

    pub fn inner(&self, other: &Self) -> C64 {
        linalg::vdot(&self.amps, &other.amps)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            n_spatial: self.n_spatial,
            amps: self.amps.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: C64) {
        for (z, w) in self.amps.iter_mut().zip(&other.amps) {
            *z += w * s;
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `(n_up, n_down)` when every nonzero amplitude (above `tol`) shares it.
    pub fn sector(&self, tol: f64) -> Option<(usize, usize)> {
        let mut found = None;
        for (idx, z) in self.amps.iter().enumerate() {
            if z.norm() > tol {
                let (a, b) = split(idx);
                let s = (a.count_ones() as usize, b.count_ones() as usize);
                match found {
                    None => found = Some(s),
                    Some(f) if f != s => return None,
                    _ => {}
                }
            }
        }
        found
    }

    /// Amplitudes under the blocked ordering (all up modes, then all down
    /// modes), including the fermionic reordering sign.
    pub fn to_blocked(&self) -> Vec<C64> {
        let n = self.n_spatial;
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &z) in self.amps.iter().enumerate() {
            let (a, b) = split(idx);
            out[a | (b << n)] = z * blocked_sign(a, b);
        }
        out
    }

    /// Inverse of [`FockState::to_blocked`].
    pub fn from_blocked(n_spatial: usize, blocked: &[C64]) -> Result<Self> {
        let mut s = Self::new(n_spatial, vec![ZERO; blocked.len()])?;
        let mask = (1usize << n_spatial) - 1;
        for (k, &z) in blocked.iter().enumerate() {
            let (a, b) = (k & mask, k >> n_spatial);
            s.amps[interleave(a, b)] = z * blocked_sign(a, b);
        }
        Ok(s)
    }
}

/// Splits an interleaved index into (up mask, down mask) over spatial orbitals.
pub fn split(idx: usize) -> (usize, usize) {
    (compact(idx), compact(idx >> 1))
}

/// Inverse of [`split`].
pub fn interleave(up: usize, down: usize) -> usize {
    spread(up) | (spread(down) << 1)
}

fn compact(mut x: usize) -> usize {
    let mut out = 0;
    let mut bit = 0;
    while x != 0 {
        out |= (x & 1) << bit;
        x >>= 2;
        bit += 1;
    }
    out
}

fn spread(mut x: usize) -> usize {
    let mut out = 0;
    let mut bit = 0;
    while x != 0 {
        out |= (x & 1) << (2 * bit);
        x >>= 1;
        bit += 1;
    }
    out
}

/// Sign relating the interleaved basis state to the blocked product
/// `(prod_up c†)(prod_down c†)|0>`: each occupied up orbital passes the down
/// electrons on lower orbitals.
pub fn blocked_sign(up: usize, down: usize) -> f64 {
    let mut swaps = 0u32;
    let mut a = up;
    while a != 0 {
        let p = a.trailing_zeros();
        swaps += (down & ((1usize << p) - 1)).count_ones();
        a &= a - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Jordan-Wigner parity of the modes below `mode`.
#[inline]
pub(crate) fn parity_below(x: usize, mode: usize) -> f64 {
    if (x & ((1usize << mode) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Size limit from `PSYM_MAX_QUBITS`, falling back to `default`.
pub fn max_qubits_from_env(default: usize) -> usize {
    std::env::var("PSYM_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}
