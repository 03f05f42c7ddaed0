use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ZERO};

use super::{FockState, Spin};

/// Action of a one-body rotation `c†_p -> sum_q U_qp c†_q` on every
/// particle-number sector of one spin species: the matrices of `k x k` minors
/// `det U[rows, cols]` for all `k`.
#[derive(Debug, Clone)]
pub struct ExteriorPower {
    n: usize,
    // masks[k]: orbital masks with popcount k, ascending
    masks: Vec<Vec<usize>>,
    // minors[k][(row, col)] = det U[masks[k][row], masks[k][col]]
    minors: Vec<CMat>,
}

impl ExteriorPower {
    pub fn new(u: &CMat) -> Self {
        let n = u.nrows();
        let mut masks = vec![Vec::new(); n + 1];
        for m in 0..(1usize << n) {
            masks[m.count_ones() as usize].push(m);
        }
        let minors = masks
            .iter()
            .enumerate()
            .map(|(k, list)| {
                let bits: Vec<Vec<usize>> = list.iter().map(|&m| mask_bits(m)).collect();
                CMat::from_fn(list.len(), list.len(), |r, c| {
                    if k == 0 {
                        return linalg::ONE;
                    }
                    let sub = CMat::from_fn(k, k, |i, j| u[(bits[r][i], bits[c][j])]);
                    sub.determinant()
                })
            })
            .collect();
        Self { n, masks, minors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies the rotation to the selected spin species of `state`.
    pub fn apply(&self, state: &FockState, spin: Spin) -> FockState {
        let n = self.n;
        let mut c = state.to_blocked();
        let (up, down) = match spin {
            Spin::Up => (true, false),
            Spin::Down => (false, true),
            Spin::Both => (true, true),
        };
        if up {
            for b in 0..(1usize << n) {
                self.rotate_lane(&mut c, |a| a | (b << n));
            }
        }
        if down {
            for a in 0..(1usize << n) {
                self.rotate_lane(&mut c, |b| a | (b << n));
            }
        }
        FockState::from_blocked(n, &c).expect("dimension preserved")
    }

    fn rotate_lane(&self, c: &mut [C64], index: impl Fn(usize) -> usize) {
        let mut x = Vec::new();
        for (list, minor) in self.masks.iter().zip(&self.minors) {
            x.clear();
            x.extend(list.iter().map(|&m| c[index(m)]));
            if x.iter().all(|z| *z == ZERO) {
                continue;
            }
            for (row, &m) in list.iter().enumerate() {
                let mut acc = ZERO;
                for (col, xv) in x.iter().enumerate() {
                    acc += minor[(row, col)] * xv;
                }
                c[index(m)] = acc;
            }
        }
    }
}

fn mask_bits(m: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&b| m & (1 << b) != 0).collect()
}

/// Applies the orbital rotation generated by unitary `u` to one or both spin
/// species. Particle numbers per spin are preserved.
pub fn apply_orbital_rotation(state: &FockState, u: &CMat, spin: Spin) -> Result<FockState> {
    let n = state.n_spatial();
    if u.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "rotation is {}x{} but the state has {n} spatial orbitals",
            u.nrows(),
            u.ncols()
        )));
    }
    linalg::ensure_unitary(u, 1e-8, "orbital rotation")?;
    Ok(ExteriorPower::new(u).apply(state, spin))
}
