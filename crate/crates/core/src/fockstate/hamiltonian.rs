use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

use super::{parity_below, qubit, split, FockState};

/// Default largest number of spatial orbitals accepted by [`filter`].
pub const DEFAULT_FILTER_MAX_SPATIAL: usize = 8;

const SYMMETRY_TOL: f64 = 1e-10;

/// Second-quantized electronic Hamiltonian with real orbitals:
/// `E_core + sum h_pq c†_p c_q + 1/2 sum (pq|rs) c†_p c†_r c_s c_q`
/// (spin summed, chemists' notation).
#[derive(Debug, Clone, PartialEq)]
pub struct FciHamiltonian {
    n_spatial: usize,
    core: f64,
    h: DMatrix<f64>,
    // (pq|rs) at ((p n + q) n + r) n + s
    eri: Vec<f64>,
}

impl FciHamiltonian {
    /// Builds from full arrays, which must carry the 8-fold index symmetry.
    pub fn new(n_spatial: usize, core: f64, h: DMatrix<f64>, eri: Vec<f64>) -> Result<Self> {
        let n = n_spatial;
        if h.shape() != (n, n) || eri.len() != n * n * n * n {
            return Err(Error::Dimension(format!(
                "integrals do not match {n} spatial orbitals"
            )));
        }
        if (&h - h.transpose()).amax() > SYMMETRY_TOL {
            return Err(Error::Invalid("one-electron integrals are not symmetric".into()));
        }
        let at = |p: usize, q: usize, r: usize, s: usize| eri[((p * n + q) * n + r) * n + s];
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = at(p, q, r, s);
                        for w in [at(q, p, r, s), at(p, q, s, r), at(r, s, p, q)] {
                            if (v - w).abs() > SYMMETRY_TOL {
                                return Err(Error::Invalid(format!(
                                    "two-electron integrals break index symmetry at ({},{}|{},{})",
                                    p + 1,
                                    q + 1,
                                    r + 1,
                                    s + 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            n_spatial,
            core,
            h,
            eri,
        })
    }

    pub fn zeros(n_spatial: usize) -> Self {
        Self {
            n_spatial,
            core: 0.0,
            h: DMatrix::zeros(n_spatial, n_spatial),
            eri: vec![0.0; n_spatial.pow(4)],
        }
    }

    pub fn one_body(n_spatial: usize, core: f64, h: DMatrix<f64>) -> Result<Self> {
        Self::new(n_spatial, core, h, vec![0.0; n_spatial.pow(4)])
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn core(&self) -> f64 {
        self.core
    }

    pub fn set_core(&mut self, core: f64) {
        self.core = core;
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial;
        self.eri[((p * n + q) * n + r) * n + s]
    }

    /// Sets `h_pq` and `h_qp`.
    pub fn set_one(&mut self, p: usize, q: usize, v: f64) {
        self.h[(p, q)] = v;
        self.h[(q, p)] = v;
    }

    /// Sets `(pq|rs)` and its seven symmetry partners.
    pub fn set_two(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let n = self.n_spatial;
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.eri[((a * n + b) * n + c) * n + d] = v;
        }
    }

    /// Integrals in the orbital basis given by the real columns of `c`.
    pub fn transformed(&self, c: &DMatrix<f64>) -> Result<Self> {
        let n = self.n_spatial;
        if c.shape() != (n, n) {
            return Err(Error::Dimension("orbital coefficients must be n x n".into()));
        }
        let h = c.transpose() * &self.h * c;
        // four quarter transformations
        let mut t = self.eri.clone();
        for axis in 0..4 {
            let mut out = vec![0.0; t.len()];
            for (i, slot) in out.iter_mut().enumerate() {
                let mut idx = [i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n];
                let new = idx[axis];
                let mut acc = 0.0;
                for old in 0..n {
                    idx[axis] = old;
                    let k = ((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3];
                    acc += c[(old, new)] * t[k];
                }
                *slot = acc;
            }
            t = out;
        }
        let mut res = Self {
            n_spatial: n,
            core: self.core,
            h: (&h + h.transpose()) * 0.5,
            eri: t,
        };
        res.symmetrize();
        Ok(res)
    }

    fn symmetrize(&mut self) {
        let n = self.n_spatial;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let avg = (self.eri(p, q, r, s)
                            + self.eri(q, p, r, s)
                            + self.eri(p, q, s, r)
                            + self.eri(q, p, s, r)
                            + self.eri(r, s, p, q)
                            + self.eri(s, r, p, q)
                            + self.eri(r, s, q, p)
                            + self.eri(s, r, q, p))
                            / 8.0;
                        self.set_two(p, q, r, s, avg);
                    }
                }
            }
        }
    }

    /// `H|x>` for a single interleaved basis state, as (index, coefficient) terms.
    pub fn apply_to_basis(&self, x: usize) -> Vec<(usize, f64)> {
        let n = self.n_spatial;
        let mut out = vec![(x, self.core)];
        for sq in 0..2 * n {
            let (q, sigma) = (sq / 2, sq % 2);
            if x & (1 << sq) == 0 {
                continue;
            }
            let s1 = parity_below(x, sq);
            let x1 = x ^ (1 << sq);
            for p in 0..n {
                let mp = qubit(p, sigma);
                let v = self.h[(p, q)];
                if v == 0.0 || x1 & (1 << mp) != 0 {
                    continue;
                }
                out.push((x1 | (1 << mp), v * s1 * parity_below(x1, mp)));
            }
            for ms in 0..2 * n {
                let (s, tau) = (ms / 2, ms % 2);
                if x1 & (1 << ms) == 0 {
                    continue;
                }
                let s2 = s1 * parity_below(x1, ms);
                let x2 = x1 ^ (1 << ms);
                for r in 0..n {
                    let mr = qubit(r, tau);
                    if x2 & (1 << mr) != 0 {
                        continue;
                    }
                    let s3 = s2 * parity_below(x2, mr);
                    let x3 = x2 | (1 << mr);
                    for p in 0..n {
                        let mp = qubit(p, sigma);
                        let v = self.eri(p, q, r, s);
                        if v == 0.0 || x3 & (1 << mp) != 0 {
                            continue;
                        }
                        out.push((x3 | (1 << mp), 0.5 * v * s3 * parity_below(x3, mp)));
                    }
                }
            }
        }
        out
    }

    fn check(&self, state: &FockState) -> Result<()> {
        if state.n_spatial() != self.n_spatial {
            return Err(Error::Dimension(format!(
                "state has {} spatial orbitals, Hamiltonian has {}",
                state.n_spatial(),
                self.n_spatial
            )));
        }
        Ok(())
    }

    /// `H|psi>`.
    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        self.check(state)?;
        let mut out = vec![ZERO; state.amplitudes().len()];
        for (x, &z) in state.amplitudes().iter().enumerate() {
            if z == ZERO {
                continue;
            }
            for (y, v) in self.apply_to_basis(x) {
                out[y] += z * v;
            }
        }
        FockState::new(self.n_spatial, out)
    }

    /// `<psi|H|psi>`.
    pub fn energy(&self, state: &FockState) -> Result<f64> {
        let e = state.inner(&self.apply(state)?);
        if e.im.abs() > 1e-8 * e.re.abs().max(1.0) {
            return Err(Error::Invalid(format!(
                "energy has imaginary part {:.3e}",
                e.im
            )));
        }
        Ok(e.re)
    }

    /// Basis indices and dense matrix of the `(n_up, n_down)` sector.
    pub fn sector_matrix(&self, n_up: usize, n_down: usize) -> (Vec<usize>, DMatrix<f64>) {
        let basis: Vec<usize> = (0..1usize << (2 * self.n_spatial))
            .filter(|&x| {
                let (a, b) = split(x);
                a.count_ones() as usize == n_up && b.count_ones() as usize == n_down
            })
            .collect();
        let mut pos = vec![usize::MAX; 1 << (2 * self.n_spatial)];
        for (k, &x) in basis.iter().enumerate() {
            pos[x] = k;
        }
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (col, &x) in basis.iter().enumerate() {
            for (y, v) in self.apply_to_basis(x) {
                m[(pos[y], col)] += v;
            }
        }
        (basis, (&m + m.transpose()) * 0.5)
    }

    /// Ascending eigenvalues of the `(n_up, n_down)` sector.
    pub fn sector_spectrum(&self, n_up: usize, n_down: usize) -> Vec<f64> {
        let (_, m) = self.sector_matrix(n_up, n_down);
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// Keeps the eigencomponents of `state` with energy below `cutoff`, using a
/// dense diagonalization of each particle-number sector. The result is not
/// renormalized.
pub fn filter(
    state: &FockState,
    ham: &FciHamiltonian,
    cutoff: f64,
    max_spatial: usize,
) -> Result<FockState> {
    ham.check(state)?;
    let n = state.n_spatial();
    if n > max_spatial {
        return Err(Error::SizeGuard {
            what: "filter spatial orbitals",
            value: n,
            limit: max_spatial,
        });
    }
    let mut out = vec![ZERO; state.amplitudes().len()];
    for n_up in 0..=n {
        for n_down in 0..=n {
            let (basis, m) = ham.sector_matrix(n_up, n_down);
            let psi: Vec<C64> = basis.iter().map(|&x| state.amplitudes()[x]).collect();
            if psi.iter().all(|z| *z == ZERO) {
                continue;
            }
            let eig = SymmetricEigen::new(m);
            let re = DVector::from_iterator(psi.len(), psi.iter().map(|z| z.re));
            let im = DVector::from_iterator(psi.len(), psi.iter().map(|z| z.im));
            for (k, &e) in eig.eigenvalues.iter().enumerate() {
                if e >= cutoff {
                    continue;
                }
                let v = eig.eigenvectors.column(k);
                let c = C64::new(v.dot(&re), v.dot(&im));
                for (i, &x) in basis.iter().enumerate() {
                    out[x] += c * v[i];
                }
            }
        }
    }
    FockState::new(n, out)
}
