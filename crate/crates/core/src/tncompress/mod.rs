//! Matrix product states over qubits and brick-wall circuit compression.
//!
//! Site `p` is qubit `p`, i.e. bit `p` of a statevector index. Tensors are
//! stored as `[left][physical][right]`, row-major.

mod circuit;
mod optimize;

use crate::error::{Error, Result};
use crate::fockstate::FockState;
use crate::linalg::{self, CMat, C64, ONE, ZERO};

pub use circuit::{gate_count, gate_qubits, BrickWallCircuit};
pub use optimize::{
    compress, environment, infidelity, svd_update, CompressOptions, CompressResult, Init,
};

/// Default largest qubit count accepted by [`Mps::to_statevector`].
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Singular values at or below this fraction of the largest are dropped.
const SVD_CUTOFF: f64 = 1e-14;

/// One MPS tensor `A[left][physical][right]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTensor {
    pub left: usize,
    pub right: usize,
    pub data: Vec<C64>,
}

impl SiteTensor {
    pub fn new(left: usize, right: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != left * 2 * right {
            return Err(Error::Dimension(format!(
                "site tensor {left}x2x{right} given {} entries",
                data.len()
            )));
        }
        Ok(Self { left, right, data })
    }

    #[inline]
    pub fn get(&self, a: usize, s: usize, b: usize) -> C64 {
        self.data[(a * 2 + s) * self.right + b]
    }

    /// `(left * 2) x right` matrix.
    fn as_left_grouped(&self) -> CMat {
        CMat::from_row_slice(self.left * 2, self.right, &self.data)
    }

    /// `left x (2 * right)` matrix.
    fn as_right_grouped(&self) -> CMat {
        CMat::from_row_slice(self.left, 2 * self.right, &self.data)
    }

    fn from_left_grouped(m: &CMat) -> Self {
        Self {
            left: m.nrows() / 2,
            right: m.ncols(),
            data: row_major(m),
        }
    }

    fn from_right_grouped(m: &CMat) -> Self {
        Self {
            left: m.nrows(),
            right: m.ncols() / 2,
            data: row_major(m),
        }
    }

    /// Deviation of `sum_{s,b} A[a,s,b] conj(A[a',s,b])` from the identity.
    pub fn right_normalization_residual(&self) -> f64 {
        let m = self.as_right_grouped();
        linalg::unitarity_residual_of_gram(&(&m * m.adjoint()))
    }
}

fn row_major(m: &CMat) -> Vec<C64> {
    let mut v = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            v.push(m[(i, j)]);
        }
    }
    v
}

/// Thin SVD keeping at most `chi` values above the relative cutoff.
/// Returns `(U, s, V†, discarded weight)`.
pub(crate) fn truncated_svd(m: &CMat, chi: usize) -> (CMat, Vec<f64>, CMat, f64) {
    let svd = linalg::svd_sorted(m);
    let top = svd.s.first().copied().unwrap_or(0.0);
    let keep = svd
        .s
        .iter()
        .take(chi)
        .take_while(|&&s| s > SVD_CUTOFF * top)
        .count()
        .max(1);
    let discarded = svd.s[keep..].iter().map(|s| s * s).sum();
    (
        svd.u.columns(0, keep).into_owned(),
        svd.s[..keep].to_vec(),
        svd.v_t.rows(0, keep).into_owned(),
        discarded,
    )
}

/// Open-boundary matrix product state of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Mps {
    sites: Vec<SiteTensor>,
    // orthogonality center: sites left of it are left-normalized, right of it right-normalized
    center: Option<usize>,
}

impl Mps {
    pub fn new(sites: Vec<SiteTensor>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Invalid("an MPS needs at least one site".into()));
        }
        if sites[0].left != 1 || sites[sites.len() - 1].right != 1 {
            return Err(Error::Dimension("boundary bonds must be 1".into()));
        }
        for (p, w) in sites.windows(2).enumerate() {
            if w[0].right != w[1].left {
                return Err(Error::Dimension(format!(
                    "bond between sites {} and {} does not match",
                    p + 1,
                    p + 2
                )));
            }
        }
        Ok(Self {
            sites,
            center: None,
        })
    }

    /// `|0...0>` on `n_qubits` sites.
    pub fn vacuum(n_qubits: usize) -> Self {
        let site = SiteTensor {
            left: 1,
            right: 1,
            data: vec![ONE, ZERO],
        };
        Self {
            sites: vec![site; n_qubits],
            center: Some(0),
        }
    }

    /// Right-normalized MPS of a qubit statevector by right-to-left SVDs;
    /// returns the MPS and the discarded weight. The result is renormalized.
    pub fn from_amplitudes(amps: &[C64], chi: usize) -> Result<(Self, f64)> {
        if chi < 1 {
            return Err(Error::Invalid("bond dimension must be at least 1".into()));
        }
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n || n == 0 {
            return Err(Error::Dimension(format!(
                "statevector length {} is not a power of two",
                amps.len()
            )));
        }
        let mut sites = vec![
            SiteTensor {
                left: 1,
                right: 1,
                data: vec![]
            };
            n
        ];
        let mut discarded = 0.0;
        // rows: sites 0..=p as a little-endian index; columns: right bond
        let mut rest = CMat::from_column_slice(amps.len(), 1, amps);
        for p in (1..n).rev() {
            let rows = 1usize << p;
            let m = rest.ncols();
            let reshaped = CMat::from_fn(rows, 2 * m, |r, c| rest[(r + (c / m) * rows, c % m)]);
            let (u, s, vt, d) = truncated_svd(&reshaped, chi);
            discarded += d;
            sites[p] = SiteTensor::from_right_grouped(&vt);
            rest = u * CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                s.len(),
                s.iter().map(|&x| C64::new(x, 0.0)),
            ));
        }
        let norm = rest.norm();
        if norm == 0.0 {
            return Err(Error::Invalid("cannot build an MPS of the zero vector".into()));
        }
        sites[0] = SiteTensor {
            left: 1,
            right: rest.ncols(),
            data: row_major(&(rest / C64::new(norm, 0.0))),
        };
        Ok((
            Self {
                sites,
                center: Some(0),
            },
            discarded,
        ))
    }

    pub fn from_fock(state: &FockState, chi: usize) -> Result<(Self, f64)> {
        Self::from_amplitudes(state.amplitudes(), chi)
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SiteTensor] {
        &self.sites
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.right).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.sites.iter().map(|s| s.right).max().unwrap_or(1)
    }

    pub fn is_right_normalized(&self) -> bool {
        self.center == Some(0)
    }

    /// Exact contraction into `2^n` amplitudes.
    pub fn to_amplitudes(&self, max_qubits: usize) -> Result<Vec<C64>> {
        let n = self.n_sites();
        if n > max_qubits {
            return Err(Error::SizeGuard {
                what: "statevector qubits",
                value: n,
                limit: max_qubits,
            });
        }
        // v[r][m]: r indexes sites 0..p, m the bond to the right
        let first = &self.sites[0];
        let mut v = CMat::from_fn(2, first.right, |s, b| first.get(0, s, b));
        for site in &self.sites[1..] {
            let rows = v.nrows();
            let mut next = CMat::zeros(rows * 2, site.right);
            for s in 0..2 {
                let slice = CMat::from_fn(site.left, site.right, |a, b| site.get(a, s, b));
                let block = &v * slice;
                next.rows_mut(s * rows, rows).copy_from(&block);
            }
            v = next;
        }
        Ok(v.column(0).iter().copied().collect())
    }

    /// Contraction into a Fock state; the site count must be even.
    pub fn to_fock(&self, max_qubits: usize) -> Result<FockState> {
        if !self.n_sites().is_multiple_of(2) {
            return Err(Error::Dimension("odd number of qubits".into()));
        }
        FockState::new(self.n_sites() / 2, self.to_amplitudes(max_qubits)?)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.n_sites() != other.n_sites() {
            return Err(Error::Dimension(format!(
                "MPS with {} and {} sites",
                self.n_sites(),
                other.n_sites()
            )));
        }
        let mut env = CMat::from_element(1, 1, ONE);
        for (a, b) in self.sites.iter().zip(&other.sites) {
            env = transfer(&env, a, b);
        }
        Ok(env[(0, 0)])
    }

    pub fn norm(&self) -> f64 {
        self.overlap(self).map(|z| z.re.max(0.0).sqrt()).unwrap_or(0.0)
    }

    fn move_center_right(&mut self, p: usize) {
        let m = self.sites[p].as_left_grouped();
        let qr = m.qr();
        let (q, r) = (qr.q(), qr.r());
        self.sites[p] = SiteTensor::from_left_grouped(&q);
        let next = &self.sites[p + 1];
        let merged = &r * next.as_right_grouped();
        self.sites[p + 1] = SiteTensor::from_right_grouped(&merged);
    }

    fn move_center_left(&mut self, p: usize) {
        let m = self.sites[p].as_right_grouped();
        let qr = m.adjoint().qr();
        let (q, r) = (qr.q(), qr.r());
        self.sites[p] = SiteTensor::from_right_grouped(&q.adjoint());
        let prev = &self.sites[p - 1];
        let merged = prev.as_left_grouped() * r.adjoint();
        self.sites[p - 1] = SiteTensor::from_left_grouped(&merged);
    }

    /// Brings the orthogonality center to site `p`.
    pub fn move_center(&mut self, p: usize) {
        let c = match self.center {
            Some(c) => c,
            None => {
                for q in (1..self.n_sites()).rev() {
                    self.move_center_left(q);
                }
                0
            }
        };
        for q in c..p {
            self.move_center_right(q);
        }
        for q in ((p + 1)..=c).rev() {
            self.move_center_left(q);
        }
        self.center = Some(p);
    }

    /// Right-normalizes every site and scales to unit norm.
    pub fn canonicalize(&mut self) {
        self.center = None;
        self.move_center(0);
        let n = self.sites[0].data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            for z in &mut self.sites[0].data {
                *z /= n;
            }
        }
    }

    /// Applies a two-qubit gate to sites `(p, q)` with `q = p + 1`, local
    /// index `2 t_p + t_q`. Keeps at most `chi` singular values and
    /// renormalizes; returns the discarded weight.
    pub fn apply_gate(&mut self, gate: &CMat, p: usize, q: usize, chi: usize) -> Result<f64> {
        if q != p + 1 || q >= self.n_sites() {
            return Err(Error::Invalid(format!(
                "gate sites {} and {} are not adjacent sites of the chain",
                p + 1,
                q + 1
            )));
        }
        if gate.shape() != (4, 4) {
            return Err(Error::Dimension("two-qubit gates are 4x4".into()));
        }
        if chi < 1 {
            return Err(Error::Invalid("bond dimension must be at least 1".into()));
        }
        self.move_center(p);
        let (a, b) = (&self.sites[p], &self.sites[q]);
        let (l, r) = (a.left, b.right);
        // theta[(al, s_p), (s_q, br)]
        let theta = a.as_left_grouped() * b.as_right_grouped();
        let mut out = CMat::zeros(l * 2, 2 * r);
        for al in 0..l {
            for br in 0..r {
                for x in 0..4 {
                    let mut acc = ZERO;
                    for y in 0..4 {
                        let g = gate[(x, y)];
                        if g != ZERO {
                            acc += g * theta[(al * 2 + y / 2, (y % 2) * r + br)];
                        }
                    }
                    out[(al * 2 + x / 2, (x % 2) * r + br)] = acc;
                }
            }
        }
        let (u, s, vt, discarded) = truncated_svd(&out, chi);
        let kept = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sv = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            s.len(),
            s.iter().map(|&x| C64::new(x / kept, 0.0)),
        )) * vt;
        self.sites[p] = SiteTensor::from_left_grouped(&u);
        self.sites[q] = SiteTensor::from_right_grouped(&sv);
        self.center = Some(q);
        Ok(discarded)
    }
}

/// `E'[b][b'] = sum_{a,a',s} conj(A[a,s,b]) E[a][a'] B[a',s,b']`.
pub(crate) fn transfer(env: &CMat, a: &SiteTensor, b: &SiteTensor) -> CMat {
    let mut out = CMat::zeros(a.right, b.right);
    for s in 0..2 {
        let sa = CMat::from_fn(a.left, a.right, |i, j| a.get(i, s, j));
        let sb = CMat::from_fn(b.left, b.right, |i, j| b.get(i, s, j));
        out += sa.adjoint() * env * sb;
    }
    out
}

#[cfg(test)]
mod tests;
