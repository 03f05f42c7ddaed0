//! Small dense linear-algebra helpers shared by the backends.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Max-entry deviation of `m† m` from the identity.
pub fn unitarity_residual(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    unitarity_residual_of_gram(&(m.adjoint() * m))
}

/// Max-entry deviation of a Gram matrix from the identity.
pub fn unitarity_residual_of_gram(g: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn ensure_unitary(m: &CMat, tol: f64, context: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "{context}: expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let residual = unitarity_residual(m);
    if residual > tol {
        return Err(Error::NotUnitary {
            context: context.to_string(),
            residual,
        });
    }
    Ok(())
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_exact_identity(m: &CMat) -> bool {
    m.is_square()
        && m.iter().enumerate().all(|(k, &v)| {
            let (i, j) = (k % m.nrows(), k / m.nrows());
            v == if i == j { ONE } else { ZERO }
        })
}

/// Maps an angle onto (-pi, pi], sending the -pi end of `atan2` to +pi.
pub fn principal_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI + 1e-12 {
        p = PI;
    }
    p
}

/// Rotates `v` by a global phase so its first largest-magnitude entry is real positive.
pub fn fix_vector_phase(v: &mut [C64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() >= max - 1e-12)
        .copied()
        .expect("nonempty");
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

fn round_key(z: C64) -> (i64, i64) {
    ((z.re * 1e12).round() as i64, (z.im * 1e12).round() as i64)
}

/// Eigen-decomposition of a unitary matrix, `m = V diag(e^{i phi}) V†`.
///
/// Eigenpairs are ordered by phase ascending; ties are broken by lexicographic
/// comparison of the rounded eigenvector entries. Each eigenvector's first
/// largest entry is made real positive.
pub fn unitary_eigen(m: &CMat) -> Result<(CMat, Vec<f64>)> {
    ensure_unitary(m, 1e-8, "eigen-decomposition input")?;
    let n = m.nrows();
    if n == 0 {
        return Ok((CMat::zeros(0, 0), Vec::new()));
    }
    let (q, t) = m.clone().schur().unpack();
    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<C64> = q.column(k).iter().copied().collect();
            fix_vector_phase(&mut v);
            (principal_phase(t[(k, k)].arg()), v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        if (a.0 - b.0).abs() > 1e-10 {
            return a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal);
        }
        let ka: Vec<_> = a.1.iter().map(|&z| round_key(z)).collect();
        let kb: Vec<_> = b.1.iter().map(|&z| round_key(z)).collect();
        ka.cmp(&kb)
    });
    let mut v = CMat::zeros(n, n);
    let mut phases = Vec::with_capacity(n);
    for (k, (phi, vec)) in pairs.into_iter().enumerate() {
        for (i, z) in vec.into_iter().enumerate() {
            v[(i, k)] = z;
        }
        phases.push(phi);
    }
    Ok((v, phases))
}

/// Rebuilds `V diag(e^{i phi}) V†`.
pub fn from_eigen(v: &CMat, phases: &[f64]) -> CMat {
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| C64::from_polar(1.0, p)),
    ));
    v * d * v.adjoint()
}

/// Thin SVD with singular values sorted in descending order.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v_t: CMat,
}

pub fn svd_sorted(m: &CMat) -> Svd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Svd {
            u: CMat::zeros(rows, 0),
            s: Vec::new(),
            v_t: CMat::zeros(0, cols),
        };
    }
    // nalgebra's complex SVD loses accuracy on widely spread spectra
    let a = faer::Mat::<C64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    match a.thin_svd() {
        Ok(svd) => {
            let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
            Svd {
                u: CMat::from_fn(rows, k, |i, j| u[(i, j)]),
                s: (0..k).map(|j| s[j].re).collect(),
                v_t: CMat::from_fn(k, cols, |i, j| v[(j, i)].conj()),
            }
        }
        Err(_) => svd_nalgebra(m),
    }
}

fn svd_nalgebra(m: &CMat) -> Svd {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(Ordering::Equal)
    });
    let k = order.len();
    let mut su = CMat::zeros(u.nrows(), k);
    let mut sv = CMat::zeros(k, v_t.ncols());
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        su.set_column(dst, &u.column(src));
        sv.set_row(dst, &v_t.row(src));
        s.push(svd.singular_values[src]);
    }
    Svd { u: su, s, v_t: sv }
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| complex_gaussian(rng));
    let (q, r) = g.qr().unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Unit vector with i.i.d. complex Gaussian entries.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Block-diagonal embedding: entry `(idx[i], idx[j]) = block[(i, j)]`.
pub fn embed_block(target: &mut CMat, idx: &[usize], block: &CMat) {
    for (i, &r) in idx.iter().enumerate() {
        for (j, &c) in idx.iter().enumerate() {
            target[(r, c)] = block[(i, j)];
        }
    }
}
