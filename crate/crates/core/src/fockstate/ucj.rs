use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64};

use super::rotation::ExteriorPower;
use super::{split, FockState, Spin};

/// One repetition: orbital rotation `U` and density-density couplings for
/// equal (`j_same`) and opposite (`j_anti`) spins.
#[derive(Debug, Clone, PartialEq)]
pub struct UcjLayer {
    pub u: CMat,
    pub j_same: DMatrix<f64>,
    pub j_anti: DMatrix<f64>,
}

/// Unitary cluster Jastrow parameters, `prod_r U_r exp(i J_r) U_r†`.
#[derive(Debug, Clone, PartialEq)]
pub struct UcjParams {
    n_spatial: usize,
    layers: Vec<UcjLayer>,
}

impl UcjParams {
    pub fn new(n_spatial: usize, layers: Vec<UcjLayer>) -> Result<Self> {
        for (r, layer) in layers.iter().enumerate() {
            let ctx = format!("UCJ repetition {}", r + 1);
            for shape in [layer.u.shape(), layer.j_same.shape(), layer.j_anti.shape()] {
                if shape != (n_spatial, n_spatial) {
                    return Err(Error::Dimension(format!(
                        "{ctx}: matrix is {shape:?}, expected {n_spatial}x{n_spatial}"
                    )));
                }
            }
            linalg::ensure_unitary(&layer.u, 1e-8, &ctx)?;
            for j in [&layer.j_same, &layer.j_anti] {
                if (j - j.transpose()).amax() > 1e-12 {
                    return Err(Error::Invalid(format!("{ctx}: J is not symmetric")));
                }
            }
        }
        Ok(Self { n_spatial, layers })
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn repetitions(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[UcjLayer] {
        &self.layers
    }

    /// Zeroes couplings outside the local (LUCJ) pattern: same-spin pairs
    /// `(p, p+1)` and opposite-spin pairs `(p, p)` for `p = 0, 4, 8, ...`.
    pub fn with_lucj_mask(mut self) -> Self {
        let n = self.n_spatial;
        for layer in &mut self.layers {
            for p in 0..n {
                for q in 0..n {
                    if p.abs_diff(q) != 1 {
                        layer.j_same[(p, q)] = 0.0;
                    }
                    if p != q || p % 4 != 0 {
                        layer.j_anti[(p, q)] = 0.0;
                    }
                }
            }
        }
        self
    }
}

/// Diagonal phase `1/2 sum_{ss'} sum_{mn} J^{ss'}_{mn} n_ms n_ns'` of a basis state.
fn jastrow_phase(idx: usize, layer: &UcjLayer, n: usize) -> f64 {
    let (a, b) = split(idx);
    let occ = |m: usize, p: usize| m >> p & 1 == 1;
    let mut theta = 0.0;
    for p in 0..n {
        for q in 0..n {
            let same = occ(a, p) as u8 * occ(a, q) as u8 + occ(b, p) as u8 * occ(b, q) as u8;
            theta += 0.5 * layer.j_same[(p, q)] * same as f64;
            if occ(a, p) && occ(b, q) {
                theta += layer.j_anti[(p, q)];
            }
        }
    }
    theta
}

/// Applies the UCJ operator to `reference`; the last repetition acts first.
pub fn apply_ucj(reference: &FockState, params: &UcjParams) -> Result<FockState> {
    let n = params.n_spatial;
    if reference.n_spatial() != n {
        return Err(Error::Dimension(format!(
            "state has {} spatial orbitals, UCJ parameters have {n}",
            reference.n_spatial()
        )));
    }
    let mut psi = reference.clone();
    for layer in params.layers.iter().rev() {
        psi = ExteriorPower::new(&layer.u.adjoint()).apply(&psi, Spin::Both);
        for (idx, z) in psi.amplitudes_mut().iter_mut().enumerate() {
            if *z != linalg::ZERO {
                *z *= C64::from_polar(1.0, jastrow_phase(idx, layer, n));
            }
        }
        psi = ExteriorPower::new(&layer.u).apply(&psi, Spin::Both);
    }
    Ok(psi)
}
