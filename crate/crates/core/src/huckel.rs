//! Hückel pi-electron model of an even planar ring, used as a built-in
//! symmetry fixture.
//!
//! Atom `a` sits at angle `pi/2 + 2 pi a / N` in the xy-plane and carries one
//! pz orbital. Molecular orbitals are the real ring combinations
//! `1/sqrt(N)`, `sqrt(2/N) cos(k theta_a)`, `sqrt(2/N) sin(k theta_a)` for
//! `0 < k < N/2`, and `(-1)^a / sqrt(N)`, in that order.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::fockstate::{FciHamiltonian, FockState};
use crate::linalg::{CMat, C64};
use crate::pointgroup::PointGroup;
use crate::representation::{from_basis_overlap, RepSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuckelRing {
    n: usize,
    alpha: f64,
    beta: f64,
}

impl HuckelRing {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if !n.is_multiple_of(2) || !(4..=12).contains(&n) {
            return Err(Error::Invalid(format!(
                "ring size must be even and between 4 and 12, got {n}"
            )));
        }
        Ok(Self { n, alpha, beta })
    }

    /// Benzene with `alpha = 0`, `beta = -1`.
    pub fn benzene() -> Self {
        Self {
            n: 6,
            alpha: 0.0,
            beta: -1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn site_angle(&self, a: usize) -> f64 {
        PI / 2.0 + 2.0 * PI * a as f64 / self.n as f64
    }

    /// Ring wavenumber of each molecular orbital.
    pub fn wavenumbers(&self) -> Vec<usize> {
        let half = self.n / 2;
        let mut k = vec![0];
        for j in 1..half {
            k.extend([j, j]);
        }
        k.push(half);
        k
    }

    pub fn orbital_energies(&self) -> Vec<f64> {
        self.wavenumbers()
            .into_iter()
            .map(|k| self.alpha + 2.0 * self.beta * (2.0 * PI * k as f64 / self.n as f64).cos())
            .collect()
    }

    /// Site-basis Hückel matrix.
    pub fn site_hamiltonian(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |a, b| {
            if a == b {
                self.alpha
            } else if (a + 1) % n == b || (b + 1) % n == a {
                self.beta
            } else {
                0.0
            }
        })
    }

    /// Molecular orbital coefficients, one column per orbital.
    pub fn coefficients(&self) -> DMatrix<f64> {
        let n = self.n;
        let half = n / 2;
        let norm = 1.0 / (n as f64).sqrt();
        let mut c = DMatrix::zeros(n, n);
        for a in 0..n {
            let theta = self.site_angle(a);
            c[(a, 0)] = norm;
            for j in 1..half {
                c[(a, 2 * j - 1)] = norm * 2f64.sqrt() * (j as f64 * theta).cos();
                c[(a, 2 * j)] = norm * 2f64.sqrt() * (j as f64 * theta).sin();
            }
            c[(a, n - 1)] = if a % 2 == 0 { norm } else { -norm };
        }
        c
    }

    /// pz basis representation of a Cartesian operation: site `a` goes to the
    /// site at `R r_a`, with sign `R_zz`. Errors if `R` does not map the ring
    /// onto itself.
    pub fn basis_matrix(&self, r: &Matrix3<f64>) -> Result<CMat> {
        let n = self.n;
        let mut m = CMat::zeros(n, n);
        for a in 0..n {
            let t = self.site_angle(a);
            let moved = r * nalgebra::Vector3::new(t.cos(), t.sin(), 0.0);
            let target = (0..n).find(|&b| {
                let s = self.site_angle(b);
                (moved - nalgebra::Vector3::new(s.cos(), s.sin(), 0.0)).norm() < 1e-9
            });
            let b = target.ok_or_else(|| {
                Error::Invalid(format!("operation does not map the {n}-ring onto itself"))
            })?;
            m[(b, a)] = C64::new(r[(2, 2)], 0.0);
        }
        Ok(m)
    }

    /// Orbital representation over every element of `group`, with shells
    /// inferred and labelled by irrep.
    pub fn rep_set(&self, group: &PointGroup) -> Result<RepSet> {
        let db = group
            .elements
            .iter()
            .map(|e| {
                let r = e.cartesian.as_ref().ok_or_else(|| {
                    Error::Invalid(format!("element `{}` has no Cartesian matrix", e.id))
                })?;
                Ok((e.id.clone(), self.basis_matrix(r)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let x = self.coefficients().map(|v| C64::new(v, 0.0));
        let s = CMat::identity(self.n, self.n);
        from_basis_overlap(&x, &s, &db, None, Some(group))
    }

    /// One-body Hamiltonian in the molecular orbital basis.
    pub fn hamiltonian(&self) -> FciHamiltonian {
        let c = self.coefficients();
        let h = c.transpose() * self.site_hamiltonian() * &c;
        let h = (&h + h.transpose()) * 0.5;
        FciHamiltonian::one_body(self.n, 0.0, h).expect("symmetric one-body matrix")
    }

    /// Hückel Hamiltonian plus an on-site repulsion `u n_a,up n_a,down`,
    /// expressed in the molecular orbital basis.
    pub fn hubbard_hamiltonian(&self, u: f64) -> FciHamiltonian {
        let mut site = FciHamiltonian::one_body(self.n, 0.0, self.site_hamiltonian())
            .expect("symmetric one-body matrix");
        for a in 0..self.n {
            site.set_two(a, a, a, a, u);
        }
        site.transformed(&self.coefficients())
            .expect("square coefficient matrix")
    }

    /// Closed-shell reference with the lowest `N/2` orbitals doubly occupied.
    pub fn hf_state(&self) -> FockState {
        let occ: Vec<usize> = (0..self.n / 2).collect();
        FockState::from_occupations(self.n, &occ, &occ).expect("valid occupations")
    }
}
