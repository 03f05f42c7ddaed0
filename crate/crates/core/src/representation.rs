//! Orbital representation matrices `D(g)`: block-diagonal shell structure,
//! per-shell eigen-decomposition, the Pauli shortcut, and the principal log.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE};
use crate::pointgroup::{class_traces_from_ordered, reduce_ordered, PointGroup};

pub const UNITARY_TOL: f64 = 1e-8;
/// Off-block magnitude below which entries are treated as zero during shell inference.
pub const SHELL_TOL: f64 = 1e-8;

/// A set of orbitals that only mix among themselves under the group.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub label: String,
    /// Zero-based spatial orbital indices, in block order.
    pub orbitals: Vec<usize>,
}

/// Block-diagonal representation matrices for every group element.
#[derive(Debug, Clone)]
pub struct RepSet {
    n_spatial: usize,
    shells: Vec<Shell>,
    element_ids: Vec<String>,
    // blocks[element][shell]
    blocks: Vec<Vec<CMat>>,
}

impl RepSet {
    pub fn new(
        n_spatial: usize,
        shells: Vec<Shell>,
        element_ids: Vec<String>,
        blocks: Vec<Vec<CMat>>,
    ) -> Result<Self> {
        check_partition(n_spatial, &shells)?;
        if blocks.len() != element_ids.len() {
            return Err(Error::Dimension(format!(
                "{} element ids but {} block sets",
                element_ids.len(),
                blocks.len()
            )));
        }
        for (id, set) in element_ids.iter().zip(&blocks) {
            if set.len() != shells.len() {
                return Err(Error::Dimension(format!(
                    "element `{id}` has {} blocks for {} shells",
                    set.len(),
                    shells.len()
                )));
            }
            for (shell, block) in shells.iter().zip(set) {
                let k = shell.orbitals.len();
                if block.shape() != (k, k) {
                    return Err(Error::Dimension(format!(
                        "element `{id}`, shell `{}`: block is {:?}, expected {k}x{k}",
                        shell.label,
                        block.shape()
                    )));
                }
                linalg::ensure_unitary(
                    block,
                    UNITARY_TOL,
                    &format!("element `{id}`, shell `{}`", shell.label),
                )?;
            }
        }
        Ok(Self {
            n_spatial,
            shells,
            element_ids,
            blocks,
        })
    }

    /// Splits full `n x n` matrices into shells, inferring the shells from
    /// block sparsity unless they are given explicitly.
    pub fn from_matrices(
        element_ids: Vec<String>,
        matrices: &[CMat],
        shells: Option<Vec<Shell>>,
    ) -> Result<Self> {
        let n = matrices.first().map(|m| m.nrows()).unwrap_or(0);
        for (id, m) in element_ids.iter().zip(matrices) {
            if m.shape() != (n, n) {
                return Err(Error::Dimension(format!(
                    "matrix for `{id}` is {:?}, expected {n}x{n}",
                    m.shape()
                )));
            }
            linalg::ensure_unitary(m, UNITARY_TOL, &format!("D({id})"))?;
        }
        let shells = match shells {
            Some(s) => s,
            None => infer_shells(n, matrices),
        };
        check_partition(n, &shells)?;
        for (id, m) in element_ids.iter().zip(matrices) {
            let mut member = vec![usize::MAX; n];
            for (s, shell) in shells.iter().enumerate() {
                for &o in &shell.orbitals {
                    member[o] = s;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if member[i] != member[j] && m[(i, j)].norm() >= SHELL_TOL {
                        return Err(Error::Invalid(format!(
                            "D({id}) couples orbitals {} and {} across shells",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        let blocks = matrices
            .iter()
            .map(|m| {
                shells
                    .iter()
                    .map(|s| m.select_rows(&s.orbitals).select_columns(&s.orbitals))
                    .collect()
            })
            .collect();
        Self::new(n, shells, element_ids, blocks)
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn element_ids(&self) -> &[String] {
        &self.element_ids
    }

    pub fn element_index(&self, id: &str) -> Option<usize> {
        self.element_ids.iter().position(|e| e == id)
    }

    pub fn block(&self, element: usize, shell: usize) -> &CMat {
        &self.blocks[element][shell]
    }

    pub fn blocks(&self, element: usize) -> &[CMat] {
        &self.blocks[element]
    }

    /// Assembled `n x n` matrix `D(g)`.
    pub fn matrix(&self, element: usize) -> CMat {
        let mut m = CMat::zeros(self.n_spatial, self.n_spatial);
        for (shell, block) in self.shells.iter().zip(&self.blocks[element]) {
            linalg::embed_block(&mut m, &shell.orbitals, block);
        }
        m
    }

    /// Rep element index for every group element, in group order.
    pub fn align(&self, group: &PointGroup) -> Result<Vec<usize>> {
        group
            .elements
            .iter()
            .map(|e| {
                self.element_index(&e.id).ok_or_else(|| {
                    Error::Invalid(format!(
                        "representation has no matrix for element `{}`",
                        e.id
                    ))
                })
            })
            .collect()
    }

    /// Maximum of `|D(g1) D(g2) - D(g1 g2)|` over all pairs, using the
    /// group's Cartesian product table.
    pub fn homomorphism_residual(&self, group: &PointGroup) -> Result<f64> {
        let idx = self.align(group)?;
        let mult = group.multiplication_table().ok_or_else(|| {
            Error::Invalid(format!("group {} has no product table", group.name))
        })?;
        let mats: Vec<CMat> = idx.iter().map(|&k| self.matrix(k)).collect();
        let mut worst = 0.0f64;
        for a in 0..mats.len() {
            for b in 0..mats.len() {
                let lhs = &mats[a] * &mats[b];
                worst = worst.max(linalg::max_abs_diff(&lhs, &mats[mult[a][b]]));
            }
        }
        Ok(worst)
    }

    /// Relabels shells by reducing each shell's character over `group`;
    /// shells that do not carry a single irrep keep their label.
    pub fn label_shells(&mut self, group: &PointGroup) -> Result<()> {
        let idx = self.align(group)?;
        for s in 0..self.shells.len() {
            let chars: Vec<C64> = idx.iter().map(|&k| self.blocks[k][s].trace()).collect();
            let red = reduce_ordered(&group.table, &as_class_traces(group, &chars));
            let hits: Vec<_> = red
                .entries
                .iter()
                .filter(|e| e.occurrences.abs() > 1e-6)
                .collect();
            if hits.len() == 1 && (hits[0].occurrences - 1.0).abs() < 1e-6 {
                self.shells[s].label = hits[0].irrep.to_lowercase();
            }
        }
        Ok(())
    }

    /// Keeps only the matrices of `ids`, in that order.
    pub fn restrict(&self, ids: &[String]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(ids.len());
        for id in ids {
            let k = self
                .element_index(id)
                .ok_or_else(|| Error::Invalid(format!("no matrix for element `{id}`")))?;
            blocks.push(self.blocks[k].clone());
        }
        Self::new(self.n_spatial, self.shells.clone(), ids.to_vec(), blocks)
    }
}

fn as_class_traces(group: &PointGroup, chars: &[C64]) -> Vec<C64> {
    let map = class_traces_from_ordered(group, chars);
    group
        .table
        .classes
        .iter()
        .map(|c| map[&c.label])
        .collect()
}

fn check_partition(n: usize, shells: &[Shell]) -> Result<()> {
    let mut seen = vec![false; n];
    for shell in shells {
        if shell.orbitals.is_empty() {
            return Err(Error::Invalid(format!("shell `{}` is empty", shell.label)));
        }
        for &o in &shell.orbitals {
            if o >= n {
                return Err(Error::Invalid(format!(
                    "shell `{}` refers to orbital {} but n_spatial = {n}",
                    shell.label,
                    o + 1
                )));
            }
            if std::mem::replace(&mut seen[o], true) {
                return Err(Error::Invalid(format!(
                    "orbital {} appears in more than one shell",
                    o + 1
                )));
            }
        }
    }
    if let Some(o) = seen.iter().position(|&s| !s) {
        return Err(Error::Invalid(format!("orbital {} is in no shell", o + 1)));
    }
    Ok(())
}

/// Connected components of the coupling graph `|D_ij(g)| >= SHELL_TOL` over all `g`.
fn infer_shells(n: usize, matrices: &[CMat]) -> Vec<Shell> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for m in matrices {
        for i in 0..n {
            for j in 0..n {
                if i != j && (m[(i, j)].norm() >= SHELL_TOL || m[(j, i)].norm() >= SHELL_TOL) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(k, (_, orbitals))| Shell {
            label: format!("s{}", k + 1),
            orbitals,
        })
        .collect()
}

/// `D(g) = x† S D_B(g) x` from basis-function data.
///
/// `x` holds the orbital coefficients column-wise and must be orthonormal
/// under `s`. When `group` is given, inferred shells are labelled by the
/// irrep they carry.
pub fn from_basis_overlap(
    x: &CMat,
    s: &CMat,
    db: &[(String, CMat)],
    shells: Option<Vec<Shell>>,
    group: Option<&PointGroup>,
) -> Result<RepSet> {
    let nb = s.nrows();
    if !s.is_square() {
        return Err(Error::Dimension(format!(
            "overlap matrix is {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    if x.nrows() != nb {
        return Err(Error::Dimension(format!(
            "coefficients have {} rows, basis has {nb} functions",
            x.nrows()
        )));
    }
    let metric = x.adjoint() * s * x;
    let residual = linalg::unitarity_residual_of_gram(&metric);
    if residual > UNITARY_TOL {
        return Err(Error::NotOrthonormal(residual));
    }
    let mut ids = Vec::with_capacity(db.len());
    let mut mats = Vec::with_capacity(db.len());
    for (id, m) in db {
        if m.shape() != (nb, nb) {
            return Err(Error::Dimension(format!(
                "basis matrix for `{id}` is {:?}, expected {nb}x{nb}",
                m.shape()
            )));
        }
        ids.push(id.clone());
        // x† S x = I by the precondition, so the identity stays exact
        if linalg::is_exact_identity(m) {
            mats.push(CMat::identity(x.ncols(), x.ncols()));
        } else {
            mats.push(x.adjoint() * s * m * x);
        }
    }
    let explicit = shells.is_some();
    let mut rep = RepSet::from_matrices(ids, &mats, shells)?;
    if let (false, Some(g)) = (explicit, group) {
        rep.label_shells(g)?;
    }
    Ok(rep)
}

/// Eigen-decomposition `D_gamma(g) = V diag(e^{i phi}) V†` of one block.
#[derive(Debug, Clone)]
pub struct ShellEigen {
    pub vectors: CMat,
    pub phases: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RepEigen {
    // [element][shell]
    per_element: Vec<Vec<ShellEigen>>,
}

impl RepEigen {
    pub fn shell(&self, element: usize, shell: usize) -> &ShellEigen {
        &self.per_element[element][shell]
    }

    /// Block-diagonal `V(g)` over all orbitals.
    pub fn eigenvectors(&self, rep: &RepSet, element: usize) -> CMat {
        let n = rep.n_spatial();
        let mut v = CMat::zeros(n, n);
        for (shell, eig) in rep.shells().iter().zip(&self.per_element[element]) {
            linalg::embed_block(&mut v, &shell.orbitals, &eig.vectors);
        }
        v
    }

    /// Phase attached to each orbital slot after rotating into the eigenbasis.
    pub fn orbital_phases(&self, rep: &RepSet, element: usize) -> Vec<f64> {
        let mut phases = vec![0.0; rep.n_spatial()];
        for (shell, eig) in rep.shells().iter().zip(&self.per_element[element]) {
            for (&o, &p) in shell.orbitals.iter().zip(&eig.phases) {
                phases[o] = p;
            }
        }
        phases
    }

    /// True when every eigenvector block is the identity, so no basis
    /// rotation is needed before measuring this element.
    pub fn is_diagonal(&self, element: usize) -> bool {
        self.per_element[element]
            .iter()
            .all(|e| linalg::is_exact_identity(&e.vectors))
    }
}

pub fn diagonalize(rep: &RepSet) -> Result<RepEigen> {
    let per_element = (0..rep.element_ids().len())
        .map(|e| {
            rep.blocks(e)
                .iter()
                .map(|b| {
                    let (vectors, phases) = linalg::unitary_eigen(b)?;
                    Ok(ShellEigen { vectors, phases })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RepEigen { per_element })
}

/// Orbitals carrying a -1 for each element, when every shell is
/// one-dimensional with `D = +/-1`; `None` otherwise.
pub fn pauli_shortcut(rep: &RepSet) -> Option<Vec<(String, Vec<usize>)>> {
    if rep.shells().iter().any(|s| s.orbitals.len() != 1) {
        return None;
    }
    let mut out = Vec::with_capacity(rep.element_ids().len());
    for (e, id) in rep.element_ids().iter().enumerate() {
        let mut flipped = Vec::new();
        for (shell, block) in rep.shells().iter().zip(rep.blocks(e)) {
            let d = block[(0, 0)];
            if (d - ONE).norm() < 1e-10 {
                continue;
            } else if (d + ONE).norm() < 1e-10 {
                flipped.push(shell.orbitals[0]);
            } else {
                return None;
            }
        }
        flipped.sort_unstable();
        out.push((id.clone(), flipped));
    }
    Some(out)
}

/// Principal logarithm of each block of `D(g)`.
#[derive(Debug, Clone)]
pub struct LogGenerator {
    pub blocks: Vec<CMat>,
    /// Set when a block has an eigenphase on the branch cut (phase = pi).
    pub at_branch_cut: Vec<bool>,
}

pub fn log_generator(rep: &RepSet, element: &str) -> Result<LogGenerator> {
    let e = rep
        .element_index(element)
        .ok_or_else(|| Error::Invalid(format!("no matrix for element `{element}`")))?;
    let mut blocks = Vec::new();
    let mut flags = Vec::new();
    for b in rep.blocks(e) {
        let (v, phases) = linalg::unitary_eigen(b)?;
        let diag = nalgebra::DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&p| C64::new(0.0, p)),
        );
        blocks.push(&v * CMat::from_diagonal(&diag) * v.adjoint());
        flags.push(phases.iter().any(|&p| (p - PI).abs() < 1e-12));
    }
    Ok(LogGenerator {
        blocks,
        at_branch_cut: flags,
    })
}

/// Rep with identity matrices for every element and one shell per orbital.
pub fn trivial_rep(n_spatial: usize, element_ids: Vec<String>) -> RepSet {
    let shells = (0..n_spatial)
        .map(|o| Shell {
            label: format!("s{}", o + 1),
            orbitals: vec![o],
        })
        .collect();
    let blocks = element_ids
        .iter()
        .map(|_| vec![CMat::from_element(1, 1, ONE); n_spatial])
        .collect();
    RepSet::new(n_spatial, shells, element_ids, blocks).expect("identity blocks")
}

/// Element matrices keyed by id, for lookups in tests and IO.
pub fn matrices_by_id(rep: &RepSet) -> HashMap<String, CMat> {
    rep.element_ids()
        .iter()
        .enumerate()
        .map(|(k, id)| (id.clone(), rep.matrix(k)))
        .collect()
}
