//! Closed-form symmetry overlaps for single Slater determinants and
//! reductions over excitation manifolds.

use crate::error::{Error, Result};
use crate::fockstate::FockState;
use crate::linalg::{CMat, C64, ONE};
use crate::pointgroup::{
    class_traces_from_ordered, reduce_representation, weights_from_ordered, PointGroup, Reduction,
    WeightReport,
};
use crate::representation::{RepSet, Shell};

/// Spin-resolved occupation lists (zero-based, strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlaterDeterminant {
    n_spatial: usize,
    up: Vec<usize>,
    down: Vec<usize>,
}

impl SlaterDeterminant {
    pub fn new(n_spatial: usize, up: Vec<usize>, down: Vec<usize>) -> Result<Self> {
        for list in [&up, &down] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(
                    "occupied orbitals must be strictly increasing".into(),
                ));
            }
            if let Some(&p) = list.iter().find(|&&p| p >= n_spatial) {
                return Err(Error::Invalid(format!(
                    "orbital {} out of range for {n_spatial} spatial orbitals",
                    p + 1
                )));
            }
        }
        Ok(Self { n_spatial, up, down })
    }

    /// Same orbitals doubly occupied.
    pub fn closed_shell(n_spatial: usize, occupied: Vec<usize>) -> Result<Self> {
        Self::new(n_spatial, occupied.clone(), occupied)
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn up(&self) -> &[usize] {
        &self.up
    }

    pub fn down(&self) -> &[usize] {
        &self.down
    }

    pub fn to_fock(&self) -> FockState {
        FockState::from_occupations(self.n_spatial, &self.up, &self.down)
            .expect("validated occupations")
    }
}

fn minor_det(d: &CMat, occ: &[usize]) -> C64 {
    if occ.is_empty() {
        return ONE;
    }
    CMat::from_fn(occ.len(), occ.len(), |i, j| d[(occ[i], occ[j])]).determinant()
}

fn check(sd: &SlaterDeterminant, rep: &RepSet) -> Result<()> {
    if sd.n_spatial != rep.n_spatial() {
        return Err(Error::Dimension(format!(
            "determinant has {} spatial orbitals, representation has {}",
            sd.n_spatial,
            rep.n_spatial()
        )));
    }
    Ok(())
}

fn overlap_matrix(sd: &SlaterDeterminant, d: &CMat) -> C64 {
    minor_det(d, &sd.up) * minor_det(d, &sd.down)
}

/// `<det|U(g)|det>` as the product of the up and down occupied minors of `D(g)`.
pub fn overlap_det(sd: &SlaterDeterminant, rep: &RepSet, element: &str) -> Result<C64> {
    check(sd, rep)?;
    let e = rep
        .element_index(element)
        .ok_or_else(|| Error::Invalid(format!("representation has no matrix for element `{element}`")))?;
    Ok(overlap_matrix(sd, &rep.matrix(e)))
}

fn ordered_overlaps(sd: &SlaterDeterminant, group: &PointGroup, mats: &[CMat]) -> Vec<C64> {
    (0..group.order()).map(|k| overlap_matrix(sd, &mats[k])).collect()
}

fn group_matrices(group: &PointGroup, rep: &RepSet) -> Result<Vec<CMat>> {
    Ok(rep.align(group)?.into_iter().map(|e| rep.matrix(e)).collect())
}

/// Irrep weights of a single determinant.
pub fn weights_sd(sd: &SlaterDeterminant, group: &PointGroup, rep: &RepSet) -> Result<WeightReport> {
    check(sd, rep)?;
    let mats = group_matrices(group, rep)?;
    Ok(weights_from_ordered(
        group,
        &ordered_overlaps(sd, group, &mats),
        "determinant",
    ))
}

/// All same-spin single excitations from a fully occupied shell into an
/// empty one; up-spin moves first, each in (from, to) orbital order.
pub fn enumerate_single_excitations(
    reference: &SlaterDeterminant,
    from: &Shell,
    to: &Shell,
) -> Result<Vec<SlaterDeterminant>> {
    for list in [&reference.up, &reference.down] {
        if !from.orbitals.iter().all(|p| list.contains(p)) {
            return Err(Error::Invalid(format!(
                "shell `{}` is not fully occupied in the reference",
                from.label
            )));
        }
        if to.orbitals.iter().any(|p| list.contains(p)) {
            return Err(Error::Invalid(format!(
                "shell `{}` is not empty in the reference",
                to.label
            )));
        }
    }
    let moved = |list: &[usize], p: usize, q: usize| {
        let mut v: Vec<usize> = list.iter().map(|&o| if o == p { q } else { o }).collect();
        v.sort_unstable();
        v
    };
    let mut out = Vec::new();
    for spin in 0..2 {
        for &p in &from.orbitals {
            for &q in &to.orbitals {
                let (up, down) = if spin == 0 {
                    (moved(&reference.up, p, q), reference.down.clone())
                } else {
                    (reference.up.clone(), moved(&reference.down, p, q))
                };
                out.push(SlaterDeterminant::new(reference.n_spatial, up, down)?);
            }
        }
    }
    Ok(out)
}

/// Summed irrep weights of a list of determinants: the reduction of the
/// representation spanned by the manifold.
pub fn reduce_manifold(
    configs: &[SlaterDeterminant],
    group: &PointGroup,
    rep: &RepSet,
) -> Result<Reduction> {
    let first = configs
        .first()
        .ok_or_else(|| Error::Invalid("empty configuration list".into()))?;
    if configs.iter().any(|c| c.n_spatial != first.n_spatial) {
        return Err(Error::Dimension(
            "configurations have different numbers of spatial orbitals".into(),
        ));
    }
    check(first, rep)?;
    let mats = group_matrices(group, rep)?;
    let mut sums = vec![C64::new(0.0, 0.0); group.order()];
    for c in configs {
        for (s, o) in sums.iter_mut().zip(ordered_overlaps(c, group, &mats)) {
            *s += o;
        }
    }
    reduce_representation(&group.table, &class_traces_from_ordered(group, &sums))
}

#[cfg(test)]
mod tests;
