//! Finite point groups: elements, conjugacy classes, character tables, and
//! the weight / reduction formulas built on them.

mod builtin;

use std::collections::HashMap;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

pub use builtin::{builtin_group, d6h_to_d2h, BUILTIN_GROUPS};

/// Label of the identity class; every group must contain exactly one element in it.
pub const IDENTITY_CLASS: &str = "E";

/// Tolerance used by [`validate_table`].
pub const TABLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub id: String,
    pub class_label: String,
    /// Cartesian 3x3 matrix of the operation, when known.
    pub cartesian: Option<Matrix3<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub label: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
}

/// Characters `chi[irrep][class]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub group_name: String,
    pub irreps: Vec<Irrep>,
    pub classes: Vec<ConjugacyClass>,
    pub chi: Vec<Vec<C64>>,
}

impl CharacterTable {
    /// Group order, `sum_C r_C`.
    pub fn order(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }

    pub fn irrep_index(&self, label: &str) -> Result<usize> {
        self.irreps
            .iter()
            .position(|g| g.label == label)
            .ok_or_else(|| Error::UnknownIrrep(label.to_string()))
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn character(&self, irrep: usize, class: usize) -> C64 {
        self.chi[irrep][class]
    }
}

/// A point group with its explicit elements and character table.
#[derive(Debug, Clone, PartialEq)]
pub struct PointGroup {
    pub name: String,
    pub elements: Vec<GroupElement>,
    pub table: CharacterTable,
    element_class: Vec<usize>,
}

impl PointGroup {
    /// Checks element/class consistency: every element maps to a class of the
    /// table, class sizes match their member counts, and the identity class is
    /// a singleton.
    pub fn new(name: &str, elements: Vec<GroupElement>, table: CharacterTable) -> Result<Self> {
        if table.chi.len() != table.irreps.len()
            || table.chi.iter().any(|row| row.len() != table.classes.len())
        {
            return Err(Error::Invalid(format!(
                "character table of {name} is not {}x{}",
                table.irreps.len(),
                table.classes.len()
            )));
        }
        let mut counts = vec![0usize; table.classes.len()];
        let mut element_class = Vec::with_capacity(elements.len());
        let mut seen = std::collections::HashSet::new();
        for el in &elements {
            if !seen.insert(el.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate element id `{}`", el.id)));
            }
            let c = table.class_index(&el.class_label).ok_or_else(|| {
                Error::Invalid(format!(
                    "element `{}` refers to unknown class `{}`",
                    el.id, el.class_label
                ))
            })?;
            counts[c] += 1;
            element_class.push(c);
        }
        for (c, class) in table.classes.iter().enumerate() {
            if counts[c] != class.size {
                return Err(Error::Invalid(format!(
                    "class `{}` declares size {} but has {} elements",
                    class.label, class.size, counts[c]
                )));
            }
        }
        match table.class_index(IDENTITY_CLASS) {
            Some(c) if table.classes[c].size == 1 => {}
            _ => {
                return Err(Error::Invalid(
                    "group must have an identity class `E` of size 1".into(),
                ))
            }
        }
        Ok(Self {
            name: name.to_string(),
            elements,
            table,
            element_class,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.element_class[element]
    }

    pub fn element_index(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.id == id)
    }

    pub fn identity(&self) -> usize {
        let c = self.table.class_index(IDENTITY_CLASS).expect("checked in new");
        self.element_class
            .iter()
            .position(|&k| k == c)
            .expect("identity class is nonempty")
    }

    /// Character of `irrep` at element `element`.
    pub fn character(&self, irrep: usize, element: usize) -> C64 {
        self.table.chi[irrep][self.element_class[element]]
    }

    /// Index of the element whose Cartesian matrix equals `m`, if matrices are known.
    pub fn find_cartesian(&self, m: &Matrix3<f64>) -> Option<usize> {
        self.elements.iter().position(|e| {
            e.cartesian
                .map(|c| (c - m).abs().max() < 1e-9)
                .unwrap_or(false)
        })
    }

    /// Product table `g_i g_j` built from the Cartesian matrices, if every
    /// element carries one.
    pub fn multiplication_table(&self) -> Option<Vec<Vec<usize>>> {
        let mats: Option<Vec<_>> = self.elements.iter().map(|e| e.cartesian).collect();
        let mats = mats?;
        let mut table = vec![vec![0; mats.len()]; mats.len()];
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                table[i][j] = self.find_cartesian(&(a * b))?;
            }
        }
        Some(table)
    }
}

/// One failed check of [`validate_table`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    RowOrthogonality { a: String, b: String, residual: f64 },
    ColumnOrthogonality { a: String, b: String, residual: f64 },
    Dimension { irrep: String, residual: f64 },
    Shape { detail: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::RowOrthogonality { a, b, residual } => {
                write!(f, "row orthogonality ({a}, {b}): residual {residual:.3e}")
            }
            Violation::ColumnOrthogonality { a, b, residual } => {
                write!(f, "column orthogonality ({a}, {b}): residual {residual:.3e}")
            }
            Violation::Dimension { irrep, residual } => {
                write!(f, "d_Gamma != chi(E) for {irrep}: residual {residual:.3e}")
            }
            Violation::Shape { detail } => write!(f, "shape: {detail}"),
        }
    }
}

/// Checks both character orthogonality relations and `d = chi(E)` at [`TABLE_TOL`].
pub fn validate_table(table: &CharacterTable) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_irr = table.irreps.len();
    let n_cls = table.classes.len();
    if n_irr != n_cls {
        out.push(Violation::Shape {
            detail: format!("{n_irr} irreps but {n_cls} classes"),
        });
    }
    if table.chi.len() != n_irr || table.chi.iter().any(|r| r.len() != n_cls) {
        out.push(Violation::Shape {
            detail: "character matrix does not match irreps x classes".into(),
        });
        return out;
    }
    let order = table.order() as f64;

    for a in 0..n_irr {
        for b in a..n_irr {
            let s: C64 = (0..n_cls)
                .map(|c| table.chi[a][c].conj() * table.chi[b][c] * table.classes[c].size as f64)
                .sum::<C64>()
                / order;
            let target = if a == b { 1.0 } else { 0.0 };
            let residual = (s - target).norm();
            if residual > TABLE_TOL {
                out.push(Violation::RowOrthogonality {
                    a: table.irreps[a].label.clone(),
                    b: table.irreps[b].label.clone(),
                    residual,
                });
            }
        }
    }

    for c1 in 0..n_cls {
        for c2 in c1..n_cls {
            let s: C64 = (0..n_irr)
                .map(|g| table.chi[g][c1].conj() * table.chi[g][c2])
                .sum::<C64>()
                / order;
            let target = if c1 == c2 {
                1.0 / table.classes[c1].size as f64
            } else {
                0.0
            };
            let residual = (s - target).norm();
            if residual > TABLE_TOL {
                out.push(Violation::ColumnOrthogonality {
                    a: table.classes[c1].label.clone(),
                    b: table.classes[c2].label.clone(),
                    residual,
                });
            }
        }
    }

    match table.class_index(IDENTITY_CLASS) {
        Some(e) => {
            for (g, irrep) in table.irreps.iter().enumerate() {
                let residual = (table.chi[g][e] - irrep.dim as f64).norm();
                if residual > TABLE_TOL {
                    out.push(Violation::Dimension {
                        irrep: irrep.label.clone(),
                        residual,
                    });
                }
            }
        }
        None => out.push(Violation::Shape {
            detail: "no identity class `E`".into(),
        }),
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepWeight {
    pub irrep: String,
    pub dim: usize,
    pub weight: f64,
    /// Imaginary part of the raw character sum; zero for exact overlaps.
    pub imag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementOverlap {
    pub element: String,
    pub re: f64,
    pub im: f64,
}

/// Per-irrep weights together with the overlaps they were computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub group: String,
    pub backend: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    pub weights: Vec<IrrepWeight>,
    pub overlaps: Vec<ElementOverlap>,
    pub sum_of_weights: f64,
}

impl WeightReport {
    pub fn weight(&self, irrep: &str) -> Option<f64> {
        self.weights
            .iter()
            .find(|w| w.irrep == irrep)
            .map(|w| w.weight)
    }

    pub fn weight_map(&self) -> HashMap<String, f64> {
        self.weights
            .iter()
            .map(|w| (w.irrep.clone(), w.weight))
            .collect()
    }
}

/// `w_Gamma = (d/|G|) sum_C chi*(C) sum_{g in C} <Psi|g|Psi>`, reported raw.
pub fn weights_from_overlaps(
    group: &PointGroup,
    overlaps: &HashMap<String, C64>,
) -> Result<WeightReport> {
    let ordered = group
        .elements
        .iter()
        .map(|e| {
            overlaps
                .get(&e.id)
                .copied()
                .ok_or_else(|| Error::MissingElement(e.id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(weights_from_ordered(group, &ordered, "overlaps"))
}

/// Same as [`weights_from_overlaps`] with overlaps given in group element order.
pub fn weights_from_ordered(group: &PointGroup, overlaps: &[C64], backend: &str) -> WeightReport {
    assert_eq!(overlaps.len(), group.order());
    let table = &group.table;
    let mut class_sums = vec![ZERO; table.classes.len()];
    for (k, &o) in overlaps.iter().enumerate() {
        class_sums[group.class_of(k)] += o;
    }
    let weights: Vec<IrrepWeight> = table
        .irreps
        .iter()
        .enumerate()
        .map(|(g, irrep)| {
            let raw: C64 = class_sums
                .iter()
                .enumerate()
                .map(|(c, &s)| table.chi[g][c].conj() * s)
                .sum::<C64>()
                * (irrep.dim as f64 / group.order() as f64);
            IrrepWeight {
                irrep: irrep.label.clone(),
                dim: irrep.dim,
                weight: raw.re,
                imag: raw.im,
            }
        })
        .collect();
    let sum_of_weights = weights.iter().map(|w| w.weight).sum();
    WeightReport {
        group: group.name.clone(),
        backend: backend.to_string(),
        shots: None,
        weights,
        overlaps: group
            .elements
            .iter()
            .zip(overlaps)
            .map(|(e, o)| ElementOverlap {
                element: e.id.clone(),
                re: o.re,
                im: o.im,
            })
            .collect(),
        sum_of_weights,
    }
}

/// Totals of a (reducible) representation: `total = d * occurrence`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub group: String,
    pub entries: Vec<ReductionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionEntry {
    pub irrep: String,
    pub dim: usize,
    pub total: f64,
    pub occurrences: f64,
}

impl Reduction {
    pub fn total(&self, irrep: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.irrep == irrep)
            .map(|e| e.total)
    }
}

/// Reduces a class function: `total = (d/|G|) sum_C r_C chi*(C) trace(C)`.
pub fn reduce_representation(
    table: &CharacterTable,
    class_traces: &HashMap<String, C64>,
) -> Result<Reduction> {
    let traces = table
        .classes
        .iter()
        .map(|c| {
            class_traces
                .get(&c.label)
                .copied()
                .ok_or_else(|| Error::MissingClass(c.label.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce_ordered(table, &traces))
}

pub fn reduce_ordered(table: &CharacterTable, traces: &[C64]) -> Reduction {
    let order = table.order() as f64;
    let entries = table
        .irreps
        .iter()
        .enumerate()
        .map(|(g, irrep)| {
            let s: C64 = table
                .classes
                .iter()
                .enumerate()
                .map(|(c, class)| table.chi[g][c].conj() * traces[c] * class.size as f64)
                .sum();
            let occurrences = s.re / order;
            ReductionEntry {
                irrep: irrep.label.clone(),
                dim: irrep.dim,
                total: occurrences * irrep.dim as f64,
                occurrences,
            }
        })
        .collect();
    Reduction {
        group: table.group_name.clone(),
        entries,
    }
}

/// Class-averaged overlaps, `(1/r_C) sum_{g in C} o(g)`, keyed by class label.
pub fn class_traces_from_ordered(group: &PointGroup, overlaps: &[C64]) -> HashMap<String, C64> {
    let mut sums = vec![ZERO; group.table.classes.len()];
    for (k, &o) in overlaps.iter().enumerate() {
        sums[group.class_of(k)] += o;
    }
    group
        .table
        .classes
        .iter()
        .zip(sums)
        .map(|(c, s)| (c.label.clone(), s / c.size as f64))
        .collect()
}

/// Irrep correspondence between a group and one of its subgroups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentMap {
    pub from: String,
    pub to: String,
    pub map: Vec<(String, Vec<String>)>,
}

/// Redistributes weights through `map`. A source irrep that splits into
/// several target irreps shares its weight in proportion to their dimensions
/// (an equal split for the D6h -> D2h E-type irreps). The result lists only
/// target irreps that receive weight, in target-table order.
pub fn descend(
    from: &CharacterTable,
    to: &CharacterTable,
    map: &DescentMap,
    weights: &[(String, f64)],
) -> Result<Vec<(String, f64)>> {
    let lookup: HashMap<&str, &Vec<String>> =
        map.map.iter().map(|(k, v)| (k.as_str(), v)).collect();
    for irrep in &from.irreps {
        if !lookup.contains_key(irrep.label.as_str()) {
            return Err(Error::UnmappedIrrep(irrep.label.clone()));
        }
    }
    let mut acc: Vec<Option<f64>> = vec![None; to.irreps.len()];
    for (label, w) in weights {
        from.irrep_index(label)?;
        let targets = lookup
            .get(label.as_str())
            .ok_or_else(|| Error::UnmappedIrrep(label.clone()))?;
        let idx = targets
            .iter()
            .map(|t| to.irrep_index(t))
            .collect::<Result<Vec<_>>>()?;
        let total_dim: usize = idx.iter().map(|&i| to.irreps[i].dim).sum();
        for &i in &idx {
            let share = w * to.irreps[i].dim as f64 / total_dim as f64;
            *acc[i].get_or_insert(0.0) += share;
        }
    }
    Ok(to
        .irreps
        .iter()
        .zip(acc)
        .filter_map(|(irrep, w)| w.map(|w| (irrep.label.clone(), w)))
        .collect())
}

#[cfg(test)]
mod tests;
