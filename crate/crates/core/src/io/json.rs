use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::pointgroup::{
    CharacterTable, ConjugacyClass, GroupElement, Irrep, PointGroup, WeightReport,
};
use crate::representation::{from_basis_overlap, RepSet, Shell};
use crate::slater::SlaterDeterminant;
use crate::fockstate::{UcjLayer, UcjParams};
use crate::tncompress::BrickWallCircuit;

/// A matrix entry written as a real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Complex([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

/// Row-major nested complex matrix.
pub type ComplexMatrix = Vec<Vec<Entry>>;

fn matrix_to_json(m: &CMat) -> ComplexMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| Entry::Complex([m[(i, j)].re, m[(i, j)].im]))
                .collect()
        })
        .collect()
}

fn matrix_from_json(rows: &ComplexMatrix, what: &str) -> Result<CMat> {
    let n = rows.len();
    let m = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse(format!("{what}: ragged matrix")));
    }
    Ok(CMat::from_fn(n, m, |i, j| rows[i][j].value()))
}

fn real_from_json(rows: &ComplexMatrix, what: &str) -> Result<DMatrix<f64>> {
    let m = matrix_from_json(rows, what)?;
    if m.iter().any(|z| z.im != 0.0) {
        return Err(Error::Parse(format!("{what}: expected a real matrix")));
    }
    Ok(m.map(|z| z.re))
}

fn real_to_json(m: &DMatrix<f64>) -> ComplexMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Entry::Real(m[(i, j)])).collect())
        .collect()
}

fn to_zero_based(list: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    list.iter()
        .map(|&p| {
            if p == 0 || p > n {
                Err(Error::Parse(format!(
                    "{what}: orbital {p} outside 1..{n}"
                )))
            } else {
                Ok(p - 1)
            }
        })
        .collect()
}

fn to_one_based(list: &[usize]) -> Vec<usize> {
    list.iter().map(|p| p + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub label: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementEntry {
    pub id: String,
    pub class: String,
    /// Optional 3x3 Cartesian matrix, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartesian: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepEntry {
    pub label: String,
    pub dim: usize,
    pub chi: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub classes: Vec<ClassEntry>,
    pub elements: Vec<ElementEntry>,
    pub irreps: Vec<IrrepEntry>,
}

pub fn group_to_json(group: &PointGroup) -> GroupFile {
    GroupFile {
        name: group.name.clone(),
        classes: group
            .table
            .classes
            .iter()
            .map(|c| ClassEntry {
                label: c.label.clone(),
                size: c.size,
            })
            .collect(),
        elements: group
            .elements
            .iter()
            .map(|e| ElementEntry {
                id: e.id.clone(),
                class: e.class_label.clone(),
                cartesian: e
                    .cartesian
                    .map(|m| [0, 1, 2].map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]])),
            })
            .collect(),
        irreps: group
            .table
            .irreps
            .iter()
            .zip(&group.table.chi)
            .map(|(g, row)| IrrepEntry {
                label: g.label.clone(),
                dim: g.dim,
                chi: row
                    .iter()
                    .map(|z| {
                        if z.im == 0.0 {
                            Entry::Real(z.re)
                        } else {
                            Entry::Complex([z.re, z.im])
                        }
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn group_from_json(file: &GroupFile) -> Result<PointGroup> {
    let table = CharacterTable {
        group_name: file.name.clone(),
        irreps: file
            .irreps
            .iter()
            .map(|g| Irrep {
                label: g.label.clone(),
                dim: g.dim,
            })
            .collect(),
        classes: file
            .classes
            .iter()
            .map(|c| ConjugacyClass {
                label: c.label.clone(),
                size: c.size,
            })
            .collect(),
        chi: file
            .irreps
            .iter()
            .map(|g| g.chi.iter().map(|e| e.value()).collect())
            .collect(),
    };
    let elements = file
        .elements
        .iter()
        .map(|e| GroupElement {
            id: e.id.clone(),
            class_label: e.class.clone(),
            cartesian: e.cartesian.map(|r| {
                Matrix3::new(
                    r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1],
                    r[2][2],
                )
            }),
        })
        .collect();
    PointGroup::new(&file.name, elements, table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellEntry {
    pub label: String,
    pub orbitals: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub n_spatial: usize,
    pub shells: Vec<ShellEntry>,
    /// Per element, one matrix per shell in shell order.
    pub matrices: serde_json::Map<String, serde_json::Value>,
}

pub fn rep_to_json(rep: &RepSet) -> Result<RepFile> {
    let mut matrices = serde_json::Map::new();
    for (e, id) in rep.element_ids().iter().enumerate() {
        let blocks: Vec<ComplexMatrix> = rep.blocks(e).iter().map(matrix_to_json).collect();
        matrices.insert(id.clone(), serde_json::to_value(blocks)?);
    }
    Ok(RepFile {
        n_spatial: rep.n_spatial(),
        shells: rep
            .shells()
            .iter()
            .map(|s| ShellEntry {
                label: s.label.clone(),
                orbitals: to_one_based(&s.orbitals),
            })
            .collect(),
        matrices,
    })
}

fn shells_from_json(entries: &[ShellEntry], n: usize) -> Result<Vec<Shell>> {
    entries
        .iter()
        .map(|s| {
            Ok(Shell {
                label: s.label.clone(),
                orbitals: to_zero_based(&s.orbitals, n, &format!("shell `{}`", s.label))?,
            })
        })
        .collect()
}

pub fn rep_from_json(file: &RepFile) -> Result<RepSet> {
    let n = file.n_spatial;
    let shells = shells_from_json(&file.shells, n)?;
    let mut ids = Vec::new();
    let mut blocks = Vec::new();
    for (id, value) in &file.matrices {
        let mats: Vec<ComplexMatrix> = serde_json::from_value(value.clone())?;
        ids.push(id.clone());
        blocks.push(
            mats.iter()
                .map(|m| matrix_from_json(m, &format!("element `{id}`")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    RepSet::new(n, shells, ids, blocks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBasisFile {
    #[serde(rename = "S")]
    pub s: ComplexMatrix,
    pub x: ComplexMatrix,
    #[serde(rename = "DB")]
    pub db: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shells: Option<Vec<ShellEntry>>,
}

/// Builds a representation from raw basis data; shells are inferred unless listed.
pub fn raw_basis_from_json(file: &RawBasisFile, group: Option<&PointGroup>) -> Result<RepSet> {
    let s = matrix_from_json(&file.s, "S")?;
    let x = matrix_from_json(&file.x, "x")?;
    let mut db = Vec::new();
    for (id, value) in &file.db {
        let m: ComplexMatrix = serde_json::from_value(value.clone())?;
        db.push((id.clone(), matrix_from_json(&m, &format!("DB `{id}`"))?));
    }
    let shells = match &file.shells {
        Some(list) => Some(shells_from_json(list, x.ncols())?),
        None => None,
    };
    from_basis_overlap(&x, &s, &db, shells, group)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetEntry {
    pub up: Vec<usize>,
    pub down: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetsFile {
    pub n_spatial: usize,
    pub dets: Vec<DetEntry>,
}

pub fn dets_to_json(dets: &[SlaterDeterminant]) -> DetsFile {
    DetsFile {
        n_spatial: dets.first().map(|d| d.n_spatial()).unwrap_or(0),
        dets: dets
            .iter()
            .map(|d| DetEntry {
                up: to_one_based(d.up()),
                down: to_one_based(d.down()),
            })
            .collect(),
    }
}

pub fn dets_from_json(file: &DetsFile) -> Result<Vec<SlaterDeterminant>> {
    let n = file.n_spatial;
    file.dets
        .iter()
        .map(|d| {
            SlaterDeterminant::new(
                n,
                to_zero_based(&d.up, n, "determinant")?,
                to_zero_based(&d.down, n, "determinant")?,
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcjRepEntry {
    #[serde(rename = "U")]
    pub u: ComplexMatrix,
    #[serde(rename = "J_same")]
    pub j_same: ComplexMatrix,
    #[serde(rename = "J_anti")]
    pub j_anti: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcjFile {
    #[serde(rename = "R")]
    pub r: usize,
    pub reps: Vec<UcjRepEntry>,
}

pub fn ucj_to_json(params: &UcjParams) -> UcjFile {
    UcjFile {
        r: params.repetitions(),
        reps: params
            .layers()
            .iter()
            .map(|l| UcjRepEntry {
                u: matrix_to_json(&l.u),
                j_same: real_to_json(&l.j_same),
                j_anti: real_to_json(&l.j_anti),
            })
            .collect(),
    }
}

pub fn ucj_from_json(file: &UcjFile) -> Result<UcjParams> {
    if file.r != file.reps.len() {
        return Err(Error::Parse(format!(
            "R = {} but {} repetitions given",
            file.r,
            file.reps.len()
        )));
    }
    let layers = file
        .reps
        .iter()
        .map(|r| {
            Ok(UcjLayer {
                u: matrix_from_json(&r.u, "U")?,
                j_same: real_from_json(&r.j_same, "J_same")?,
                j_anti: real_from_json(&r.j_anti, "J_anti")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = layers.first().map(|l| l.u.nrows()).unwrap_or(0);
    UcjParams::new(n, layers)
}

/// Gate `b` of layer `l` (1-based) acts on qubits `(2b-2, 2b-1)` for odd `l`
/// and `(2b-1, 2b)` for even `l`, zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub n_qubits: usize,
    pub layers: Vec<Vec<ComplexMatrix>>,
}

pub fn circuit_to_json(c: &BrickWallCircuit) -> CircuitFile {
    CircuitFile {
        n_qubits: c.n_qubits(),
        layers: c
            .layers()
            .iter()
            .map(|l| l.iter().map(matrix_to_json).collect())
            .collect(),
    }
}

pub fn circuit_from_json(file: &CircuitFile) -> Result<BrickWallCircuit> {
    let layers = file
        .layers
        .iter()
        .map(|l| {
            l.iter()
                .map(|g| matrix_from_json(g, "gate"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    BrickWallCircuit::new(file.n_qubits, layers)
}

/// `irrep,weight,d_gamma` rows in table order.
pub fn weights_to_csv(report: &WeightReport) -> String {
    let mut s = String::from("irrep,weight,d_gamma\n");
    for w in &report.weights {
        s.push_str(&format!("{},{},{}\n", w.irrep, w.weight, w.dim));
    }
    s
}
