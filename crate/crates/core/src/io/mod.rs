//! File formats: JSON specs for groups, representations, determinants, UCJ
//! parameters and circuits; binary statevectors and MPS; FCIDUMP integrals.
//!
//! Orbital indices in every file are 1-based.

mod binary;
pub mod fcidump;
pub mod json;

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

pub use binary::{
    read_mps, read_wavefunction, wavefunction_sidecar, write_mps, write_wavefunction, Ordering,
    Sidecar,
};
pub use fcidump::{read_fcidump, write_fcidump, Fcidump};
pub use json::{
    circuit_from_json, circuit_to_json, dets_from_json, dets_to_json, group_from_json,
    group_to_json, raw_basis_from_json, rep_from_json, rep_to_json, ucj_from_json, ucj_to_json,
    weights_to_csv, CircuitFile, ComplexMatrix, DetsFile, GroupFile, RawBasisFile, RepFile,
    UcjFile,
};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests;
