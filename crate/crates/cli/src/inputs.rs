use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use psym_core::fockstate::{apply_ucj, max_qubits_from_env, FockState};
use psym_core::io::{self, RawBasisFile, RepFile};
use psym_core::pointgroup::{builtin_group, PointGroup};
use psym_core::representation::RepSet;
use psym_core::slater::SlaterDeterminant;
use psym_core::tncompress::{Mps, DEFAULT_MAX_QUBITS};

use crate::{Format, Output, Source, SymmetryInput};

pub fn group(spec: &str) -> anyhow::Result<PointGroup> {
    let path = Path::new(spec);
    if path.is_file() {
        let file = io::read_json(path).with_context(|| format!("reading group `{spec}`"))?;
        return Ok(io::group_from_json(&file)?);
    }
    Ok(builtin_group(spec)?)
}

pub fn rep(path: &Path, group: &PointGroup) -> anyhow::Result<RepSet> {
    let value: serde_json::Value = io::read_json(path)
        .with_context(|| format!("reading representation `{}`", path.display()))?;
    let rep = if value.get("DB").is_some() {
        let file: RawBasisFile = serde_json::from_value(value)?;
        io::raw_basis_from_json(&file, Some(group))?
    } else {
        let file: RepFile = serde_json::from_value(value)?;
        io::rep_from_json(&file)?
    };
    let residual = rep.homomorphism_residual(group)?;
    if residual > 1e-8 {
        bail!("representation does not follow the group multiplication (residual {residual:.3e})");
    }
    Ok(rep)
}

pub fn symmetry(sym: &SymmetryInput) -> anyhow::Result<(PointGroup, RepSet)> {
    let g = group(&sym.group)?;
    let r = rep(&sym.rep, &g)?;
    Ok((g, r))
}

pub fn dets(path: &Path) -> anyhow::Result<Vec<SlaterDeterminant>> {
    let file = io::read_json(path)
        .with_context(|| format!("reading determinants `{}`", path.display()))?;
    let list = io::dets_from_json(&file)?;
    if list.is_empty() {
        bail!("`{}` lists no determinants", path.display());
    }
    Ok(list)
}

pub fn max_qubits() -> usize {
    max_qubits_from_env(DEFAULT_MAX_QUBITS)
}

pub fn mps(path: &Path) -> anyhow::Result<Mps> {
    io::read_mps(path).with_context(|| format!("reading MPS `{}`", path.display()))
}

pub fn statevector(path: &Path) -> anyhow::Result<FockState> {
    let s = io::read_wavefunction(path)
        .with_context(|| format!("reading state `{}`", path.display()))?;
    if s.n_qubits() > max_qubits() {
        bail!(
            "state has {} qubits, above the limit of {} (set PSYM_MAX_QUBITS)",
            s.n_qubits(),
            max_qubits()
        );
    }
    Ok(s)
}

/// The source as a dense state. A determinant list must hold exactly one entry.
pub fn fock(source: &Source, ucj: Option<&Path>) -> anyhow::Result<FockState> {
    let state = if let Some(p) = &source.state {
        statevector(p)?
    } else if let Some(p) = &source.dets {
        single_det(p)?.to_fock()
    } else if let Some(p) = &source.mps {
        mps(p)?.to_fock(max_qubits())?
    } else {
        bail!("no wavefunction source given");
    };
    match ucj {
        Some(p) => {
            let file = io::read_json(p)
                .with_context(|| format!("reading UCJ parameters `{}`", p.display()))?;
            Ok(apply_ucj(&state, &io::ucj_from_json(&file)?)?)
        }
        None => Ok(state),
    }
}

pub fn single_det(path: &Path) -> anyhow::Result<SlaterDeterminant> {
    let mut list = dets(path)?;
    if list.len() != 1 {
        bail!(
            "`{}` lists {} determinants; this command takes exactly one",
            path.display(),
            list.len()
        );
    }
    Ok(list.remove(0))
}

/// Writes JSON or CSV text to `--out` or stdout.
pub fn emit(output: &Output, json: &serde_json::Value, csv: impl FnOnce() -> String) -> anyhow::Result<()> {
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json)?;
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    };
    match &output.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing `{}`", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
