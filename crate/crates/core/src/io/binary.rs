use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockstate::FockState;
use crate::linalg::C64;
use crate::tncompress::{Mps, SiteTensor};

const WAVEFUNCTION_MAGIC: &[u8; 5] = b"PSYM1";
const MPS_MAGIC: &[u8; 5] = b"PMPS1";

/// Basis-state ordering of a wavefunction file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// Qubit `2p + s`, the native layout.
    Interleaved = 0,
    /// All up modes, then all down modes, with the fermionic reordering sign.
    Blocked = 1,
}

/// Summary written next to a wavefunction file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_alpha: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_beta: Option<usize>,
}

/// `<path>.json`.
pub fn wavefunction_sidecar(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::Parse(format!("{}: file is truncated", self.what)));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn complex(&mut self) -> Result<C64> {
        Ok(C64::new(self.f64()?, self.f64()?))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::Parse(format!("{}: trailing bytes", self.what)));
        }
        Ok(())
    }
}

fn push_complex(buf: &mut Vec<u8>, z: C64) {
    buf.extend_from_slice(&z.re.to_le_bytes());
    buf.extend_from_slice(&z.im.to_le_bytes());
}

/// Writes the binary statevector and its JSON sidecar.
pub fn write_wavefunction(path: &Path, state: &FockState, ordering: Ordering) -> Result<()> {
    let amps = match ordering {
        Ordering::Interleaved => state.amplitudes().to_vec(),
        Ordering::Blocked => state.to_blocked(),
    };
    let mut buf = Vec::with_capacity(10 + 16 * amps.len());
    buf.extend_from_slice(WAVEFUNCTION_MAGIC);
    buf.extend_from_slice(&(state.n_spatial() as u32).to_le_bytes());
    buf.push(ordering as u8);
    for z in amps {
        push_complex(&mut buf, z);
    }
    std::fs::write(path, buf)?;
    let sector = state.sector(1e-12);
    let sidecar = Sidecar {
        norm: state.norm(),
        n_alpha: sector.map(|s| s.0),
        n_beta: sector.map(|s| s.1),
    };
    super::write_json(&wavefunction_sidecar(path), &sidecar)
}

/// Reads a binary statevector, converting to the interleaved ordering.
pub fn read_wavefunction(path: &Path) -> Result<FockState> {
    let data = std::fs::read(path)?;
    let mut r = Reader {
        data: &data,
        pos: 0,
        what: "wavefunction",
    };
    if r.take(5)? != WAVEFUNCTION_MAGIC {
        return Err(Error::Parse("wavefunction: bad magic".into()));
    }
    let n = r.u32()? as usize;
    if n > 16 {
        return Err(Error::Parse(format!("wavefunction: n_spatial = {n} is too large")));
    }
    let tag = r.take(1)?[0];
    let amps = (0..1usize << (2 * n))
        .map(|_| r.complex())
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    match tag {
        0 => FockState::new(n, amps),
        1 => FockState::from_blocked(n, &amps),
        t => Err(Error::Parse(format!("wavefunction: unknown ordering tag {t}"))),
    }
}

/// Header: magic, site count, then the `sites + 1` bond dimensions.
pub fn write_mps(path: &Path, mps: &Mps) -> Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MPS_MAGIC);
    buf.extend_from_slice(&(mps.n_sites() as u32).to_le_bytes());
    buf.extend_from_slice(&1u32.to_le_bytes());
    for s in mps.sites() {
        buf.extend_from_slice(&(s.right as u32).to_le_bytes());
    }
    for s in mps.sites() {
        for &z in &s.data {
            push_complex(&mut buf, z);
        }
    }
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn read_mps(path: &Path) -> Result<Mps> {
    let data = std::fs::read(path)?;
    let mut r = Reader {
        data: &data,
        pos: 0,
        what: "MPS",
    };
    if r.take(5)? != MPS_MAGIC {
        return Err(Error::Parse("MPS: bad magic".into()));
    }
    let n = r.u32()? as usize;
    let bonds = (0..=n)
        .map(|_| r.u32().map(|b| b as usize))
        .collect::<Result<Vec<_>>>()?;
    let mut sites = Vec::with_capacity(n);
    for p in 0..n {
        let len = bonds[p] * 2 * bonds[p + 1];
        let data = (0..len).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
        sites.push(SiteTensor::new(bonds[p], bonds[p + 1], data)?);
    }
    r.finish()?;
    Mps::new(sites)
}
