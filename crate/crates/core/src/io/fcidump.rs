use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fockstate::FciHamiltonian;

/// Integrals and header fields of an FCIDUMP file.
#[derive(Debug, Clone, PartialEq)]
pub struct Fcidump {
    pub hamiltonian: FciHamiltonian,
    pub nelec: usize,
    pub ms2: i64,
    pub orbsym: Vec<i64>,
    pub isym: i64,
}

fn header_values(header: &str, key: &str) -> Option<Vec<String>> {
    let upper = header.to_ascii_uppercase();
    let start = upper
        .match_indices(key)
        .find(|(i, _)| {
            let before = upper[..*i].chars().last();
            !before.is_some_and(|c| c.is_ascii_alphanumeric())
                && upper[i + key.len()..].trim_start().starts_with('=')
        })?
        .0;
    let rest = &header[start + key.len()..];
    let rest = &rest[rest.find('=')? + 1..];
    // values run until the next `NAME=` token
    let mut out = Vec::new();
    for tok in rest.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        if tok.contains('=') || tok.starts_with('&') || tok == "/" {
            break;
        }
        if tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            break;
        }
        out.push(tok.to_string());
    }
    Some(out)
}

fn parse_int(s: &str, what: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("FCIDUMP: bad {what} `{s}`")))
}

/// Parses FCIDUMP text (chemists' notation, 1-based indices).
pub fn parse_fcidump(text: &str) -> Result<Fcidump> {
    let upper = text.to_ascii_uppercase();
    let end = ["&END", "/"]
        .iter()
        .filter_map(|m| upper.find(m).map(|i| i + m.len()))
        .min()
        .ok_or_else(|| Error::Parse("FCIDUMP: missing end of &FCI header".into()))?;
    let (header, body) = text.split_at(end);
    let norb = header_values(header, "NORB")
        .and_then(|v| v.first().cloned())
        .ok_or_else(|| Error::Parse("FCIDUMP: NORB missing".into()))?;
    let norb = parse_int(&norb, "NORB")? as usize;
    let int_field = |key: &str, default: i64| -> Result<i64> {
        match header_values(header, key).and_then(|v| v.first().cloned()) {
            Some(v) => parse_int(&v, key),
            None => Ok(default),
        }
    };
    let nelec = int_field("NELEC", 0)? as usize;
    let ms2 = int_field("MS2", 0)?;
    let isym = int_field("ISYM", 1)?;
    let orbsym = match header_values(header, "ORBSYM") {
        Some(v) => v
            .iter()
            .map(|s| parse_int(s, "ORBSYM"))
            .collect::<Result<Vec<_>>>()?,
        None => vec![1; norb],
    };
    let mut ham = FciHamiltonian::zeros(norb);
    for (lineno, line) in body.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(Error::Parse(format!(
                "FCIDUMP: integral line {} has {} fields",
                lineno + 1,
                fields.len()
            )));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "e")
            .parse()
            .map_err(|_| Error::Parse(format!("FCIDUMP: bad value `{}`", fields[0])))?;
        let mut idx = [0usize; 4];
        for (k, f) in fields[1..].iter().enumerate() {
            let i = parse_int(f, "index")?;
            if i < 0 || i as usize > norb {
                return Err(Error::Parse(format!("FCIDUMP: index {i} outside 0..{norb}")));
            }
            idx[k] = i as usize;
        }
        match idx {
            [0, 0, 0, 0] => ham.set_core(value),
            [i, j, 0, 0] if i > 0 && j > 0 => ham.set_one(i - 1, j - 1, value),
            [_, 0, 0, 0] => {} // orbital energies
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ham.set_two(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::Parse(format!(
                    "FCIDUMP: unsupported index pattern {idx:?}"
                )))
            }
        }
    }
    Ok(Fcidump {
        hamiltonian: ham,
        nelec,
        ms2,
        orbsym,
        isym,
    })
}

pub fn read_fcidump(path: &Path) -> Result<Fcidump> {
    parse_fcidump(&std::fs::read_to_string(path)?)
}

/// Emits the canonical nonzero integrals (`i >= j`, `k >= l`, `ij >= kl`).
pub fn format_fcidump(f: &Fcidump) -> String {
    let h = &f.hamiltonian;
    let n = h.n_spatial();
    let orbsym: Vec<String> = f.orbsym.iter().map(i64::to_string).collect();
    let mut s = format!(
        "&FCI NORB={n},NELEC={},MS2={},\n ORBSYM={},\n ISYM={},\n&END\n",
        f.nelec,
        f.ms2,
        orbsym.join(","),
        f.isym
    );
    let pair = |a: usize, b: usize| a * (a + 1) / 2 + b;
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if pair(i, j) < pair(k, l) {
                        continue;
                    }
                    let v = h.eri(i, j, k, l);
                    if v != 0.0 {
                        let _ = writeln!(s, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = h.h()[(i, j)];
            if v != 0.0 {
                let _ = writeln!(s, "{v:e} {} {} 0 0", i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(s, "{:e} 0 0 0 0", h.core());
    s
}

pub fn write_fcidump(path: &Path, f: &Fcidump) -> Result<()> {
    std::fs::write(path, format_fcidump(f))?;
    Ok(())
}
