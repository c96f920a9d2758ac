//! `PFLD1` binary field files and their JSON sidecars.
//!
//! Layout: magic `PFLD1`, little-endian `u32 n`, `u32 ncomp`, `u8` domain
//! flag (0 spectral, 1 real samples), then little-endian `f64` payload per
//! component in row-major order; spectral coefficients are interleaved
//! `(re, im)`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, RealField, SpectralError, SpectralField};

const MAGIC: &[u8; 5] = b"PFLD1";

#[derive(Debug, Clone, PartialEq)]
pub enum FieldFile {
    Spectral(SpectralField),
    Real(RealField),
}

impl FieldFile {
    pub fn grid(&self) -> Grid {
        match self {
            FieldFile::Spectral(f) => f.grid(),
            FieldFile::Real(f) => f.grid(),
        }
    }
}

pub fn write_pfld(path: &Path, field: &FieldFile) -> Result<(), SpectralError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    let grid = field.grid();
    let (ncomp, flag) = match field {
        FieldFile::Spectral(f) => (f.ncomp(), 0u8),
        FieldFile::Real(f) => (f.ncomp(), 1u8),
    };
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&(ncomp as u32).to_le_bytes())?;
    w.write_all(&[flag])?;
    match field {
        FieldFile::Spectral(f) => {
            for c in f.components() {
                for z in c {
                    w.write_all(&z.re.to_le_bytes())?;
                    w.write_all(&z.im.to_le_bytes())?;
                }
            }
        }
        FieldFile::Real(f) => {
            for c in f.components() {
                for x in c {
                    w.write_all(&x.to_le_bytes())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32, SpectralError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64s(r: &mut impl Read, count: usize) -> Result<Vec<f64>, SpectralError> {
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            SpectralError::Format("truncated payload".into())
        } else {
            e.into()
        }
    })?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn read_pfld(path: &Path) -> Result<FieldFile, SpectralError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SpectralError::Format("bad magic, not a PFLD1 file".into()));
    }
    let n = read_u32(&mut r)? as usize;
    let ncomp = read_u32(&mut r)? as usize;
    let mut flag = [0u8; 1];
    r.read_exact(&mut flag)?;
    let grid = Grid::new(n)?;
    if ncomp != 1 && ncomp != 3 {
        return Err(SpectralError::Format(format!("ncomp = {ncomp}")));
    }
    let field = match flag[0] {
        0 => {
            let mut comps = Vec::with_capacity(ncomp);
            for _ in 0..ncomp {
                let raw = read_f64s(&mut r, 2 * grid.len())?;
                comps.push(
                    raw.chunks_exact(2)
                        .map(|p| Complex64::new(p[0], p[1]))
                        .collect(),
                );
            }
            FieldFile::Spectral(SpectralField::from_components(grid, comps)?)
        }
        1 => {
            let mut comps = Vec::with_capacity(ncomp);
            for _ in 0..ncomp {
                comps.push(read_f64s(&mut r, grid.len())?);
            }
            FieldFile::Real(RealField::from_components(grid, comps)?)
        }
        other => return Err(SpectralError::Format(format!("domain flag {other}"))),
    };
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(SpectralError::Format("trailing bytes".into()));
    }
    Ok(field)
}

/// Provenance of a field file, stored as `<stem>.meta.json` beside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub constructor: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub parameters: serde_json::Map<String, serde_json::Value>,
}

pub fn meta_path(field_path: &Path) -> PathBuf {
    let stem = field_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    field_path.with_file_name(format!("{stem}.meta.json"))
}

pub fn write_meta(field_path: &Path, meta: &FieldMeta) -> Result<PathBuf, SpectralError> {
    let p = meta_path(field_path);
    let s = serde_json::to_string_pretty(meta).map_err(|e| SpectralError::Format(e.to_string()))?;
    std::fs::write(&p, s)?;
    Ok(p)
}

pub fn read_meta(field_path: &Path) -> Result<FieldMeta, SpectralError> {
    let s = std::fs::read_to_string(meta_path(field_path))?;
    serde_json::from_str(&s).map_err(|e| SpectralError::Format(e.to_string()))
}
