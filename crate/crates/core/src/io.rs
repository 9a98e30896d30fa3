//! State files.
//!
//! Text (`*.txt`, `*.dat` or anything not ending in `.bin`): `#` header
//! lines of `key=value` pairs, then one row `x z z_t` per node.
//!
//! Binary (`*.bin`), little endian:
//!
//! ```text
//! b"GBFS" | u32 version | u32 header length | header (UTF-8 key=value lines)
//! | u64 M | M × (f64 re, f64 im) z coefficients | M × (f64, f64) z_t coefficients
//! ```
//!
//! Binary files keep the coefficients bit-exact; text files keep nodal
//! values in shortest round-trip form.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gb::GBState;
use crate::roughdata::{PsiMode, GENERATOR_VERSION};
use crate::spectral::{Complex64, Field, SpectralGrid};

const MAGIC: &[u8; 4] = b"GBFS";
const VERSION: u32 = 1;
const TEXT_TAG: &str = "gbflts state v1";

/// Provenance carried alongside a state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateMeta {
    pub seed: Option<u64>,
    pub s: Option<f64>,
    pub psi_mode: Option<PsiMode>,
    pub generator: String,
    pub time: f64,
}

impl Default for StateMeta {
    fn default() -> Self {
        StateMeta { seed: None, s: None, psi_mode: None, generator: GENERATOR_VERSION.to_string(), time: 0.0 }
    }
}

impl StateMeta {
    fn header_lines(&self, grid_size: usize) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".to_string());
        vec![
            format!("generator={}", self.generator),
            format!("seed={}", opt(self.seed.map(|v| v.to_string()))),
            format!("s={}", opt(self.s.map(|v| format!("{v:e}")))),
            format!("M={grid_size}"),
            format!("psi_mode={}", opt(self.psi_mode.map(|v| v.to_string()))),
            format!("t={:e}", self.time),
        ]
    }

    fn parse_pair(&mut self, key: &str, value: &str, grid_size: &mut Option<usize>) -> Result<()> {
        let bad = |what: &str| Error::Format(format!("bad {what} '{value}'"));
        let none = value == "none";
        match key {
            "generator" => self.generator = value.to_string(),
            "seed" => self.seed = if none { None } else { Some(value.parse().map_err(|_| bad("seed"))?) },
            "s" => self.s = if none { None } else { Some(value.parse().map_err(|_| bad("s"))?) },
            "M" => *grid_size = Some(value.parse().map_err(|_| bad("M"))?),
            "psi_mode" => {
                self.psi_mode = if none { None } else { Some(value.parse().map_err(|_| bad("psi_mode"))?) }
            }
            "t" => self.time = value.parse().map_err(|_| bad("t"))?,
            _ => {}
        }
        Ok(())
    }
}

pub fn save(path: &Path, state: &GBState, meta: &StateMeta) -> Result<()> {
    let file = BufWriter::new(fs::File::create(path)?);
    if is_binary(path) {
        write_binary(file, state, meta)
    } else {
        write_text(file, state, meta)
    }
}

pub fn load(path: &Path) -> Result<(GBState, StateMeta)> {
    let file = BufReader::new(fs::File::open(path)?);
    if is_binary(path) {
        read_binary(file)
    } else {
        read_text(file)
    }
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "bin")
}

pub fn write_text(mut w: impl Write, state: &GBState, meta: &StateMeta) -> Result<()> {
    let grid = state.grid();
    writeln!(w, "# {TEXT_TAG}")?;
    for line in meta.header_lines(grid.len()) {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "# columns: x z z_t")?;
    let z = state.z().real_values();
    let zt = state.zt().real_values();
    for j in 0..grid.len() {
        writeln!(w, "{:e} {:e} {:e}", grid.node(j), z[j], zt[j])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_text(r: impl BufRead) -> Result<(GBState, StateMeta)> {
    let mut meta = StateMeta::default();
    let mut grid_size = None;
    let mut z = Vec::new();
    let mut zt = Vec::new();
    let mut tagged = false;
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if rest == TEXT_TAG {
                tagged = true;
            } else if let Some((k, v)) = rest.split_once('=') {
                meta.parse_pair(k.trim(), v.trim(), &mut grid_size)?;
            }
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 3 {
            return Err(Error::Format(format!("expected 3 columns, got '{line}'")));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Format(format!("bad number '{s}'")));
        z.push(num(cols[1])?);
        zt.push(num(cols[2])?);
    }
    if !tagged {
        return Err(Error::Format("missing state header".into()));
    }
    let m = grid_size.unwrap_or(z.len());
    if m != z.len() {
        return Err(Error::Format(format!("header says M={m} but found {} rows", z.len())));
    }
    let grid = SpectralGrid::new(m).map_err(|e| Error::Format(e.to_string()))?;
    let state = GBState::from_real_values(grid, &z, &zt)?;
    Ok((state, meta))
}

pub fn write_binary(mut w: impl Write, state: &GBState, meta: &StateMeta) -> Result<()> {
    let m = state.grid().len();
    let header = meta.header_lines(m).join("\n");
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(header.len() as u32).to_le_bytes())?;
    w.write_all(header.as_bytes())?;
    w.write_all(&(m as u64).to_le_bytes())?;
    for f in [state.z(), state.zt()] {
        for c in f.coeffs().iter() {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary(mut r: impl Read) -> Result<(GBState, StateMeta)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a binary state file".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported binary version {version}")));
    }
    let len = read_u32(&mut r)? as usize;
    let mut header = vec![0u8; len];
    r.read_exact(&mut header)?;
    let header = String::from_utf8(header).map_err(|_| Error::Format("header is not UTF-8".into()))?;
    let mut meta = StateMeta::default();
    let mut grid_size = None;
    for line in header.lines() {
        if let Some((k, v)) = line.split_once('=') {
            meta.parse_pair(k, v, &mut grid_size)?;
        }
    }
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    let m = u64::from_le_bytes(buf) as usize;
    if grid_size.is_some_and(|g| g != m) {
        return Err(Error::Format("grid size disagrees with header".into()));
    }
    let grid = SpectralGrid::new(m).map_err(|e| Error::Format(e.to_string()))?;
    let mut read_field = || -> Result<Field> {
        let mut coeffs = Vec::with_capacity(m);
        for _ in 0..m {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            coeffs.push(Complex64::new(re, im));
        }
        Field::from_coeffs(grid.clone(), coeffs)
    };
    let z = read_field()?;
    let zt = read_field()?;
    Ok((GBState::new(z, zt)?, meta))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
