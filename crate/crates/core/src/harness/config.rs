use std::path::PathBuf;

use super::{InitialData, ReferenceKind, StudySpec};
use crate::error::{Error, Result};
use crate::roughdata::PsiMode;

/// Parses a `key = value` study file. `#` starts a comment.
///
/// Keys: `s_list`, `tau_list` (or `tau_max` with `levels`, giving
/// `tau_max·2^{-j}`), `T`, `M`, `seed`, `reference` (`flts_fine` | `rk4`),
/// `ref_divisor`, `tau_ref`, `data` (`rough` | `smooth`), `psi`
/// (`zero` | `rough`), `workers`, `output`. Lists are comma or whitespace
/// separated and accept fractions such as `1/3`.
pub fn parse_study_config(text: &str) -> Result<StudySpec> {
    let mut spec = StudySpec::desk_scale(vec![0.5], 0);
    let mut tau_max = None;
    let mut levels = None;
    let mut reference = "flts_fine".to_string();
    let mut divisor = 128u32;
    let mut tau_ref = None;
    let mut data = "rough".to_string();
    let mut psi = PsiMode::Zero;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(lineno, &format!("expected key=value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let err = |what: &str| bad(lineno, &format!("invalid {what} '{value}'"));
        match key {
            "s_list" => spec.s_list = parse_list(value).ok_or_else(|| err("s_list"))?,
            "tau_list" => spec.tau_list = parse_list(value).ok_or_else(|| err("tau_list"))?,
            "tau_max" => tau_max = Some(parse_number(value).ok_or_else(|| err("tau_max"))?),
            "levels" => levels = Some(value.parse::<u32>().map_err(|_| err("levels"))?),
            "T" => spec.final_time = parse_number(value).ok_or_else(|| err("T"))?,
            "M" => spec.grid_size = value.parse().map_err(|_| err("M"))?,
            "seed" => spec.seed = value.parse().map_err(|_| err("seed"))?,
            "reference" => reference = value.to_string(),
            "ref_divisor" => divisor = value.parse().map_err(|_| err("ref_divisor"))?,
            "tau_ref" => tau_ref = Some(parse_number(value).ok_or_else(|| err("tau_ref"))?),
            "data" => data = value.to_string(),
            "psi" => psi = value.parse()?,
            "workers" => spec.workers = Some(value.parse().map_err(|_| err("workers"))?),
            "output" => spec.output = Some(PathBuf::from(value)),
            other => return Err(bad(lineno, &format!("unknown key '{other}'"))),
        }
    }
    if let Some(t0) = tau_max {
        let n = levels.unwrap_or(7);
        spec.tau_list = (0..n).map(|j| t0 / f64::from(2u32.pow(j))).collect();
    }
    spec.reference = match reference.as_str() {
        "flts_fine" => ReferenceKind::FltsFine { divisor },
        "rk4" => ReferenceKind::Rk4 { tau_ref },
        other => return Err(Error::InvalidConfig(format!("unknown reference '{other}'"))),
    };
    spec.data = match data.as_str() {
        "rough" => InitialData::Rough(psi),
        "smooth" => InitialData::Smooth,
        other => return Err(Error::InvalidConfig(format!("unknown data kind '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn bad(lineno: usize, msg: &str) -> Error {
    Error::InvalidConfig(format!("line {}: {msg}", lineno + 1))
}

fn parse_number(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_number)
        .collect()
}
