//! Seeded generation of normalized `H^s` initial data from uniform noise.
//!
//! `Z ~ U[0,1)^M`, `Z₁ = |∂_x|^{-s} Z` (mean removed), and
//! `φ₀ = (Z₁ + c‖Z₁‖_∞) / ‖Z₁ + c‖Z₁‖_∞‖_{H^s}` with `c ~ U[0,1)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::gb::GBState;
use crate::spectral::{Complex64, Field, SpectralGrid};

/// Identifies the random stream layout; recorded in every output header.
pub const GENERATOR_VERSION: &str = "chacha20-rand0.8-v1";

const PHI_STREAM: u64 = 0;
const PSI_STREAM: u64 = 1;

/// Choice of initial velocity `ψ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PsiMode {
    #[default]
    Zero,
    /// Same construction with exponent `s - 2`, normalized in `H^{s-2}`.
    Rough,
}

impl fmt::Display for PsiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PsiMode::Zero => "zero",
            PsiMode::Rough => "rough",
        })
    }
}

impl FromStr for PsiMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(PsiMode::Zero),
            "rough" => Ok(PsiMode::Rough),
            other => Err(Error::InvalidConfig(format!("unknown psi mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoughDataSpec {
    pub s: f64,
    pub grid_size: usize,
    pub seed: u64,
    pub psi_mode: PsiMode,
}

impl RoughDataSpec {
    pub fn new(s: f64, grid_size: usize, seed: u64) -> Self {
        RoughDataSpec { s, grid_size, seed, psi_mode: PsiMode::Zero }
    }

    pub fn with_psi(mut self, psi_mode: PsiMode) -> Self {
        self.psi_mode = psi_mode;
        self
    }
}

/// `|∂_x|^{-s}`: scales mode `k ≠ 0` by `|k|^{-s}` and removes the mean.
pub fn fractional_smoothing(f: &Field, s: f64) -> Field {
    f.apply_real_multiplier(|k| if k == 0 { 0.0 } else { (k.unsigned_abs() as f64).powf(-s) })
}

/// The smoothed noise `Z₁` and the shift draw `c` for one random stream.
pub fn smoothed_noise(grid: &Arc<SpectralGrid>, s: f64, seed: u64, stream: u64) -> (Field, f64) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let noise: Vec<f64> = (0..grid.len()).map(|_| rng.gen::<f64>()).collect();
    let c = rng.gen::<f64>();
    let z = Field::from_real_values(grid.clone(), &noise).expect("sample count matches grid");
    (fractional_smoothing(&z, s), c)
}

/// `(Z₁ + c‖Z₁‖_∞) / ‖Z₁ + c‖Z₁‖_∞‖_{H^s}`.
pub fn normalize(z1: &Field, c: f64, s: f64) -> Result<Field> {
    let sup = z1.real_values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let shifted = z1.clone().add_constant(Complex64::new(c * sup, 0.0));
    let norm = shifted.sobolev_norm(s);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::DegenerateData(format!("H^{s} norm of shifted noise is {norm}")));
    }
    Ok(&shifted * (1.0 / norm))
}

/// Generates `(φ₀, ψ₀)` on an `M`-point grid.
pub fn generate(spec: &RoughDataSpec) -> Result<GBState> {
    if !(spec.s.is_finite() && spec.s > 0.0) {
        return Err(Error::InvalidConfig(format!("regularity s must be positive, got {}", spec.s)));
    }
    let grid = SpectralGrid::new(spec.grid_size)?;
    let (z1, c) = smoothed_noise(&grid, spec.s, spec.seed, PHI_STREAM);
    let phi = normalize(&z1, c, spec.s)?;
    let psi = match spec.psi_mode {
        PsiMode::Zero => Field::zeros(grid),
        PsiMode::Rough => {
            let s = spec.s - 2.0;
            let (w1, c) = smoothed_noise(&grid, s, spec.seed, PSI_STREAM);
            normalize(&w1, c, s)?
        }
    };
    GBState::new(phi, psi)
}
