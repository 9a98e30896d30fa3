use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Complex64, Cutoff, Field, SpectralGrid};

const REALITY_TOL: f64 = 1e-12;
const CORRUPTION_TOL: f64 = 1e-8;

/// Physical state `(z, z_t)`: both real fields on one grid.
#[derive(Clone, Debug)]
pub struct GBState {
    z: Field,
    zt: Field,
}

impl GBState {
    /// Accepts fields that are real up to `1e-12` relative Hermitian defect
    /// and stores their exactly Hermitian parts.
    pub fn new(z: Field, zt: Field) -> Result<Self> {
        z.same_grid(&zt)?;
        for (name, f) in [("z", &z), ("z_t", &zt)] {
            let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
            if f.hermitian_defect() > REALITY_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::CorruptedState(format!("{name} is not real-valued")));
            }
        }
        Ok(GBState { z: z.hermitize(), zt: zt.hermitize() })
    }

    pub fn from_real_values(grid: Arc<SpectralGrid>, z: &[f64], zt: &[f64]) -> Result<Self> {
        let z = Field::from_real_values(grid.clone(), z)?;
        let zt = Field::from_real_values(grid, zt)?;
        Ok(GBState { z, zt })
    }

    pub fn from_fns(grid: Arc<SpectralGrid>, z: impl Fn(f64) -> f64, zt: impl Fn(f64) -> f64) -> Self {
        GBState {
            z: Field::from_real_fn(grid.clone(), z),
            zt: Field::from_real_fn(grid, zt),
        }
    }

    pub fn zero(grid: Arc<SpectralGrid>) -> Self {
        GBState { z: Field::zeros(grid.clone()), zt: Field::zeros(grid) }
    }

    pub fn z(&self) -> &Field {
        &self.z
    }

    pub fn zt(&self) -> &Field {
        &self.zt
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        self.z.grid()
    }

    pub fn project(&self, filter: Option<Cutoff>) -> GBState {
        match filter {
            Some(c) => GBState { z: self.z.project(c), zt: self.zt.project(c) },
            None => self.clone(),
        }
    }

    pub fn into_parts(self) -> (Field, Field) {
        (self.z, self.zt)
    }
}

/// Complex variable `u = z + 1/2 - i⟨∂_x²⟩^{-1} z_t`.
#[derive(Clone, Debug)]
pub struct UField(pub Field);

impl UField {
    pub fn field(&self) -> &Field {
        &self.0
    }

    pub fn into_field(self) -> Field {
        self.0
    }

    pub fn coeffs(&self) -> std::borrow::Cow<'_, [Complex64]> {
        self.0.coeffs()
    }
}

/// `u = Π z + 1/2 - i⟨∂_x²⟩^{-1} Π z_t`, with `Π` the identity when
/// `filter` is `None`.
pub fn to_u(state: &GBState, filter: Option<Cutoff>) -> UField {
    let p = state.project(filter);
    let damped = p.zt.bracket_op(-1.0).scale(Complex64::new(0.0, -1.0));
    UField((&p.z + &damped).add_constant(Complex64::new(0.5, 0.0)))
}

/// Recovers `z = (u+ū)/2 - 1/2` and `z_t = (i/2)⟨∂_x²⟩(u-ū)`.
pub fn from_u(u: &UField) -> Result<GBState> {
    let u = &u.0;
    if !u.is_finite() {
        return Err(Error::CorruptedState("non-finite coefficients in u".into()));
    }
    let ubar = u.conj();
    let z = (&(u + &ubar) * 0.5).add_constant(Complex64::new(-0.5, 0.0));
    let zt = (u - &ubar).bracket_op(1.0).scale(Complex64::new(0.0, 0.5));
    for (name, f) in [("z", &z), ("z_t", &zt)] {
        let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        if f.hermitian_defect() > CORRUPTION_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::CorruptedState(format!("recovered {name} has an imaginary part")));
        }
    }
    Ok(GBState { z: z.hermitize(), zt: zt.hermitize() })
}
