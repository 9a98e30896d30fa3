//! Reference solutions independent of the splitting: classical RK4 on the
//! projected first-order system, and the closed-form linear dispersion.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gb::{from_u, to_u, GBState, UField};
use crate::spectral::{Complex64, Cutoff, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    Rk4,
    LinearExact,
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMethod::Rk4 => "rk4",
            OracleMethod::LinearExact => "linear",
        })
    }
}

impl FromStr for OracleMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(OracleMethod::Rk4),
            "linear" | "linear_exact" => Ok(OracleMethod::LinearExact),
            other => Err(Error::InvalidConfig(format!("unknown oracle method '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub method: OracleMethod,
    pub tau_ref: f64,
    pub grid_size: usize,
    pub nonlinearity_enabled: bool,
    /// Projection of the integrated system; `None` integrates the
    /// unprojected equation on the grid.
    pub filter: Option<Cutoff>,
}

impl OracleConfig {
    pub fn rk4(tau_ref: f64, grid_size: usize) -> Self {
        OracleConfig {
            method: OracleMethod::Rk4,
            tau_ref,
            grid_size,
            nonlinearity_enabled: true,
            filter: None,
        }
    }

    pub fn with_filter(mut self, filter: Option<Cutoff>) -> Self {
        self.filter = filter;
        self
    }

    pub fn with_nonlinearity(mut self, on: bool) -> Self {
        self.nonlinearity_enabled = on;
        self
    }
}

/// Dispatches on `cfg.method`.
pub fn reference(state0: &GBState, cfg: &OracleConfig, final_time: f64) -> Result<GBState> {
    match cfg.method {
        OracleMethod::Rk4 => rk4_reference(state0, cfg, final_time),
        OracleMethod::LinearExact => Ok(linear_exact(state0, final_time)),
    }
}

/// Right-hand side of the projected equation
/// `i⟨∂²⟩u - (i/4)⟨∂²⟩^{-1}Π[2(u+ū) + ∂²(Πu+Πū)²]`.
fn vector_field(u: &Field, filter: Option<Cutoff>, nonlinearity: bool) -> Field {
    let proj = |f: &Field| match filter {
        Some(c) => f.project(c),
        None => f.clone(),
    };
    let ubar = u.conj();
    let mut inner = &(u + &ubar) * 2.0;
    if nonlinearity {
        let s = &proj(u) + &proj(&ubar);
        inner = &inner + &s.square().second_derivative();
    }
    let dispersion = u.bracket_op(1.0).scale(Complex64::new(0.0, 1.0));
    let forcing = proj(&inner).bracket_op(-1.0).scale(Complex64::new(0.0, -0.25));
    &dispersion + &forcing
}

/// Classical four-stage Runge-Kutta with step `tau_ref` up to `final_time`.
pub fn rk4_reference(state0: &GBState, cfg: &OracleConfig, final_time: f64) -> Result<GBState> {
    if !(cfg.tau_ref.is_finite() && cfg.tau_ref > 0.0) {
        return Err(Error::InvalidConfig(format!("tau_ref must be positive, got {}", cfg.tau_ref)));
    }
    if state0.grid().len() != cfg.grid_size {
        return Err(Error::GridMismatch { left: cfg.grid_size, right: state0.grid().len() });
    }
    let steps = crate::gb::config_step_count(final_time, cfg.tau_ref)?;
    let h = cfg.tau_ref;
    let f = |u: &Field| vector_field(u, cfg.filter, cfg.nonlinearity_enabled);
    let mut u = to_u(state0, cfg.filter).into_field();
    for n in 0..steps {
        let k1 = f(&u);
        let k2 = f(&(&u + &(&k1 * (0.5 * h))));
        let k3 = f(&(&u + &(&k2 * (0.5 * h))));
        let k4 = f(&(&u + &(&k3 * h)));
        let incr = &(&(&k1 + &(&k2 * 2.0)) + &(&(&k3 * 2.0) + &k4)) * (h / 6.0);
        u = &u + &incr;
        if !u.is_finite() {
            return Err(Error::BlowUp { step: n + 1, time: (n + 1) as f64 * h });
        }
    }
    from_u(&UField(u))
}

/// Exact solution of the linearization about `z = -1/2`,
/// `ž_tt = -∂_x⁴ ž` with `ž = z + 1/2`: each mode oscillates at `k²`.
pub fn linear_exact(state0: &GBState, final_time: f64) -> GBState {
    let t = final_time;
    let grid = state0.grid().clone();
    let z0 = state0.z().coeffs();
    let zt0 = state0.zt().coeffs();
    let mut z = Vec::with_capacity(grid.len());
    let mut zt = Vec::with_capacity(grid.len());
    for (i, k) in grid.wavenumbers().enumerate() {
        if k == 0 {
            // ž = z + 1/2: the shift is constant, so the mean drifts linearly
            z.push(z0[i] + zt0[i] * t);
            zt.push(zt0[i]);
        } else {
            let w = (k * k) as f64;
            let (sn, cs) = (w * t).sin_cos();
            z.push(z0[i] * cs + zt0[i] * (sn / w));
            zt.push(-z0[i] * (w * sn) + zt0[i] * cs);
        }
    }
    let z = Field::from_coeffs(grid.clone(), z).expect("length matches grid");
    let zt = Field::from_coeffs(grid, zt).expect("length matches grid");
    GBState::new(z, zt).expect("real data stays real under a real multiplier")
}
