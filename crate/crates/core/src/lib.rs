//! Filtered Lie-Trotter splitting for the "good" Boussinesq equation
//!
//! ```text
//! z_tt + z_xxxx - z_xx - (z²)_xx = 0,   x ∈ [-π, π) periodic
//! ```
//!
//! with rough initial data, independent reference solvers and a
//! convergence-study harness.

pub mod error;
pub mod gb;
pub mod harness;
pub mod io;
pub mod oracles;
pub mod roughdata;
pub mod spectral;

pub use error::{Error, Result};
pub use gb::{evolve, GBState, SolverConfig, UField};
pub use spectral::{Complex64, Cutoff, Field, SpectralGrid};
