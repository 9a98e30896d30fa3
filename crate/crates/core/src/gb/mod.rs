//! The good Boussinesq equation in its first-order complex form and the
//! filtered Lie-Trotter splitting (FLTS) integrator.
//!
//! The physical state `(z, z_t)` maps to `u = z + 1/2 - i⟨∂_x²⟩^{-1} z_t`,
//! which obeys
//!
//! ```text
//! ∂_t u = i⟨∂_x²⟩u - (i/4)⟨∂_x²⟩^{-1} Π_τ[2(u+ū) + ∂_x²(Π_τu + Π_τū)²]
//! ```
//!
//! Each step applies the exact nonlinear sub-flow, the filter and then the
//! exact linear dispersion.

mod config;
mod evolve;
mod flow;
mod state;

pub use config::SolverConfig;
pub(crate) use config::step_count as config_step_count;
pub use evolve::{evolve, evolve_steps, evolve_trajectory, evolve_u, Snapshot, Trajectory};
pub use flow::{flts_step, linear_flow, nonlinear_flow, FltsStepper};
pub use state::{from_u, to_u, GBState, UField};
