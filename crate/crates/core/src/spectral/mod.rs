//! Periodic spectral infrastructure on [-π, π): grid, transforms, Fourier
//! multipliers, the frequency filter and Sobolev norms.
//!
//! Coefficients follow `f(x) = Σ_k c_k e^{ikx}` with
//! `c_k ≈ (1/2π) ∫ f e^{-ikx} dx`, so a pure mode `e^{ix}` has `c_1 = 1`.

mod cutoff;
mod field;
mod grid;
mod product;

pub use cutoff::Cutoff;
pub use field::Field;
pub use grid::SpectralGrid;
pub use product::SquarePlan;

pub use num_complex::Complex64;

/// `(1 + k⁴)^{1/2}`, the symbol of `⟨∂_x²⟩`.
#[inline]
pub fn bracket_symbol(k: i64) -> f64 {
    let k2 = (k * k) as f64;
    (1.0 + k2 * k2).sqrt()
}

/// `(1 + k²)^{s}`, the squared `H^s` weight.
#[inline]
pub fn sobolev_weight(k: i64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        (1.0 + (k * k) as f64).powf(s)
    }
}
