use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::{Complex64, SquarePlan};
use crate::error::{Error, Result};

/// Uniform periodic grid `x_j = -π + j·2π/M`, `0 ≤ j < M`, with wavenumbers
/// `-M/2 ..= M/2-1`. Owns the transform plans; immutable and shareable.
pub struct SpectralGrid {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    square: SquarePlan,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid").field("size", &self.size).finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
    }
}

impl SpectralGrid {
    pub fn new(size: usize) -> Result<Arc<Self>> {
        if size < 4 || !size.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "node count must be even and at least 4, got {size}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Arc::new(SpectralGrid {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
            square: SquarePlan::new(size / 2 - 1),
        }))
    }

    /// Node count `M`.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.size as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -PI + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.size).map(|j| self.node(j)).collect()
    }

    /// Wavenumber stored at coefficient slot `index` (standard DFT order).
    #[inline]
    pub fn wavenumber(&self, index: usize) -> i64 {
        if index < self.size / 2 {
            index as i64
        } else {
            index as i64 - self.size as i64
        }
    }

    /// Coefficient slot of wavenumber `k`, if representable.
    #[inline]
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = (self.size / 2) as i64;
        if k < -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.size as i64) as usize)
        }
    }

    /// Slot holding the conjugate partner `-k` of slot `index`. The Nyquist
    /// slot is its own partner.
    #[inline]
    pub fn partner(&self, index: usize) -> usize {
        (self.size - index) % self.size
    }

    pub fn wavenumbers(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.size).map(move |i| self.wavenumber(i))
    }

    /// Full-band alias-free squaring plan (`|k| ≤ M/2 - 1`).
    pub fn square_plan(&self) -> &SquarePlan {
        &self.square
    }

    /// Nodal samples to coefficients, `c_k = (1/M) Σ_j f(x_j) e^{-ik x_j}`.
    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.size, "sample count does not match grid");
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        // e^{-ik x_j} = (-1)^k e^{-2πi jk/M} because x_0 = -π.
        let scale = 1.0 / self.size as f64;
        for (i, c) in buf.iter_mut().enumerate() {
            *c *= if i % 2 == 0 { scale } else { -scale };
        }
        buf
    }

    /// Coefficients to nodal samples, `f(x_j) = Σ_k c_k e^{ik x_j}`.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.size, "coefficient count does not match grid");
        let mut buf: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c } else { -c })
            .collect();
        self.inverse.process(&mut buf);
        buf
    }
}
