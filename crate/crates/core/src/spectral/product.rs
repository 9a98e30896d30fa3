use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::Complex64;

/// Alias-free square of a band-limited field.
///
/// Input and output are band coefficients laid out centred, slot `k + band`
/// for `k ∈ [-band, band]`. The product is formed on a zero-padded grid of
/// `P > 3·band` points, so the retained band of the square equals the exact
/// coefficient convolution.
#[derive(Clone)]
pub struct SquarePlan {
    band: usize,
    padded: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SquarePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SquarePlan")
            .field("band", &self.band)
            .field("padded", &self.padded)
            .finish()
    }
}

impl SquarePlan {
    pub fn new(band: usize) -> Self {
        let padded = (3 * band + 1).next_power_of_two().max(4);
        let mut planner = FftPlanner::new();
        SquarePlan {
            band,
            padded,
            forward: planner.plan_fft_forward(padded),
            inverse: planner.plan_fft_inverse(padded),
        }
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn padded_len(&self) -> usize {
        self.padded
    }

    /// Band slot count, `2·band + 1`.
    pub fn width(&self) -> usize {
        2 * self.band + 1
    }

    /// Squares `input` into `out`. `work` is resized as needed and may be
    /// reused across calls.
    pub fn square_into(&self, input: &[Complex64], out: &mut [Complex64], work: &mut Vec<Complex64>) {
        let width = self.width();
        assert_eq!(input.len(), width);
        assert_eq!(out.len(), width);
        let p = self.padded;
        let b = self.band as i64;
        work.clear();
        work.resize(p, Complex64::new(0.0, 0.0));
        for (slot, &c) in input.iter().enumerate() {
            let k = slot as i64 - b;
            work[k.rem_euclid(p as i64) as usize] = c;
        }
        self.inverse.process(work);
        for v in work.iter_mut() {
            *v = *v * *v;
        }
        self.forward.process(work);
        let scale = 1.0 / p as f64;
        for (slot, o) in out.iter_mut().enumerate() {
            let k = slot as i64 - b;
            *o = work[k.rem_euclid(p as i64) as usize] * scale;
        }
    }
}
