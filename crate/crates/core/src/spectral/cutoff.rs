use crate::error::{Error, Result};

/// Frequency cutoff of the filter `Π_τ`: keeps every wavenumber with
/// `|k| ≤ τ^{-1/2}` (closed interval).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    tau: f64,
    kmax: u64,
}

// Grids never come close to this; it only bounds the integer search.
const KMAX_CAP: u64 = 1 << 40;

impl Cutoff {
    pub fn from_tau(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "filter step must be positive and finite, got {tau}"
            )));
        }
        let inv = 1.0 / tau;
        let mut k = (inv.sqrt().floor() as u64).min(KMAX_CAP);
        // k² ≤ 1/τ is the defining test; fix up any rounding in sqrt.
        while k < KMAX_CAP && ((k + 1) as f64) * ((k + 1) as f64) <= inv {
            k += 1;
        }
        while k > 0 && (k as f64) * (k as f64) > inv {
            k -= 1;
        }
        Ok(Cutoff { tau, kmax: k })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Largest retained `|k|`.
    pub fn max_wavenumber(&self) -> u64 {
        self.kmax
    }

    #[inline]
    pub fn keeps(&self, k: i64) -> bool {
        k.unsigned_abs() <= self.kmax
    }
}
