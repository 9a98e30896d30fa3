use crate::error::{Error, Result};
use crate::spectral::Cutoff;

/// Parameters of one FLTS run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub tau: f64,
    pub final_time: f64,
    pub grid_size: usize,
    /// `false` replaces `Π_τ` by the identity (classical Lie-Trotter).
    pub filter_enabled: bool,
    /// `false` drops the `∂_x²(·)²` term.
    pub nonlinearity_enabled: bool,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(tau: f64, final_time: f64, grid_size: usize) -> Self {
        SolverConfig {
            tau,
            final_time,
            grid_size,
            filter_enabled: true,
            nonlinearity_enabled: true,
            seed: 0,
        }
    }

    pub fn with_filter(mut self, on: bool) -> Self {
        self.filter_enabled = on;
        self
    }

    pub fn with_nonlinearity(mut self, on: bool) -> Self {
        self.nonlinearity_enabled = on;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of steps `N = T/τ`; the quotient must round to an integer
    /// exactly.
    pub fn steps(&self) -> Result<usize> {
        self.validate()?;
        step_count(self.final_time, self.tau)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidConfig(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "final time must be positive, got {}",
                self.final_time
            )));
        }
        if self.grid_size < 4 || !self.grid_size.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "grid size must be a power of two >= 4, got {}",
                self.grid_size
            )));
        }
        step_count(self.final_time, self.tau).map(|_| ())
    }

    /// The filter in effect, `None` when disabled.
    pub fn filter(&self) -> Result<Option<Cutoff>> {
        if self.filter_enabled {
            Cutoff::from_tau(self.tau).map(Some)
        } else {
            Ok(None)
        }
    }
}

/// `T/τ` as an integer, or an error when the division is not exact.
pub(crate) fn step_count(final_time: f64, tau: f64) -> Result<usize> {
    let q = final_time / tau;
    if !q.is_finite() || q.round() != q || q < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "final time {final_time} is not an integer multiple of step {tau}"
        )));
    }
    Ok(q as usize)
}
