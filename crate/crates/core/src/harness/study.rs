use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::{error_metric, fit_order, ErrorMetric};
use crate::error::{Error, Result};
use crate::gb::{config_step_count, evolve, GBState, SolverConfig};
use crate::oracles::{rk4_reference, OracleConfig};
use crate::roughdata::{generate, PsiMode, RoughDataSpec};
use crate::spectral::{Cutoff, SpectralGrid};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "GBFLTS_WORKERS";

const MIN_FIT_POINTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialData {
    /// Normalized noise in `H^s`, one field per entry of `s_list`.
    Rough(PsiMode),
    /// `φ₀ = 0.1 cos x`, `ψ₀ = 0.1 sin x`.
    Smooth,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceKind {
    /// FLTS itself at `min(τ)/divisor`.
    FltsFine { divisor: u32 },
    /// RK4 on the system projected at the smallest study step;
    /// `tau_ref = None` uses `min(τ)/4`.
    Rk4 { tau_ref: Option<f64> },
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceKind::FltsFine { divisor } => write!(f, "flts_fine(min_tau/{divisor})"),
            ReferenceKind::Rk4 { tau_ref: Some(t) } => write!(f, "rk4(tau_ref={t:e})"),
            ReferenceKind::Rk4 { tau_ref: None } => write!(f, "rk4(tau_ref=min_tau/4)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudySpec {
    pub s_list: Vec<f64>,
    /// Strictly decreasing.
    pub tau_list: Vec<f64>,
    pub final_time: f64,
    pub grid_size: usize,
    pub seed: u64,
    pub data: InitialData,
    pub reference: ReferenceKind,
    /// Worker threads; `None` falls back to [`WORKERS_ENV`], then to the
    /// machine's parallelism.
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
}

impl StudySpec {
    /// Desk-scale rough-data study: `M = 2^12`, `T = 0.5`,
    /// `τ_j = 10^{-2}·2^{-j}` for `j = 0..=6`, FLTS reference at `min(τ)/128`.
    pub fn desk_scale(s_list: Vec<f64>, seed: u64) -> Self {
        StudySpec {
            s_list,
            tau_list: (0..7).map(|j| 1e-2 / f64::from(1u32 << j)).collect(),
            final_time: 0.5,
            grid_size: 1 << 12,
            seed,
            data: InitialData::Rough(PsiMode::Zero),
            reference: ReferenceKind::FltsFine { divisor: 128 },
            workers: None,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.s_list.is_empty() {
            return bad("s_list is empty".into());
        }
        if self.tau_list.is_empty() {
            return bad("tau_list is empty".into());
        }
        if let InitialData::Rough(_) = self.data {
            if let Some(s) = self.s_list.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
                return bad(format!("regularity {s} must be positive"));
            }
        }
        if self.tau_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("tau_list must be strictly decreasing".into());
        }
        let probe = SolverConfig::new(1.0, 1.0, self.grid_size);
        for &tau in &self.tau_list {
            SolverConfig { tau, final_time: self.final_time, ..probe.clone() }.validate()?;
        }
        let ref_tau = self.reference_tau();
        if !(ref_tau.is_finite() && ref_tau > 0.0) {
            return bad(format!("reference step {ref_tau} must be positive"));
        }
        config_step_count(self.final_time, ref_tau)?;
        if ref_tau > self.min_tau() {
            return bad("reference step exceeds the smallest study step".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn min_tau(&self) -> f64 {
        self.tau_list.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn reference_tau(&self) -> f64 {
        match self.reference {
            ReferenceKind::FltsFine { divisor } => self.min_tau() / f64::from(divisor),
            ReferenceKind::Rk4 { tau_ref } => tau_ref.unwrap_or(self.min_tau() / 4.0),
        }
    }

    fn initial_state(&self, s: f64) -> Result<GBState> {
        match self.data {
            InitialData::Rough(psi) => {
                generate(&RoughDataSpec { s, grid_size: self.grid_size, seed: self.seed, psi_mode: psi })
            }
            InitialData::Smooth => Ok(smooth_data(SpectralGrid::new(self.grid_size)?)),
        }
    }

    fn reference_state(&self, state0: &GBState) -> Result<GBState> {
        let tau_ref = self.reference_tau();
        match self.reference {
            ReferenceKind::FltsFine { .. } => {
                evolve(state0, &SolverConfig::new(tau_ref, self.final_time, self.grid_size).with_seed(self.seed))
            }
            ReferenceKind::Rk4 { .. } => {
                let filter = Some(Cutoff::from_tau(self.min_tau())?);
                let cfg = OracleConfig::rk4(tau_ref, self.grid_size).with_filter(filter);
                rk4_reference(state0, &cfg, self.final_time)
            }
        }
    }
}

/// `φ₀ = 0.1 cos x`, `ψ₀ = 0.1 sin x`.
pub fn smooth_data(grid: Arc<SpectralGrid>) -> GBState {
    GBState::from_fns(grid, |x| 0.1 * x.cos(), |x| 0.1 * x.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    /// The run (or its reference) produced non-finite values.
    BlowUp,
    /// Any other failure of the run or its reference.
    Failed,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "ok",
            RunStatus::BlowUp => "blowup",
            RunStatus::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub s: f64,
    pub tau: f64,
    pub error: Option<ErrorMetric>,
    pub wall_time: f64,
    pub status: RunStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderFit {
    pub s: f64,
    /// `None` when fewer than three rows of this `s` are valid.
    pub order: Option<f64>,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<Row>,
    pub fits: Vec<OrderFit>,
    pub seed: u64,
    pub grid_size: usize,
    pub final_time: f64,
    pub reference: String,
    pub workers: usize,
}

impl ConvergenceReport {
    /// Sorts rows by `(s ascending, τ descending)` and fits one order per `s`.
    pub fn from_rows(mut rows: Vec<Row>, seed: u64, grid_size: usize, final_time: f64, reference: String) -> Self {
        rows.sort_by(|a, b| a.s.total_cmp(&b.s).then(b.tau.total_cmp(&a.tau)));
        let mut s_values: Vec<f64> = rows.iter().map(|r| r.s).collect();
        s_values.dedup();
        let fits = s_values
            .into_iter()
            .map(|s| {
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.s == s && r.status == RunStatus::Ok)
                    .filter_map(|r| r.error.map(|e| (r.tau, e.total)))
                    .collect();
                let order = if pts.len() >= MIN_FIT_POINTS { fit_order(&pts).ok() } else { None };
                OrderFit { s, order, points: pts.len() }
            })
            .collect();
        ConvergenceReport { rows, fits, seed, grid_size, final_time, reference, workers: 1 }
    }

    pub fn order_for(&self, s: f64) -> Option<f64> {
        self.fits.iter().find(|f| f.s == s).and_then(|f| f.order)
    }
}

fn status_of(e: &Error) -> RunStatus {
    match e {
        Error::BlowUp { .. } => RunStatus::BlowUp,
        _ => RunStatus::Failed,
    }
}

/// Worker count from `StudySpec::workers`, then [`WORKERS_ENV`], then the number of
/// available cores.
pub fn resolve_workers(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every `(s, τ)` pair against a per-`s` reference at `T`.
///
/// References are computed first, then all runs are fanned out over the
/// worker pool. A failing run is recorded with its status and excluded from
/// the fit; numerical results do not depend on the worker count.
pub fn run_convergence(spec: &StudySpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    let workers = resolve_workers(spec.workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}")))?;

    let rows = pool.install(|| -> Result<Vec<Row>> {
        let prepared: Vec<(f64, Result<(GBState, GBState)>)> = spec
            .s_list
            .par_iter()
            .map(|&s| {
                let pair = spec.initial_state(s).and_then(|st| {
                    let r = spec.reference_state(&st)?;
                    Ok((st, r))
                });
                (s, pair)
            })
            .collect();
        // configuration problems in data generation are fatal, not per-row
        for (_, p) in &prepared {
            if let Err(e @ (Error::InvalidConfig(_) | Error::InvalidGrid(_))) = p {
                return Err(Error::InvalidConfig(e.to_string()));
            }
        }
        let jobs: Vec<(usize, f64)> = (0..prepared.len())
            .flat_map(|i| spec.tau_list.iter().map(move |&t| (i, t)))
            .collect();
        Ok(jobs
            .par_iter()
            .map(|&(i, tau)| {
                let (s, prepared) = &prepared[i];
                let start = Instant::now();
                let outcome = match prepared {
                    Ok((state0, reference)) => {
                        let cfg = SolverConfig::new(tau, spec.final_time, spec.grid_size).with_seed(spec.seed);
                        evolve(state0, &cfg).and_then(|num| error_metric(&num, reference))
                    }
                    Err(e) => Err(clone_kind(e)),
                };
                let wall_time = start.elapsed().as_secs_f64();
                match outcome {
                    Ok(err) => Row { s: *s, tau, error: Some(err), wall_time, status: RunStatus::Ok },
                    Err(e) => Row { s: *s, tau, error: None, wall_time, status: status_of(&e) },
                }
            })
            .collect())
    })?;
    let mut report = ConvergenceReport::from_rows(rows, spec.seed, spec.grid_size, spec.final_time, spec.reference.to_string());
    report.workers = workers;
    Ok(report)
}

fn clone_kind(e: &Error) -> Error {
    match e {
        Error::BlowUp { step, time } => Error::BlowUp { step: *step, time: *time },
        other => Error::CorruptedState(format!("reference failed: {other}")),
    }
}
