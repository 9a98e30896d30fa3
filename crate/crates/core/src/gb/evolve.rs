use super::{from_u, to_u, FltsStepper, GBState, SolverConfig, UField};
use crate::error::{Error, Result};
use crate::spectral::Field;

/// A recovered state at `t_n = n·τ`.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub state: GBState,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// States at every `stride`-th step, including step 0; the final step
    /// is always included.
    pub snapshots: Vec<Snapshot>,
    pub final_u: UField,
}

impl Trajectory {
    pub fn final_state(&self) -> &GBState {
        &self.snapshots.last().expect("trajectory has a final snapshot").state
    }
}

/// Runs `N = T/τ` FLTS steps from `state0` and returns the state at `T`.
pub fn evolve(state0: &GBState, cfg: &SolverConfig) -> Result<GBState> {
    evolve_steps(state0, cfg, cfg.steps()?)
}

/// Like [`evolve`] with an explicit step count; `steps = 0` returns the
/// filtered initial state.
pub fn evolve_steps(state0: &GBState, cfg: &SolverConfig, steps: usize) -> Result<GBState> {
    check_grid(state0, cfg)?;
    let u0 = to_u(state0, cfg.filter()?);
    from_u(&evolve_u(&u0, cfg, steps)?)
}

/// Advances `u0` by `steps` FLTS steps.
pub fn evolve_u(u0: &UField, cfg: &SolverConfig, steps: usize) -> Result<UField> {
    let grid = u0.field().grid().clone();
    let mut stepper = FltsStepper::new(grid.clone(), cfg)?;
    let mut u = u0.coeffs().into_owned();
    for _ in 0..steps {
        stepper.step(&mut u)?;
    }
    Ok(UField(Field::from_coeffs(grid, u)?))
}

/// Full run recording every `stride`-th state. `stride = None` records
/// only the initial and final states.
pub fn evolve_trajectory(state0: &GBState, cfg: &SolverConfig, stride: Option<usize>) -> Result<Trajectory> {
    check_grid(state0, cfg)?;
    let steps = cfg.steps()?;
    let grid = state0.grid().clone();
    let mut stepper = FltsStepper::new(grid.clone(), cfg)?;
    let u0 = to_u(state0, cfg.filter()?);
    let mut u = u0.coeffs().into_owned();
    let snap = |n: usize, u: &[_]| -> Result<Snapshot> {
        let state = from_u(&UField(Field::from_coeffs(grid.clone(), u.to_vec())?))?;
        Ok(Snapshot { step: n, time: n as f64 * cfg.tau, state })
    };
    let mut snapshots = vec![snap(0, &u)?];
    for n in 1..=steps {
        stepper.step(&mut u)?;
        let due = stride.is_some_and(|s| s > 0 && n % s == 0);
        if due || n == steps {
            snapshots.push(snap(n, &u)?);
        }
    }
    Ok(Trajectory { snapshots, final_u: UField(Field::from_coeffs(grid, u)?) })
}

fn check_grid(state: &GBState, cfg: &SolverConfig) -> Result<()> {
    if state.grid().len() == cfg.grid_size {
        Ok(())
    } else {
        Err(Error::GridMismatch { left: cfg.grid_size, right: state.grid().len() })
    }
}
