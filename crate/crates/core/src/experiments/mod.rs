//! Desk-scale harnesses for the well-posedness and singular-limit statements.
//!
//! All harnesses work in `f64` and embed the full resolved config in their
//! reports so a run can be reproduced bit for bit.

pub mod convergence;
pub mod dissipative;
pub mod losing_exponent;

use std::sync::Arc;

use crate::dynamics::{Integrator, ModelSpec, SimulationState, StepInfo, TimePolicy};
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

pub use convergence::{run_convergence_study, ConvergenceReport};
pub use dissipative::{
    empirical_delta_star, run_dissipative_global_probe, run_logdiss_wellposedness_probe, DeltaStarSweep,
    DissipativeReport, LogDissipativeReport,
};
pub use losing_exponent::{run_losing_exponent_probe, LosingExponentReport};

/// Integrates to `t_end`, calling `visit` at `t = 0` (with `dt = 0`) and after every step.
/// A blow-up is returned as `Ok(Some(error))` after the states before it were visited.
pub(crate) fn integrate(
    grid: &Arc<Grid<f64>>,
    model: &ModelSpec<f64>,
    policy: TimePolicy<f64>,
    u_ceiling: f64,
    theta0: SpectralField<f64>,
    t_end: f64,
    mut visit: impl FnMut(&SimulationState<f64>, &StepInfo<f64>),
) -> Result<Option<Error>> {
    let mut integrator = Integrator::new(grid, model, policy, u_ceiling)?;
    let mut state = SimulationState::new(theta0);
    visit(&state, &StepInfo { dt: 0.0, u_max: integrator.stepper_mut().velocity_sup(&state.theta)? });
    while state.t < t_end {
        match integrator.step_toward(&state, t_end) {
            Ok((next, info)) => {
                visit(&next, &info);
                state = next;
            }
            Err(e @ Error::BlowUp { .. }) => return Ok(Some(e)),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
