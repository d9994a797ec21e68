//! Semi-discrete right-hand side and time integration for every model family.

mod integrator;
mod model;
mod stepper;

pub use integrator::{Integrator, StepInfo, TimePolicy};
pub use model::{Dissipation, ModelSpec, SimulationState};
pub use stepper::{cfl_dt, dt_from_velocity, rhs, step_rk4, Stepper};
