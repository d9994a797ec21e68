use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::model::{ModelSpec, SimulationState};
use super::stepper::{dt_from_velocity, Stepper};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TimePolicy<T> {
    Fixed { dt: T },
    Cfl { cfl: T, dt_max: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo<T> {
    pub dt: T,
    /// Velocity sup-norm of the state the step started from.
    pub u_max: T,
}

/// Drives a [`Stepper`] under a step-size policy and a velocity ceiling.
pub struct Integrator<T: Scalar> {
    stepper: Stepper<T>,
    policy: TimePolicy<T>,
    u_ceiling: T,
}

impl<T: Scalar> Integrator<T> {
    pub fn new(grid: &Arc<Grid<T>>, model: &ModelSpec<T>, policy: TimePolicy<T>, u_ceiling: T) -> Result<Self> {
        match policy {
            TimePolicy::Fixed { dt } if !(dt > T::zero()) => return Err(Error::param("dt", "must be positive")),
            TimePolicy::Cfl { cfl, dt_max } => {
                if !(cfl > T::zero() && cfl <= T::one()) {
                    return Err(Error::param("cfl", "must lie in (0, 1]"));
                }
                if !(dt_max > T::zero()) {
                    return Err(Error::param("dt_max", "must be positive"));
                }
            }
            _ => {}
        }
        Ok(Self { stepper: Stepper::new(grid, model)?, policy, u_ceiling })
    }

    pub fn stepper_mut(&mut self) -> &mut Stepper<T> {
        &mut self.stepper
    }

    /// Takes one step, shortened if needed so that `t` lands exactly on `target`.
    pub fn step_toward(&mut self, state: &SimulationState<T>, target: T) -> Result<(SimulationState<T>, StepInfo<T>)> {
        let blow_up = |reason: String| Error::BlowUp { t: state.t.to_f64_lossy(), step: state.step_count, reason };
        let mut a = Vec::with_capacity(self.stepper.grid().len());
        let u_max = self.stepper.advection_into(state.theta.coeffs(), &mut a);
        if !u_max.is_finite() {
            return Err(blow_up("non-finite velocity".into()));
        }
        if u_max > self.u_ceiling {
            return Err(blow_up(format!("velocity sup-norm {u_max} exceeds ceiling {}", self.u_ceiling)));
        }
        let mut dt = match self.policy {
            TimePolicy::Fixed { dt } => dt,
            TimePolicy::Cfl { cfl, dt_max } => dt_from_velocity(u_max, self.stepper.grid().dx(), cfl, dt_max),
        };
        let remaining = target - state.t;
        let snap = T::lit(1e-12) * target.abs().max(T::one());
        let lands = state.t + dt >= target - snap;
        if lands {
            dt = remaining;
        }
        let mut next = self.stepper.step_from(state, &a, dt);
        if lands {
            next.t = target;
        }
        if !next.theta.is_finite() {
            return Err(blow_up("non-finite coefficients".into()));
        }
        Ok((next, StepInfo { dt, u_max }))
    }

    /// Steps until `t == target`, calling `on_step` after every accepted step.
    pub fn advance_to(
        &mut self,
        mut state: SimulationState<T>,
        target: T,
        mut on_step: impl FnMut(&SimulationState<T>, &StepInfo<T>),
    ) -> Result<SimulationState<T>> {
        while state.t < target {
            let (next, info) = self.step_toward(&state, target)?;
            on_step(&next, &info);
            state = next;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::Symbol;
    use crate::spectral::{forward_transform, l2_inner, RealField, SpectralField};
    use crate::dynamics::{cfl_dt, rhs, step_rk4};
    use crate::ic;

    const LOG11: f64 = 2.397_895_272_798_370_5;

    fn shear(g: &Arc<Grid<f64>>) -> SpectralField<f64> {
        forward_transform(&RealField::from_fn(g, |x, _| x.cos()).unwrap()).unwrap()
    }

    fn presets() -> Vec<ModelSpec<f64>> {
        vec![
            ModelSpec::ohkitani(10.0),
            ModelSpec::delta_sqg(0.2, 10.0),
            ModelSpec::delta_sqg_rescaled(0.2, 10.0),
            ModelSpec::dissipative_delta_sqg(0.2, 1.0, Symbol::log10(), 10.0),
            ModelSpec::log_dissipative(1.0, 2.0, 10.0),
        ]
    }

    fn random_state(n: usize, seed: u64, amplitude: f64) -> SimulationState<f64> {
        let g = Grid::periodic(n).unwrap();
        SimulationState::new(ic::random_band(&g, 1.0, 4.0, seed).unwrap().scaled(amplitude))
    }

    #[test]
    fn shear_and_zero_have_no_advection() {
        let g = Grid::periodic(16).unwrap();
        for m in presets() {
            let mut s = Stepper::new(&g, &m).unwrap();
            let (n, _) = s.advection(&shear(&g)).unwrap();
            assert!(n.coeffs().iter().all(|c| c.norm() < 1e-15), "{m:?}");
            let (z, u) = s.advection(&SpectralField::zeros(&g)).unwrap();
            assert_eq!(u, 0.0);
            assert!(z.coeffs().iter().all(|c| c.norm() == 0.0));
        }
    }

    #[test]
    fn advection_is_skew_symmetric() {
        for (i, m) in presets().iter().enumerate() {
            let state = random_state(32, 7 + i as u64, 1.0);
            let mut s = Stepper::new(state.theta.grid(), m).unwrap();
            let (n, _) = s.advection(&state.theta).unwrap();
            let scale = l2_inner(&state.theta, &state.theta).unwrap().sqrt() * l2_inner(&n, &n).unwrap().sqrt();
            assert!(l2_inner(&state.theta, &n).unwrap().abs() <= 1e-10 * scale);
            let gamma = m.biot_savart.table(state.theta.grid()).unwrap();
            let gtheta = state.theta.map_modes(|k| gamma.values()[k]);
            let gscale = l2_inner(&gtheta, &gtheta).unwrap().sqrt() * l2_inner(&n, &n).unwrap().sqrt();
            assert!(l2_inner(&gtheta, &n).unwrap().abs() <= 1e-10 * gscale);
        }
    }

    #[test]
    fn pure_damping_matches_exact_decay() {
        let g = Grid::periodic(16).unwrap();
        let model = ModelSpec::ohkitani(10.0).with_dissipation(1.0, Symbol::log10());
        for dt in [0.01, 0.3, 2.0] {
            let next = step_rk4(&SimulationState::new(shear(&g)), &model, dt).unwrap();
            let expect = 0.5 * (-LOG11 * dt).exp();
            assert!((next.theta.at(1, 0).re - expect).abs() <= 1e-15);
        }
        let r = rhs(&SimulationState::new(shear(&g)), &model).unwrap();
        assert!((r.at(1, 0).re + 0.5 * LOG11).abs() < 1e-15);
    }

    #[test]
    fn steady_shear_is_preserved() {
        let g = Grid::periodic(16).unwrap();
        for m in presets() {
            if m.dissipation.is_some() {
                continue;
            }
            let mut s = Stepper::new(&g, &m).unwrap();
            let start = SimulationState::new(shear(&g));
            let mut state = start.clone();
            for _ in 0..200 {
                state = s.step(&state, 0.01).unwrap();
            }
            let drift = state.theta.sub(&start.theta).unwrap();
            assert!(drift.coeffs().iter().all(|c| c.norm() < 1e-12));
        }
    }

    #[test]
    fn mean_is_exactly_constant_inviscid() {
        let mut state = random_state(32, 3, 1.0);
        state.theta.set_mode(0, 0, rustfft::num_complex::Complex::new(0.7, 0.0));
        let mut s = Stepper::new(state.theta.grid(), &ModelSpec::ohkitani(10.0)).unwrap();
        for _ in 0..20 {
            state = s.step(&state, 0.01).unwrap();
            assert_eq!(state.theta.mean(), 0.7);
        }
    }

    #[test]
    fn damped_runs_lose_energy() {
        let model = ModelSpec::dissipative_delta_sqg(0.3, 0.5, Symbol::log10(), 10.0);
        let mut state = random_state(32, 11, 1.0);
        let mut s = Stepper::new(state.theta.grid(), &model).unwrap();
        let mut prev = state.theta.power();
        for _ in 0..50 {
            state = s.step(&state, 0.02).unwrap();
            let p = state.theta.power();
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn rescaled_and_physical_time_agree() {
        let delta = 0.25;
        let start = random_state(32, 5, 1.0);
        let g = start.theta.grid().clone();
        let dt = 0.02;
        let steps = 25;
        let mut plain = Stepper::new(&g, &ModelSpec::delta_sqg(delta, 10.0)).unwrap();
        let mut resc = Stepper::new(&g, &ModelSpec::delta_sqg_rescaled(delta, 10.0)).unwrap();
        let (mut a, mut b) = (start.clone(), start.clone());
        for _ in 0..steps {
            a = plain.step(&a, dt).unwrap();
            b = resc.step(&b, delta * dt).unwrap();
        }
        let diff = a.theta.sub(&b.theta).unwrap().power().sqrt();
        assert!(diff <= 1e-12 * a.theta.power().sqrt(), "{diff}");

        let damped_plain = ModelSpec::dissipative_delta_sqg(delta, 0.5, Symbol::log10(), 10.0);
        let damped_resc = ModelSpec::delta_sqg_rescaled(delta, 10.0).with_dissipation(0.5, Symbol::log10());
        let a = step_rk4(&start, &damped_plain, dt).unwrap();
        let b = step_rk4(&start, &damped_resc, delta * dt).unwrap();
        assert!(a.theta.sub(&b.theta).unwrap().power().sqrt() <= 1e-12 * a.theta.power().sqrt());
    }

    #[test]
    fn cfl_arithmetic() {
        assert_eq!(dt_from_velocity(0.0, 0.1, 0.5, 0.3), 0.3);
        let dx = std::f64::consts::TAU / 128.0;
        assert!((dt_from_velocity(1.0, dx, 0.5, 1.0) - 0.024_543_692_606_170_26).abs() < 1e-15);
        let dx2 = std::f64::consts::TAU / 256.0;
        assert_eq!(dt_from_velocity(1.0, dx2, 0.5, 1.0), 0.5 * dt_from_velocity(1.0, dx, 0.5, 1.0));
        let g = Grid::periodic(16).unwrap();
        let z = SimulationState::new(SpectralField::zeros(&g));
        assert_eq!(cfl_dt(&z, &ModelSpec::ohkitani(10.0), 0.5, 0.2).unwrap(), 0.2);
        let u = LOG11;
        let dt = cfl_dt(&SimulationState::new(shear(&g)), &ModelSpec::ohkitani(10.0), 0.5, 10.0).unwrap();
        assert!((dt - 0.5 * g.dx() / u).abs() < 1e-15);
        assert!(cfl_dt(&z, &ModelSpec::ohkitani(10.0), 1.5, 0.2).is_err());
    }

    #[test]
    fn lands_on_target_and_reports_blow_up() {
        let g = Grid::periodic(16).unwrap();
        let mut it = Integrator::new(&g, &ModelSpec::ohkitani(10.0), TimePolicy::Fixed { dt: 0.03 }, 1e8).unwrap();
        let end = it.advance_to(SimulationState::new(shear(&g)), 0.1, |_, _| {}).unwrap();
        assert_eq!(end.t, 0.1);
        assert_eq!(end.step_count, 4);

        let mut tight = Integrator::new(&g, &ModelSpec::ohkitani(10.0), TimePolicy::Fixed { dt: 0.01 }, 1.0).unwrap();
        let err = tight.advance_to(SimulationState::new(shear(&g)), 0.1, |_, _| {}).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }
}
