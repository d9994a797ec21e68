//! Rescaled-time δ-SQG against the Ohkitani reference.
//!
//! Both are integrated with the same fixed step in `τ`, so snapshots line up
//! index by index without interpolation. The reference is computed once and
//! shared read-only by all branches.

use std::sync::Arc;

use serde::Serialize;

use super::integrate;
use crate::diagnostics::compare_fields;
use crate::dynamics::{ModelSpec, TimePolicy};
use crate::error::{Error, Result};
use crate::io::{ConvergenceConfig, SimulationConfig};
use crate::run::{parallel_map, resolve_exponent_rate};
use crate::spectral::{Grid, SpectralField};

/// Minimum accepted order between adjacent `δ` rungs.
pub const MIN_ORDER: f64 = 0.8;

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub delta: f64,
    /// `‖θ^δ(τ_j) - θ(τ_j)‖_{H^{s(τ_j)}}`
    pub errors: Vec<f64>,
    pub sup_error: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Refinement {
    pub delta: f64,
    pub dt: f64,
    pub sup_error: f64,
    pub sup_error_half_dt: f64,
    pub nonincreasing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub config: SimulationConfig,
    pub m_b: f64,
    pub tau: Vec<f64>,
    pub exponents: Vec<f64>,
    pub branches: Vec<Branch>,
    /// `log(E_i / E_{i+1}) / log(δ_i / δ_{i+1})`
    pub orders: Vec<f64>,
    pub monotone: bool,
    pub orders_pass: bool,
    pub refinement: Option<Refinement>,
    pub reference_failure: Option<String>,
}

impl ConvergenceReport {
    pub fn pass(&self) -> bool {
        self.reference_failure.is_none()
            && self.branches.iter().all(|b| b.failure.is_none())
            && self.monotone
            && self.orders_pass
    }
}

type Snapshots = Vec<(f64, SpectralField<f64>)>;

fn trajectory(
    grid: &Arc<Grid<f64>>,
    model: &ModelSpec<f64>,
    cfg: &SimulationConfig,
    study: &ConvergenceConfig,
    dt: f64,
    every: u64,
    theta0: &SpectralField<f64>,
) -> Result<(Snapshots, Option<Error>)> {
    let mut snaps = Vec::new();
    let failure = integrate(grid, model, TimePolicy::Fixed { dt }, cfg.time.u_ceiling, theta0.clone(), study.tau_end, |st, _| {
        if st.step_count % every == 0 || st.t == study.tau_end {
            snaps.push((st.t, st.theta.clone()));
        }
    })?;
    Ok((snaps, failure))
}

fn branch(
    delta: f64,
    reference: &Snapshots,
    exponents: &[f64],
    run: impl Fn(&ModelSpec<f64>) -> Result<(Snapshots, Option<Error>)>,
    shift: f64,
    dealias: crate::spectral::DealiasRule,
) -> Result<Branch> {
    let model = ModelSpec::delta_sqg_rescaled(delta, shift).with_dealias(dealias);
    let (snaps, failure) = run(&model)?;
    let errors = snaps
        .iter()
        .zip(reference)
        .zip(exponents)
        .map(|(((_, a), (_, b)), &s)| compare_fields(a, b, s, shift))
        .collect::<Result<Vec<_>>>()?;
    let sup_error = errors.iter().copied().fold(0.0, f64::max);
    Ok(Branch { delta, errors, sup_error, failure: failure.map(|e| e.to_string()) })
}

/// Runs the `[convergence]` study described by `config`.
///
/// The comparison exponent is `s(τ) = s₀ - M_B τ`, i.e. `s₀ - M_B δ t` in the
/// original time. Without `convergence.m_b`, `M_B` comes from the doubling
/// search over `[0, τ_end]`.
pub fn run_convergence_study(config: &SimulationConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let study = config
        .convergence
        .clone()
        .ok_or_else(|| Error::Config { path: "convergence".into(), message: "section required".into() })?;
    let grid = config.make_grid()?;
    let shift = config.grid.shift;
    let dealias = config.model.dealias;
    let m_b = match study.m_b {
        Some(m) => m,
        None => {
            let mut probe_cfg = config.clone();
            probe_cfg.time.t_end = study.tau_end;
            probe_cfg.norms.m = crate::io::ExponentRate::Auto(crate::io::config::AutoTag::Auto);
            resolve_exponent_rate(&probe_cfg)?
        }
    };
    let theta0 = config.initial_field()?;
    let reference_model = ModelSpec::ohkitani(shift).with_dealias(dealias);
    let (reference, reference_failure) =
        trajectory(&grid, &reference_model, config, &study, study.dt, study.compare_every, &theta0)?;
    let tau: Vec<f64> = reference.iter().map(|(t, _)| *t).collect();
    let exponents: Vec<f64> = tau.iter().map(|t| config.norms.s0 - m_b * t).collect();

    let branches = parallel_map(&study.deltas, |&d| {
        branch(
            d,
            &reference,
            &exponents,
            |m| trajectory(&grid, m, config, &study, study.dt, study.compare_every, &theta0),
            shift,
            dealias,
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let orders: Vec<f64> = branches
        .windows(2)
        .map(|w| (w[0].sup_error / w[1].sup_error).ln() / (w[0].delta / w[1].delta).ln())
        .collect();
    let monotone = branches.windows(2).all(|w| w[1].sup_error < w[0].sup_error);
    let orders_pass = orders.iter().all(|p| *p >= MIN_ORDER);

    let refinement = if study.refine {
        let delta = *study.deltas.last().expect("validated nonempty");
        let half = study.dt / 2.0;
        let (ref_half, _) = trajectory(&grid, &reference_model, config, &study, half, 2 * study.compare_every, &theta0)?;
        let fine = branch(
            delta,
            &ref_half,
            &exponents,
            |m| trajectory(&grid, m, config, &study, half, 2 * study.compare_every, &theta0),
            shift,
            dealias,
        )?;
        let coarse = branches.last().expect("nonempty").sup_error;
        Some(Refinement {
            delta,
            dt: study.dt,
            sup_error: coarse,
            sup_error_half_dt: fine.sup_error,
            nonincreasing: fine.sup_error <= coarse * (1.0 + 1e-6),
        })
    } else {
        None
    };

    Ok(ConvergenceReport {
        config: config.clone(),
        m_b,
        tau,
        exponents,
        branches,
        orders,
        monotone,
        orders_pass,
        refinement,
        reference_failure: reference_failure.map(|e| e.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_config_str;

    fn config(kind: &str, amplitude: f64) -> SimulationConfig {
        parse_config_str(&format!(
            r#"
[grid]
n = 32
[model]
preset = "ohkitani"
[time]
mode = "fixed"
dt = 0.01
t_end = 0.2
[ic]
kind = "{kind}"
band = [1.0, 6.0]
amplitude = {amplitude}
normalize = "l2"
[convergence]
deltas = [0.1, 0.05, 0.025]
tau_end = 0.2
dt = 0.01
m_b = 1.0
compare_every = 2
"#
        ))
        .unwrap()
    }

    #[test]
    fn zero_data_has_zero_error() {
        let r = run_convergence_study(&config("shear", 0.0)).unwrap();
        assert!(r.branches.iter().all(|b| b.sup_error == 0.0));
    }

    #[test]
    fn shear_has_round_off_error() {
        let r = run_convergence_study(&config("shear", 1.0)).unwrap();
        assert!(r.branches.iter().all(|b| b.sup_error < 1e-10), "{:?}", r.branches);
    }

    #[test]
    fn random_data_converges_at_first_order() {
        let r = run_convergence_study(&config("random_band", 1.0)).unwrap();
        assert_eq!(r.tau.len(), 11);
        assert!(r.monotone && r.orders_pass, "{:?}", r.orders);
        assert!(r.orders.iter().all(|p| *p < 1.05));
        assert!(r.orders[1] > r.orders[0], "order approaches 1 from below: {:?}", r.orders);
        let refinement = r.refinement.clone().unwrap();
        assert!(refinement.sup_error_half_dt > 0.0);
        assert!(r.pass());
    }
}
