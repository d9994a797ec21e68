//! Doubling search for an exponent decay rate `M` under which the
//! `H^{s₀ - Mt}` norm of an inviscid Ohkitani trajectory stays bounded.

use serde::Serialize;

use super::integrate;
use crate::diagnostics::{hs_norm, EXPONENT_FLOOR};
use crate::dynamics::ModelSpec;
use crate::error::Result;
use crate::io::SimulationConfig;
use crate::spectral::SpectralField;

#[derive(Clone, Debug, Serialize)]
pub struct Trial {
    pub m: f64,
    /// `max_t ‖θ(t)‖_{H^{s(t)}} / ‖θ₀‖_{H^{s₀}}`
    pub max_ratio: f64,
    pub bounded: bool,
    pub horizon_exceeded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LosingExponentReport {
    pub config: SimulationConfig,
    pub s0: f64,
    pub t_end: f64,
    pub growth_bound: f64,
    pub initial_norm: f64,
    pub found_m: Option<f64>,
    pub last_tried_m: f64,
    /// The search stopped because `s(t_end) <= 4`.
    pub horizon_exceeded: bool,
    pub trials: Vec<Trial>,
    pub times: Vec<f64>,
    /// `‖θ(t)‖_{H^{s₀ - M t}}` at the found `M` (empty if none).
    pub trace: Vec<f64>,
    /// `‖θ(t)‖_{H^{s₀}}`, the fixed-exponent trace.
    pub trace_fixed: Vec<f64>,
    pub failure: Option<String>,
}

impl LosingExponentReport {
    pub fn pass(&self) -> bool {
        self.found_m.is_some() && self.failure.is_none()
    }
}

fn trace(snapshots: &[(f64, SpectralField<f64>)], s0: f64, m: f64, shift: f64) -> Vec<f64> {
    snapshots.iter().map(|(t, th)| hs_norm(th, s0 - m * t, shift)).collect()
}

/// Integrates the inviscid Ohkitani model once (the configured model section is
/// not used), then tries `M = 1, 2, 4, …` on the stored snapshots.
pub fn run_losing_exponent_probe(config: &SimulationConfig) -> Result<LosingExponentReport> {
    config.validate()?;
    let probe = config.probe_or_default();
    let grid = config.make_grid()?;
    let shift = config.grid.shift;
    let model = ModelSpec::ohkitani(shift).with_dealias(config.model.dealias);
    let (s0, t_end) = (config.norms.s0, config.time.t_end);

    let mut snapshots = Vec::new();
    let failure = integrate(
        &grid,
        &model,
        config.time.policy()?,
        config.time.u_ceiling,
        config.initial_field()?,
        t_end,
        |st, _| {
            if st.step_count % config.output.record_every == 0 || st.t == t_end {
                snapshots.push((st.t, st.theta.clone()));
            }
        },
    )?;
    let times: Vec<f64> = snapshots.iter().map(|(t, _)| *t).collect();
    let initial_norm = hs_norm(&snapshots[0].1, s0, shift);
    let trace_fixed = trace(&snapshots, s0, 0.0, shift);
    let limit = probe.growth_bound * initial_norm;

    let mut trials = Vec::new();
    let mut found = None;
    let mut horizon_exceeded = false;
    let mut m = 1.0;
    loop {
        let exceeded = s0 - m * t_end <= EXPONENT_FLOOR;
        if exceeded {
            horizon_exceeded = true;
            trials.push(Trial { m, max_ratio: f64::NAN, bounded: false, horizon_exceeded: true });
            break;
        }
        let tr = trace(&snapshots, s0, m, shift);
        let max = tr.iter().copied().fold(0.0, f64::max);
        let bounded = failure.is_none() && tr.iter().all(|&v| v <= limit);
        let ratio = if initial_norm > 0.0 { max / initial_norm } else { 0.0 };
        trials.push(Trial { m, max_ratio: ratio, bounded, horizon_exceeded: false });
        if bounded {
            found = Some((m, tr));
            break;
        }
        if 2.0 * m > probe.m_ceiling {
            break;
        }
        m *= 2.0;
    }
    let (found_m, trace) = match found {
        Some((m, tr)) => (Some(m), tr),
        None => (None, Vec::new()),
    };
    Ok(LosingExponentReport {
        config: config.clone(),
        s0,
        t_end,
        growth_bound: probe.growth_bound,
        initial_norm,
        found_m,
        last_tried_m: m,
        horizon_exceeded,
        trials,
        times,
        trace,
        trace_fixed,
        failure: failure.map(|e| e.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_config_str, IcKind};

    fn config(kind: &str, t_end: f64) -> SimulationConfig {
        parse_config_str(&format!(
            r#"
[grid]
n = 32
[model]
preset = "ohkitani"
[time]
mode = "cfl"
cfl = 0.5
dt_max = 0.02
t_end = {t_end}
[ic]
kind = "{kind}"
band = [1.0, 6.0]
"#
        ))
        .unwrap()
    }

    #[test]
    fn shear_and_zero_are_bounded_at_first_try() {
        let r = run_losing_exponent_probe(&config("shear", 0.5)).unwrap();
        assert_eq!(r.found_m, Some(1.0));
        let first = r.trace_fixed[0];
        assert!(r.trace_fixed.iter().all(|v| (v - first).abs() <= 1e-12 * first));
        let mut zero = config("shear", 0.5);
        zero.ic.amplitude = 0.0;
        assert_eq!(zero.ic.kind, IcKind::Shear);
        let r = run_losing_exponent_probe(&zero).unwrap();
        assert_eq!(r.found_m, Some(1.0));
        assert_eq!(r.initial_norm, 0.0);
    }

    #[test]
    fn horizon_is_flagged() {
        let mut c = config("random_band", 0.6);
        c.ic.amplitude = 1e6;
        let r = run_losing_exponent_probe(&c).unwrap();
        assert!(r.trials.iter().all(|t| t.m <= 1.0 || t.horizon_exceeded));
        if r.found_m.is_none() {
            assert!(r.horizon_exceeded);
        }
    }

    #[test]
    fn random_band_reports_both_traces() {
        let r = run_losing_exponent_probe(&config("random_band", 0.5)).unwrap();
        assert_eq!(r.found_m, Some(1.0));
        assert_eq!(r.trace.len(), r.trace_fixed.len());
        assert_eq!(r.times[0], 0.0);
        assert_eq!(*r.times.last().unwrap(), 0.5);
        assert!(r.trace.iter().zip(&r.trace_fixed).all(|(a, b)| a <= b));
    }
}
