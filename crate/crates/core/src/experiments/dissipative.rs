//! Long-time boundedness probes for the damped models.

use serde::Serialize;

use super::integrate;
use crate::diagnostics::hs_norm;
use crate::dynamics::ModelSpec;
use crate::error::{Error, Result};
use crate::io::{Preset, SimulationConfig};
use crate::multiplier::{Symbol, SymbolTable};
use crate::run::parallel_map;
use crate::spectral::SpectralField;

/// Growth factor allowed by the global probe: `sup_t ‖θ(t)‖ <= 2 ‖θ₀‖`.
pub const GLOBAL_BOUND: f64 = 2.0;

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub initial_norm: f64,
    pub sup_norm: f64,
    pub failure: Option<String>,
}

impl Trace {
    fn within(&self, factor: f64) -> bool {
        self.failure.is_none() && self.sup_norm <= factor * self.initial_norm
    }

    /// Earliest sample time after which the norm never increases.
    pub fn nonincreasing_from(&self) -> f64 {
        let mut start = self.norms.len().saturating_sub(1);
        while start > 0 && self.norms[start - 1] >= self.norms[start] {
            start -= 1;
        }
        self.times.get(start).copied().unwrap_or(0.0)
    }
}

fn norm_trace(config: &SimulationConfig, model: &ModelSpec<f64>, theta0: SpectralField<f64>) -> Result<Trace> {
    let grid = config.make_grid()?;
    let (s, shift, t_end) = (config.norms.s0, config.grid.shift, config.time.t_end);
    let mut times = Vec::new();
    let mut norms = Vec::new();
    let failure = integrate(&grid, model, config.time.policy()?, config.time.u_ceiling, theta0, t_end, |st, _| {
        if st.step_count % config.output.record_every == 0 || st.t == t_end {
            times.push(st.t);
            norms.push(hs_norm(&st.theta, s, shift));
        }
    })?;
    let initial_norm = norms[0];
    let sup_norm = norms.iter().copied().fold(0.0, f64::max);
    Ok(Trace { times, norms, initial_norm, sup_norm, failure: failure.map(|e| e.to_string()) })
}

fn require(config: &SimulationConfig, preset: Preset) -> Result<()> {
    config.validate()?;
    if config.model.preset != preset {
        return Err(Error::Config {
            path: "model.preset".into(),
            message: format!("this probe needs preset {preset:?}, got {:?}", config.model.preset),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaStarSweep {
    pub ladder: Vec<f64>,
    pub scales: Vec<f64>,
    /// Largest ladder `δ` passing the global bound, per scale.
    pub delta_star: Vec<Option<f64>>,
    /// `δ*` strictly decreases from each scale to the next.
    pub strictly_decreasing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DissipativeReport {
    pub config: SimulationConfig,
    pub delta: f64,
    pub kappa: f64,
    pub s: f64,
    pub trace: Trace,
    pub pass: bool,
    pub nonincreasing_from: f64,
    /// `ψ(|k|) >= log(a + |k|)` on every grid radius.
    pub psi_dominates_log_on_grid: bool,
    pub assumption: String,
    pub sweep: Option<DeltaStarSweep>,
}

fn dissipative_model(config: &SimulationConfig, delta: f64) -> Result<ModelSpec<f64>> {
    let mut model = config.model.clone();
    model.delta = Some(delta);
    model.resolve(config.grid.shift)
}

/// Largest `δ` of the decreasing `ladder` whose run with `θ₀ · scale` stays below
/// [`GLOBAL_BOUND`] times its initial norm.
pub fn empirical_delta_star(config: &SimulationConfig, scale: f64, ladder: &[f64]) -> Result<Option<f64>> {
    require(config, Preset::DissipativeDeltaSqg)?;
    let theta0 = config.initial_field()?.scaled(scale);
    for &delta in ladder {
        if norm_trace(config, &dissipative_model(config, delta)?, theta0.clone())?.within(GLOBAL_BOUND) {
            return Ok(Some(delta));
        }
    }
    Ok(None)
}

/// Runs the configured damped δ-SQG problem and, when `sweep` is set, the
/// empirical `δ*` ladder for every scale in `[probe]`.
pub fn run_dissipative_global_probe(config: &SimulationConfig, sweep: bool) -> Result<DissipativeReport> {
    require(config, Preset::DissipativeDeltaSqg)?;
    let model = config.model_spec()?;
    let diss = model.dissipation.clone().expect("preset carries dissipation");
    let delta = model.biot_savart.symbol.delta().expect("preset carries delta");
    let trace = norm_trace(config, &model, config.initial_field()?)?;

    let grid = config.make_grid()?;
    let psi = SymbolTable::new(&grid, &diss.symbol)?;
    let log = SymbolTable::new(&grid, &Symbol::log(config.grid.shift))?;
    let dominates = psi.values().iter().zip(log.values()).all(|(p, l)| p >= l);

    let sweep = if sweep {
        let probe = config.probe_or_default();
        let delta_star = parallel_map(&probe.scales, |&s| empirical_delta_star(config, s, &probe.delta_ladder))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let strictly_decreasing = delta_star.windows(2).all(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => b < a,
            (Some(_), None) => true,
            _ => false,
        });
        Some(DeltaStarSweep { ladder: probe.delta_ladder, scales: probe.scales, delta_star, strictly_decreasing })
    } else {
        None
    };

    Ok(DissipativeReport {
        config: config.clone(),
        delta,
        kappa: diss.kappa,
        s: config.norms.s0,
        pass: trace.within(GLOBAL_BOUND),
        nonincreasing_from: trace.nonincreasing_from(),
        trace,
        psi_dominates_log_on_grid: dominates,
        assumption: "the lower bound psi >= log(a + r) is taken to hold at every grid radius; \
                     no threshold frequency is applied"
            .into(),
        sweep,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LogDissipativeReport {
    pub config: SimulationConfig,
    pub beta: f64,
    pub kappa: f64,
    pub s: f64,
    pub bound: f64,
    pub trace: Trace,
    pub pass: bool,
    /// `β <= 1`, outside the range where local well-posedness is asserted.
    pub outside_hypothesis: bool,
}

/// Log-damped Ohkitani run at fixed exponent; bounded by `probe.log_bound · ‖θ₀‖`.
pub fn run_logdiss_wellposedness_probe(config: &SimulationConfig) -> Result<LogDissipativeReport> {
    require(config, Preset::LogDissipative)?;
    let bound = config.probe_or_default().log_bound;
    let model = config.model_spec()?;
    let trace = norm_trace(config, &model, config.initial_field()?)?;
    let beta = config.model.beta.expect("validated");
    Ok(LogDissipativeReport {
        config: config.clone(),
        beta,
        kappa: config.model.kappa.expect("validated"),
        s: config.norms.s0,
        bound,
        pass: trace.within(bound),
        trace,
        outside_hypothesis: beta <= 1.0,
    })
}
