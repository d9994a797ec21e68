//! Config-driven simulation runs and their on-disk layout.

use std::path::Path;

use serde::Serialize;

use crate::diagnostics::{record, DiagnosticsRecord};
use crate::dynamics::{Integrator, ModelSpec, SimulationState};
use crate::error::{Error, Result};
use crate::experiments::losing_exponent;
use crate::io::{write_checkpoint, write_diagnostics, Checkpoint, ExponentRate, SimulationConfig};
use crate::spectral::SpectralField;

/// Environment variable that caps worker threads for sweeps and study branches.
pub const THREADS_ENV: &str = "GSQG_THREADS";

/// Value of [`THREADS_ENV`] if set to a positive integer, otherwise the
/// available parallelism.
pub fn worker_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Applies `f` to every item on at most [`worker_threads`] threads, keeping input order.
pub fn parallel_map<I: Sync, O: Send>(items: &[I], f: impl Fn(&I) -> O + Sync) -> Vec<O> {
    let workers = worker_threads().min(items.len()).max(1);
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<O>> = (0..items.len()).map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let out = f(&items[i]);
                results.lock().expect("worker panicked")[i] = Some(out);
            });
        }
    });
    slots.into_iter().map(|o| o.expect("every slot filled")).collect()
}

#[derive(Debug)]
pub struct RunOutput {
    pub records: Vec<DiagnosticsRecord>,
    pub checkpoints: Vec<Checkpoint>,
    pub final_state: SimulationState<f64>,
    /// Exponent decay rate used for `s_t`.
    pub m: f64,
    /// Blow-up that ended the run early; the last checkpoint is the last valid state.
    pub failure: Option<Error>,
}

/// Resolves `norms.m`, running the doubling search for `"auto"`.
pub fn resolve_exponent_rate(config: &SimulationConfig) -> Result<f64> {
    match config.norms.m {
        ExponentRate::Fixed(m) => Ok(m),
        ExponentRate::Auto(_) => {
            let report = losing_exponent::run_losing_exponent_probe(config)?;
            report.found_m.ok_or(Error::HorizonExceeded {
                t: config.time.t_end,
                s: config.norms.s0 - report.last_tried_m * config.time.t_end,
            })
        }
    }
}

fn checkpoint(state: &SimulationState<f64>, model: &ModelSpec<f64>, seed: u64) -> Checkpoint {
    Checkpoint { t: state.t, step: state.step_count, seed, model: model.clone(), theta: state.theta.clone() }
}

/// Integrates the configured problem from its initial condition to `t_end`.
pub fn run(config: &SimulationConfig) -> Result<RunOutput> {
    config.validate()?;
    let theta0 = config.initial_field()?;
    run_from(config, theta0)
}

/// As [`run`] with an explicit initial field.
pub fn run_from(config: &SimulationConfig, theta0: SpectralField<f64>) -> Result<RunOutput> {
    let grid = config.make_grid()?;
    let model = config.model_spec()?;
    let m = resolve_exponent_rate(config)?;
    let norms = config.norms.spec(m, config.grid.shift);
    let seed = config.ic.seed;
    let mut integrator = Integrator::new(&grid, &model, config.time.policy()?, config.time.u_ceiling)?;

    let mut state = SimulationState::new(theta0);
    let mut records = vec![record(&state.theta, 0.0, 0.0, &norms, integrator.stepper_mut())?];
    let mut checkpoints = vec![checkpoint(&state, &model, seed)];
    let mut failure = None;
    let t_end = config.time.t_end;
    let mut targets: Vec<(f64, bool)> =
        config.output.checkpoint_times.iter().filter(|&&t| t > 0.0 && t < t_end).map(|&t| (t, true)).collect();
    targets.push((t_end, false));
    let mut last_dt = 0.0;

    'outer: for (target, is_checkpoint) in targets {
        while state.t < target {
            match integrator.step_toward(&state, target) {
                Ok((next, info)) => {
                    state = next;
                    last_dt = info.dt;
                    if state.step_count % config.output.record_every == 0 {
                        records.push(record(&state.theta, state.t, info.dt, &norms, integrator.stepper_mut())?);
                    }
                }
                Err(e @ Error::BlowUp { .. }) => {
                    failure = Some(e);
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
        if is_checkpoint {
            checkpoints.push(checkpoint(&state, &model, seed));
        }
    }
    if records.last().is_some_and(|r| r.t != state.t) {
        records.push(record(&state.theta, state.t, last_dt, &norms, integrator.stepper_mut())?);
    }
    if checkpoints.last().is_some_and(|c| c.t != state.t || c.step != state.step_count) {
        checkpoints.push(checkpoint(&state, &model, seed));
    }
    Ok(RunOutput { records, checkpoints, final_state: state, m, failure })
}

#[derive(Serialize)]
struct Metadata<'a> {
    version: &'a str,
    seed: u64,
    threads_env: Option<String>,
    worker_threads: usize,
    exponent_rate: f64,
    checkpoints: Vec<(String, f64, u64)>,
    status: &'a str,
    failure: Option<String>,
}

/// Writes `config.toml`, `metadata.json`, `diagnostics.csv` and
/// `checkpoints/NNNN.gsqg` under `dir`.
pub fn write_run_dir(config: &SimulationConfig, output: &RunOutput, dir: &Path) -> Result<()> {
    let ckpt_dir = dir.join("checkpoints");
    std::fs::create_dir_all(&ckpt_dir)?;
    std::fs::write(dir.join("config.toml"), config.to_toml()?)?;
    write_diagnostics(&output.records, &dir.join("diagnostics.csv"))?;
    let mut listed = Vec::new();
    for (i, c) in output.checkpoints.iter().enumerate() {
        let name = format!("{i:04}.gsqg");
        write_checkpoint(c, &ckpt_dir.join(&name))?;
        listed.push((format!("checkpoints/{name}"), c.t, c.step));
    }
    let meta = Metadata {
        version: env!("CARGO_PKG_VERSION"),
        seed: config.ic.seed,
        threads_env: std::env::var(THREADS_ENV).ok(),
        worker_threads: worker_threads(),
        exponent_rate: output.m,
        checkpoints: listed,
        status: if output.failure.is_some() { "blow_up" } else { "ok" },
        failure: output.failure.as_ref().map(|e| e.to_string()),
    };
    let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Csv(e.to_string()))?;
    std::fs::write(dir.join("metadata.json"), json + "\n")?;
    Ok(())
}

/// [`run`] followed by [`write_run_dir`].
pub fn run_to_dir(config: &SimulationConfig, dir: &Path) -> Result<RunOutput> {
    let out = run(config)?;
    write_run_dir(config, &out, dir)?;
    Ok(out)
}
