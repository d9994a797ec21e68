//! TOML run configuration.
//!
//! Parsing reports the dotted key path of the first offending entry, both for
//! shape errors (unknown key, wrong type) and for cross-field validation.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{NormSpec, EXPONENT_FLOOR};
use crate::dynamics::{Dissipation, ModelSpec, TimePolicy};
use crate::error::{Error, Result};
use crate::ic;
use crate::multiplier::{BiotSavart, Symbol};
use crate::spectral::{DealiasRule, Grid, SpectralField};

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config { path: path.to_owned(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub grid: GridConfig,
    pub model: ModelConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub ic: IcConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub norms: NormsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
    pub shift: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 128, length: std::f64::consts::TAU, shift: 10.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Ohkitani,
    DeltaSqg,
    DeltaSqgRescaled,
    DissipativeDeltaSqg,
    LogDissipative,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub preset: Preset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Fractional-Laplacian order for `dissipative_delta_sqg`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Explicit damping symbol for `dissipative_delta_sqg`; defaults to `log(a + r)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Symbol<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub biot_savart: Option<BiotSavart<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dissipation: Option<Dissipation<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rescaled_time: Option<bool>,
    #[serde(default)]
    pub dealias: DealiasRule,
}

impl ModelConfig {
    pub fn preset(preset: Preset) -> Self {
        ModelConfig {
            preset,
            delta: None,
            kappa: None,
            beta: None,
            alpha: None,
            psi: None,
            biot_savart: None,
            dissipation: None,
            rescaled_time: None,
            dealias: DealiasRule::TwoThirds,
        }
    }

    /// Builds the model, checking that exactly the parameters the preset uses are present.
    pub fn resolve(&self, shift: f64) -> Result<ModelSpec<f64>> {
        use Preset::*;
        let uses = |key: &str| -> bool {
            match key {
                "delta" => matches!(self.preset, DeltaSqg | DeltaSqgRescaled | DissipativeDeltaSqg),
                "kappa" => matches!(self.preset, DissipativeDeltaSqg | LogDissipative),
                "beta" => self.preset == LogDissipative,
                "alpha" | "psi" => self.preset == DissipativeDeltaSqg,
                _ => self.preset == Custom,
            }
        };
        let given = [
            ("delta", self.delta.is_some()),
            ("kappa", self.kappa.is_some()),
            ("beta", self.beta.is_some()),
            ("alpha", self.alpha.is_some()),
            ("psi", self.psi.is_some()),
            ("biot_savart", self.biot_savart.is_some()),
            ("dissipation", self.dissipation.is_some()),
            ("rescaled_time", self.rescaled_time.is_some()),
        ];
        for (key, present) in given {
            if present && !uses(key) {
                return Err(config_err(&format!("model.{key}"), format!("not used by preset {:?}", self.preset)));
            }
        }
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| config_err(&format!("model.{key}"), "required by this preset"));
        let unit = |v: f64, key: &str| -> Result<f64> {
            if v > 0.0 && v < 1.0 {
                Ok(v)
            } else {
                Err(config_err(&format!("model.{key}"), format!("must lie in (0, 1), got {v}")))
            }
        };
        let positive = |v: f64, key: &str| -> Result<f64> {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(config_err(&format!("model.{key}"), format!("must be positive, got {v}")))
            }
        };
        let spec = match self.preset {
            Ohkitani => ModelSpec::ohkitani(shift),
            DeltaSqg => ModelSpec::delta_sqg(unit(need(self.delta, "delta")?, "delta")?, shift),
            DeltaSqgRescaled => ModelSpec::delta_sqg_rescaled(unit(need(self.delta, "delta")?, "delta")?, shift),
            DissipativeDeltaSqg => {
                let delta = unit(need(self.delta, "delta")?, "delta")?;
                let kappa = positive(need(self.kappa, "kappa")?, "kappa")?;
                let psi = match (&self.psi, self.alpha) {
                    (Some(_), Some(_)) => return Err(config_err("model.alpha", "give either psi or alpha, not both")),
                    (Some(p), None) => p.clone(),
                    (None, Some(a)) => Symbol::FracLap { alpha: positive(a, "alpha")? },
                    (None, None) => Symbol::log(shift),
                };
                ModelSpec::dissipative_delta_sqg(delta, kappa, psi, shift)
            }
            LogDissipative => ModelSpec::log_dissipative(
                positive(need(self.kappa, "kappa")?, "kappa")?,
                positive(need(self.beta, "beta")?, "beta")?,
                shift,
            ),
            Custom => ModelSpec {
                biot_savart: self
                    .biot_savart
                    .clone()
                    .ok_or_else(|| config_err("model.biot_savart", "required by the custom preset"))?,
                dissipation: self.dissipation.clone(),
                rescaled_time: self.rescaled_time.unwrap_or(false),
                dealias: DealiasRule::TwoThirds,
            },
        }
        .with_dealias(self.dealias);
        spec.validate().map_err(|e| config_err("model", e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMode {
    Fixed,
    Cfl,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub mode: TimeMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfl: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_max: Option<f64>,
    pub t_end: f64,
    #[serde(default = "default_ceiling")]
    pub u_ceiling: f64,
}

fn default_ceiling() -> f64 {
    1e8
}

impl TimeConfig {
    pub fn fixed(dt: f64, t_end: f64) -> Self {
        TimeConfig { mode: TimeMode::Fixed, dt: Some(dt), cfl: None, dt_max: None, t_end, u_ceiling: default_ceiling() }
    }

    pub fn cfl(cfl: f64, dt_max: f64, t_end: f64) -> Self {
        TimeConfig {
            mode: TimeMode::Cfl,
            dt: None,
            cfl: Some(cfl),
            dt_max: Some(dt_max),
            t_end,
            u_ceiling: default_ceiling(),
        }
    }

    pub fn policy(&self) -> Result<TimePolicy<f64>> {
        let pos = |v: Option<f64>, key: &str| -> Result<f64> {
            match v {
                Some(x) if x > 0.0 && x.is_finite() => Ok(x),
                Some(x) => Err(config_err(&format!("time.{key}"), format!("must be positive, got {x}"))),
                None => Err(config_err(&format!("time.{key}"), "required by this time mode")),
            }
        };
        match self.mode {
            TimeMode::Fixed => {
                if self.cfl.is_some() || self.dt_max.is_some() {
                    return Err(config_err("time.cfl", "cfl and dt_max apply only to mode = \"cfl\""));
                }
                Ok(TimePolicy::Fixed { dt: pos(self.dt, "dt")? })
            }
            TimeMode::Cfl => {
                if self.dt.is_some() {
                    return Err(config_err("time.dt", "dt applies only to mode = \"fixed\""));
                }
                let cfl = pos(self.cfl, "cfl")?;
                if cfl > 1.0 {
                    return Err(config_err("time.cfl", "must not exceed 1"));
                }
                Ok(TimePolicy::Cfl { cfl, dt_max: pos(self.dt_max, "dt_max")? })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcKind {
    Shear,
    RandomBand,
    Modes,
}

/// What `ic.amplitude` fixes for a random band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `‖θ₀‖_{H^{s0}}`
    #[default]
    Hs,
    /// `‖θ₀‖_{L²}` (spectral)
    L2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub k1: i64,
    pub k2: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IcConfig {
    pub kind: IcKind,
    pub band: [f64; 2],
    pub amplitude: f64,
    pub normalize: Normalization,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeConfig>,
}

impl Default for IcConfig {
    fn default() -> Self {
        IcConfig {
            kind: IcKind::RandomBand,
            band: [1.0, 10.0],
            amplitude: 1.0,
            normalize: Normalization::Hs,
            seed: 0,
            modes: Vec::new(),
        }
    }
}

impl IcConfig {
    /// Builds `θ₀`. `s0` is the exponent used by [`Normalization::Hs`].
    pub fn build(&self, grid: &Arc<Grid<f64>>, s0: f64) -> Result<SpectralField<f64>> {
        if !self.amplitude.is_finite() {
            return Err(config_err("ic.amplitude", "must be finite"));
        }
        match self.kind {
            IcKind::Shear => Ok(ic::shear(grid, self.amplitude)),
            IcKind::RandomBand => {
                let [lo, hi] = self.band;
                let raw = ic::random_band(grid, lo, hi, self.seed).map_err(|e| config_err("ic.band", e.to_string()))?;
                match self.normalize {
                    Normalization::Hs => ic::normalize_hs(&raw, s0, self.amplitude),
                    Normalization::L2 => Ok(raw.scaled(self.amplitude)),
                }
            }
            IcKind::Modes => {
                if self.modes.is_empty() {
                    return Err(config_err("ic.modes", "required for kind = \"modes\""));
                }
                let list: Vec<_> = self.modes.iter().map(|m| (m.k1, m.k2, m.re, m.im)).collect();
                Ok(ic::from_modes(grid, &list).map_err(|e| config_err("ic.modes", e.to_string()))?.scaled(self.amplitude))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub record_every: u64,
    pub checkpoint_times: Vec<f64>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { record_every: 1, checkpoint_times: Vec::new() }
    }
}

/// Exponent decay rate: a number, or `"auto"` for the doubling search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentRate {
    Fixed(f64),
    Auto(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormsConfig {
    pub s0: f64,
    pub m: ExponentRate,
    pub log_weight: bool,
}

impl Default for NormsConfig {
    fn default() -> Self {
        NormsConfig { s0: 5.0, m: ExponentRate::Fixed(0.0), log_weight: false }
    }
}

impl NormsConfig {
    pub fn spec(&self, m: f64, shift: f64) -> NormSpec<f64> {
        NormSpec { s0: self.s0, m, log_weight: self.log_weight, shift }
    }
}

/// `[convergence]`: the rescaled-limit study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub deltas: Vec<f64>,
    pub tau_end: f64,
    /// Step in rescaled time.
    pub dt: f64,
    /// Exponent decay per unit `τ`; found by the losing-exponent probe when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_b: Option<f64>,
    /// Compare every this many steps.
    #[serde(default = "one")]
    pub compare_every: u64,
    /// Also rerun the smallest `δ` at `dt / 2`.
    #[serde(default = "yes")]
    pub refine: bool,
}

fn one() -> u64 {
    1
}

fn yes() -> bool {
    true
}

/// `[probe]`: parameters of the probe commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    /// Largest `M` tried by the doubling search.
    pub m_ceiling: f64,
    /// Norm growth allowed by the losing-exponent probe.
    pub growth_bound: f64,
    /// Decreasing `δ` ladder for the empirical `δ*`.
    pub delta_ladder: Vec<f64>,
    /// IC scale factors compared by the `δ*` sweep.
    pub scales: Vec<f64>,
    /// Norm growth allowed by the log-dissipative probe.
    pub log_bound: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            m_ceiling: 1024.0,
            growth_bound: 1.1,
            delta_ladder: vec![0.8, 0.4, 0.2, 0.1, 0.05],
            scales: vec![1.0, 4.0],
            log_bound: 1.5,
        }
    }
}

impl SimulationConfig {
    /// Minimal config with defaults for every optional section.
    pub fn new(model: ModelConfig, time: TimeConfig) -> Self {
        SimulationConfig {
            grid: GridConfig::default(),
            model,
            time,
            ic: IcConfig::default(),
            output: OutputConfig::default(),
            norms: NormsConfig::default(),
            convergence: None,
            probe: None,
        }
    }

    pub fn make_grid(&self) -> Result<Arc<Grid<f64>>> {
        Grid::new(self.grid.n, self.grid.length, self.grid.shift).map_err(|e| config_err("grid", e.to_string()))
    }

    pub fn model_spec(&self) -> Result<ModelSpec<f64>> {
        self.model.resolve(self.grid.shift)
    }

    pub fn initial_field(&self) -> Result<SpectralField<f64>> {
        self.ic.build(&self.make_grid()?, self.norms.s0)
    }

    pub fn probe_or_default(&self) -> ProbeConfig {
        self.probe.clone().unwrap_or_default()
    }

    /// Cross-field checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<()> {
        if self.grid.n % 2 != 0 || self.grid.n < 8 {
            return Err(config_err("grid.n", format!("must be even and at least 8, got {}", self.grid.n)));
        }
        self.make_grid()?;
        self.model_spec()?;
        self.time.policy()?;
        if !(self.time.t_end >= 0.0 && self.time.t_end.is_finite()) {
            return Err(config_err("time.t_end", "must be finite and nonnegative"));
        }
        if !(self.time.u_ceiling > 0.0) {
            return Err(config_err("time.u_ceiling", "must be positive"));
        }
        if !(self.norms.s0 > EXPONENT_FLOOR) {
            return Err(config_err("norms.s0", format!("must exceed {EXPONENT_FLOOR}, got {}", self.norms.s0)));
        }
        if let ExponentRate::Fixed(m) = self.norms.m {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(config_err("norms.m", "must be nonnegative"));
            }
        }
        if self.output.record_every == 0 {
            return Err(config_err("output.record_every", "must be at least 1"));
        }
        let times = &self.output.checkpoint_times;
        if times.iter().any(|t| !(*t >= 0.0 && *t <= self.time.t_end)) {
            return Err(config_err("output.checkpoint_times", "times must lie in [0, t_end]"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("output.checkpoint_times", "times must be strictly increasing"));
        }
        if self.ic.kind == IcKind::RandomBand {
            let [lo, hi] = self.ic.band;
            if !(lo >= 0.0 && hi >= lo && hi >= 1.0) {
                return Err(config_err("ic.band", format!("need 0 <= k_min <= k_max and k_max >= 1, got [{lo}, {hi}]")));
            }
            if 3.0 * hi.floor() > self.grid.n as f64 {
                return Err(config_err("ic.band", format!("k_max = {hi} exceeds the dealiased range of n = {}", self.grid.n)));
            }
        }
        self.initial_field()?;
        if let Some(c) = &self.convergence {
            if c.deltas.is_empty() || c.deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
                return Err(config_err("convergence.deltas", "need a nonempty list of values in (0, 1)"));
            }
            if c.deltas.windows(2).any(|w| w[1] >= w[0]) {
                return Err(config_err("convergence.deltas", "must be strictly decreasing"));
            }
            if !(c.tau_end > 0.0 && c.tau_end.is_finite()) {
                return Err(config_err("convergence.tau_end", "must be positive"));
            }
            if !(c.dt > 0.0 && c.dt.is_finite()) {
                return Err(config_err("convergence.dt", "must be positive"));
            }
            if c.compare_every == 0 {
                return Err(config_err("convergence.compare_every", "must be at least 1"));
            }
            if let Some(m) = c.m_b {
                if !(m >= 0.0) {
                    return Err(config_err("convergence.m_b", "must be nonnegative"));
                }
            }
        }
        if let Some(p) = &self.probe {
            if p.delta_ladder.windows(2).any(|w| w[1] >= w[0]) || p.delta_ladder.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
                return Err(config_err("probe.delta_ladder", "must be strictly decreasing within (0, 1)"));
            }
            if p.scales.iter().any(|s| !(*s > 0.0)) {
                return Err(config_err("probe.scales", "must be positive"));
            }
            if !(p.m_ceiling >= 1.0) {
                return Err(config_err("probe.m_ceiling", "must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err("", e.to_string()))
    }
}

/// Parses and validates TOML text.
pub fn parse_config_str(text: &str) -> Result<SimulationConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| config_err("", e.message().to_owned()))?;
    let cfg: SimulationConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        config_err(if path == "." { "" } else { &path }, e.into_inner().message().to_owned())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<SimulationConfig> {
    parse_config_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[model]
preset = "ohkitani"

[time]
mode = "cfl"
cfl = 0.5
dt_max = 0.01
t_end = 1.0
"#;

    fn path_of(e: Error) -> String {
        match e {
            Error::Config { path, .. } => path,
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.grid, GridConfig::default());
        assert_eq!(c.grid.shift, 10.0);
        assert_eq!(c.model.dealias, DealiasRule::TwoThirds);
        assert_eq!(c.model_spec().unwrap(), ModelSpec::ohkitani(10.0));
        assert_eq!(c.time.policy().unwrap(), TimePolicy::Cfl { cfl: 0.5, dt_max: 0.01 });
    }

    #[test]
    fn missing_delta_names_key() {
        let text = MINIMAL.replace("ohkitani", "delta_sqg");
        assert_eq!(path_of(parse_config_str(&text).unwrap_err()), "model.delta");
        let text = MINIMAL.replace("preset = \"ohkitani\"", "preset = \"ohkitani\"\ndelta = 0.1");
        assert_eq!(path_of(parse_config_str(&text).unwrap_err()), "model.delta");
    }

    #[test]
    fn shape_errors_carry_paths() {
        let text = format!("{MINIMAL}\n[grid]\nn = \"big\"\n");
        assert_eq!(path_of(parse_config_str(&text).unwrap_err()), "grid.n");
        let text = format!("{MINIMAL}\n[ic]\ncolour = 1\n");
        assert_eq!(path_of(parse_config_str(&text).unwrap_err()), "ic.colour");
        let text = format!("{MINIMAL}\n[norms]\ns0 = 3.5\n");
        assert_eq!(path_of(parse_config_str(&text).unwrap_err()), "norms.s0");
        let text = format!("{MINIMAL}\n[grid]\nn = 16\n[ic]\nband = [1.0, 7.0]\n");
        assert_eq!(path_of(parse_config_str(&text).unwrap_err()), "ic.band");
    }

    #[test]
    fn round_trip_full_config() {
        let text = r#"
[grid]
n = 32
shift = 10.0

[model]
preset = "dissipative_delta_sqg"
delta = 0.05
kappa = 10.0
psi = { family = "log_pow", beta = 2.0 }

[time]
mode = "fixed"
dt = 0.01
t_end = 0.5

[ic]
kind = "modes"
modes = [{ k1 = 1, k2 = 2, re = 0.25, im = -0.5 }]

[output]
record_every = 5
checkpoint_times = [0.25]

[norms]
s0 = 4.5
m = "auto"

[convergence]
deltas = [0.4, 0.2]
tau_end = 0.5
dt = 0.01

[probe]
scales = [1.0, 2.0]
"#;
        let c = parse_config_str(text).unwrap();
        assert_eq!(c.norms.m, ExponentRate::Auto(AutoTag::Auto));
        let again = parse_config_str(&c.to_toml().unwrap()).unwrap();
        assert_eq!(c, again);
        let minimal = parse_config_str(MINIMAL).unwrap();
        assert_eq!(parse_config_str(&minimal.to_toml().unwrap()).unwrap(), minimal);
    }

    #[test]
    fn custom_preset() {
        let text = r#"
[model]
preset = "custom"
rescaled_time = true
biot_savart = { sign = "plus", symbol = { family = "rescaled", delta = 0.1 } }

[time]
mode = "fixed"
dt = 0.01
t_end = 0.0
"#;
        let c = parse_config_str(text).unwrap();
        assert_eq!(c.model_spec().unwrap(), ModelSpec::delta_sqg_rescaled(0.1, 10.0));
        let bad = text.replace("rescaled\"", "log\"").replace(", delta = 0.1", "");
        assert_eq!(path_of(parse_config_str(&bad).unwrap_err()), "model");
    }
}
