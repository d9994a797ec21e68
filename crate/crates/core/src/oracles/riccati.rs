use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OracleReport;
use crate::error::{Error, Result};

const TOLERANCE: f64 = 1e-8;

/// `y' = ν F(t) + G y²`, `y(0) = 0` on `[0, T]`, with `F` sampled on a uniform
/// grid including both endpoints and interpolated linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiProblem {
    pub nu: f64,
    pub horizon: f64,
    pub g: f64,
    pub forcing: Vec<f64>,
}

impl RiccatiProblem {
    pub fn constant(nu: f64, horizon: f64, g: f64, f: f64) -> Self {
        RiccatiProblem { nu, horizon, g, forcing: vec![f, f] }
    }

    fn forcing_at(&self, t: f64) -> f64 {
        let m = self.forcing.len() - 1;
        let x = (t / self.horizon * m as f64).clamp(0.0, m as f64);
        let i = (x.floor() as usize).min(m - 1);
        let w = x - i as f64;
        self.forcing[i] * (1.0 - w) + self.forcing[i + 1] * w
    }

    /// Trapezoid rule, exact for the interpolant.
    pub fn forcing_integral(&self) -> f64 {
        let m = self.forcing.len() - 1;
        let h = self.horizon / m as f64;
        let inner: f64 = self.forcing[1..m].iter().sum();
        h * (inner + 0.5 * (self.forcing[0] + self.forcing[m]))
    }

    /// `8 ν T G ∫F`, admissible when at most 1.
    pub fn admissibility(&self) -> f64 {
        8.0 * self.nu * self.horizon * self.g * self.forcing_integral()
    }

    /// `min{3 / (2TG), 12 ν ∫F}`.
    pub fn bound(&self) -> f64 {
        (1.5 / (self.horizon * self.g)).min(12.0 * self.nu * self.forcing_integral())
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Inadmissible(format!("T must be positive, got {}", self.horizon)));
        }
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::Inadmissible(format!("G must be positive, got {}", self.g)));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(Error::Inadmissible(format!("nu must be nonnegative, got {}", self.nu)));
        }
        if self.forcing.len() < 2 {
            return Err(Error::Inadmissible("F needs at least two samples".into()));
        }
        if let Some(v) = self.forcing.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Inadmissible(format!("F must be finite and nonnegative, found {v}")));
        }
        let adm = self.admissibility();
        if adm > 1.0 {
            return Err(Error::Inadmissible(format!("8 nu T G int F = {adm} exceeds 1")));
        }
        Ok(())
    }
}

/// Integrates the equality case with classical RK4 and checks `y <= bound` on
/// every step, up to an integrator tolerance of `1e-8`.
pub fn check_riccati_bound(p: &RiccatiProblem, steps: usize) -> Result<OracleReport> {
    p.validate()?;
    if steps == 0 {
        return Err(Error::param("steps", "must be positive"));
    }
    let rhs = |t: f64, y: f64| p.nu * p.forcing_at(t) + p.g * y * y;
    let h = p.horizon / steps as f64;
    let bound = p.bound();
    let (mut y, mut y_max) = (0.0f64, 0.0f64);
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = rhs(t, y);
        let k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
        y_max = y_max.max(y);
    }
    let ratio = if bound > 0.0 { y_max / bound } else if y_max == 0.0 { 0.0 } else { f64::INFINITY };
    let ok = y.is_finite() && y_max <= bound + TOLERANCE;
    let mut r = OracleReport::new("2.5", 0)
        .extra("y_end", y)
        .extra("y_max", y_max)
        .extra("bound", bound)
        .extra("admissibility", p.admissibility());
    r.samples = 1;
    r.worst_ratio = ratio;
    r.empirical_constant = ratio;
    r.ceiling = Some(1.0);
    r.pass = ok;
    r.build_breaking = !ok;
    Ok(r)
}

/// Random admissible problems; one aggregated report.
pub fn riccati_sweep(count: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agg = OracleReport::new("2.5", seed);
    let mut failures = 0u64;
    for _ in 0..count {
        let horizon = rng.random_range(0.1..5.0);
        let g = rng.random_range(0.1..10.0);
        let forcing: Vec<f64> = (0..33).map(|_| rng.random_range(0.0..2.0)).collect();
        let mut p = RiccatiProblem { nu: 0.0, horizon, g, forcing };
        let fill: f64 = rng.random_range(0.0..=1.0);
        p.nu = fill / (8.0 * horizon * g * p.forcing_integral()) * (1.0 - 1e-12);
        let r = check_riccati_bound(&p, 4_000)?;
        agg.worst_ratio = agg.worst_ratio.max(r.worst_ratio);
        failures += u64::from(!r.pass);
    }
    agg.samples = count as u64;
    agg.empirical_constant = agg.worst_ratio;
    agg.ceiling = Some(1.0);
    agg.pass = failures == 0;
    agg.build_breaking = failures > 0;
    Ok(agg.extra("failures", failures as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_case() {
        let p = RiccatiProblem::constant(0.1, 1.0, 1.0, 1.0);
        assert!((p.admissibility() - 0.8).abs() < 1e-15);
        assert!((p.bound() - 1.2).abs() < 1e-15);
        let r = check_riccati_bound(&p, 1_000).unwrap();
        assert!((r.extras["y_end"] - 0.103_472_291_424_570_48).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn zero_forcing_stays_zero() {
        let r = check_riccati_bound(&RiccatiProblem::constant(0.0, 2.0, 3.0, 1.0), 100).unwrap();
        assert_eq!(r.extras["y_max"], 0.0);
        assert!(r.pass);
    }

    #[test]
    fn inadmissible_rejected() {
        let e = check_riccati_bound(&RiccatiProblem::constant(1.0, 1.0, 1.0, 1.0), 10).unwrap_err();
        assert!(matches!(e, Error::Inadmissible(ref m) if m.contains("exceeds 1")));
        let mut neg = RiccatiProblem::constant(0.1, 1.0, 1.0, 1.0);
        neg.forcing[1] = -1.0;
        assert!(check_riccati_bound(&neg, 10).is_err());
    }

    #[test]
    fn interpolation_and_integral() {
        let p = RiccatiProblem { nu: 0.0, horizon: 2.0, g: 1.0, forcing: vec![0.0, 2.0, 0.0] };
        assert_eq!(p.forcing_at(0.5), 1.0);
        assert_eq!(p.forcing_at(1.0), 2.0);
        assert_eq!(p.forcing_integral(), 2.0);
    }

    #[test]
    fn random_sweep_passes() {
        let r = riccati_sweep(100, 11).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.samples, 100);
    }
}
