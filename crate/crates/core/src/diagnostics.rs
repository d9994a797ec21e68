//! Shifted Sobolev norms, conserved quantities and trajectory distances.
//!
//! All norms are spectral sums under the mean-normalized transform, e.g.
//! `‖θ‖²_{H^s} = Σ_k (a + |k|)^{2s} |θ̂(k)|²`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{ModelSpec, Stepper};
use crate::error::Result;
use crate::spectral::field::ensure_same_grid;
use crate::scalar::Scalar;
use crate::spectral::SpectralField;

fn weighted_sum<T: Scalar>(theta: &SpectralField<T>, s: T, shift: T, log_weight: bool) -> T {
    let two_s = T::lit(2.0) * s;
    theta
        .coeffs()
        .iter()
        .zip(theta.grid().kmag())
        .fold(T::zero(), |acc, (c, &k)| {
            let p = c.norm_sqr();
            if p == T::zero() {
                return acc;
            }
            let l = (shift + k).ln();
            let w = (two_s * l).exp();
            acc + if log_weight { w * l * p } else { w * p }
        })
}

/// `sqrt(Σ (a + |k|)^{2s} |θ̂(k)|²)`; any real `s` is accepted.
pub fn hs_norm<T: Scalar>(theta: &SpectralField<T>, s: T, shift: T) -> T {
    weighted_sum(theta, s, shift, false).sqrt()
}

/// `sqrt(Σ log(a + |k|) (a + |k|)^{2s} |θ̂(k)|²)`.
pub fn log_weighted_hs_norm<T: Scalar>(theta: &SpectralField<T>, s: T, shift: T) -> T {
    weighted_sum(theta, s, shift, true).sqrt()
}

/// Decreasing Sobolev exponent `s(t) = s₀ - M t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec<T> {
    pub s0: T,
    pub m: T,
    pub log_weight: bool,
    pub shift: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent<T> {
    pub s: T,
    /// `s(t) <= 4`, outside the range where the a priori bound is available.
    pub horizon_exceeded: bool,
}

pub const EXPONENT_FLOOR: f64 = 4.0;

pub fn exponent_schedule<T: Scalar>(ns: &NormSpec<T>, t: T) -> Exponent<T> {
    let s = ns.s0 - ns.m * t;
    Exponent { s, horizon_exceeded: s <= T::lit(EXPONENT_FLOOR) }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conserved<T> {
    /// `‖θ‖_{L²}` (spectral)
    pub l2: T,
    /// `‖Γ^{1/2} θ‖_{L²}` with weights `|γ(|k|)|`
    pub gamma_energy: T,
    /// `‖u‖_∞` on the collocation grid
    pub u_max: T,
}

pub fn conserved_quantities<T: Scalar>(theta: &SpectralField<T>, model: &ModelSpec<T>) -> Result<Conserved<T>> {
    let mut stepper = Stepper::new(theta.grid(), model)?;
    conserved_with(theta, &mut stepper)
}

/// As [`conserved_quantities`], reusing an existing stepper's tables.
pub fn conserved_with<T: Scalar>(theta: &SpectralField<T>, stepper: &mut Stepper<T>) -> Result<Conserved<T>> {
    let table = stepper.model().biot_savart.table(theta.grid())?;
    let gamma = theta
        .coeffs()
        .iter()
        .zip(table.values())
        .fold(T::zero(), |acc, (c, g)| acc + g.abs() * c.norm_sqr());
    Ok(Conserved { l2: theta.power().sqrt(), gamma_energy: gamma.sqrt(), u_max: stepper.velocity_sup(theta)? })
}

/// `‖a - b‖_{H^s}`.
pub fn compare_fields<T: Scalar>(a: &SpectralField<T>, b: &SpectralField<T>, s: T, shift: T) -> Result<T> {
    Ok(hs_norm(&a.sub(b)?, s, shift))
}

/// `‖(a + Λ)^{-Mt} (θ_a - θ_b)‖_{L²}`.
pub fn uniqueness_metric<T: Scalar>(a: &SpectralField<T>, b: &SpectralField<T>, m: T, t: T, shift: T) -> Result<T> {
    ensure_same_grid(a.grid(), b.grid())?;
    compare_fields(a, b, -m * t, shift)
}

/// One time sample of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2: f64,
    pub gamma_energy: f64,
    pub hs: f64,
    pub hs_log: f64,
    pub u_max: f64,
    pub dt: f64,
    pub s_t: f64,
}

impl DiagnosticsRecord {
    pub fn is_finite(&self) -> bool {
        [self.t, self.l2, self.gamma_energy, self.hs, self.hs_log, self.u_max, self.dt, self.s_t]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Evaluates a full record for `theta` at time `t`.
pub fn record<T: Scalar>(
    theta: &SpectralField<T>,
    t: T,
    dt: T,
    norms: &NormSpec<T>,
    stepper: &mut Stepper<T>,
) -> Result<DiagnosticsRecord> {
    let c = conserved_with(theta, stepper)?;
    let s = exponent_schedule(norms, t).s;
    Ok(DiagnosticsRecord {
        t: t.to_f64_lossy(),
        l2: c.l2.to_f64_lossy(),
        gamma_energy: c.gamma_energy.to_f64_lossy(),
        hs: hs_norm(theta, s, norms.shift).to_f64_lossy(),
        hs_log: log_weighted_hs_norm(theta, s, norms.shift).to_f64_lossy(),
        u_max: c.u_max.to_f64_lossy(),
        dt: dt.to_f64_lossy(),
        s_t: s.to_f64_lossy(),
    })
}
