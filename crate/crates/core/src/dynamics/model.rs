use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::{BiotSavart, Symbol};
use crate::scalar::Scalar;
use crate::spectral::{DealiasRule, SpectralField};

/// Linear damping `κ Ψ θ` with radial symbol `ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Scalar"))]
pub struct Dissipation<T> {
    pub kappa: T,
    pub symbol: Symbol<T>,
}

/// Which transport equation is integrated:
/// `∂θ + u·∇θ + κΨθ = 0` with `u = sign ∇⊥ Γ θ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Scalar"))]
pub struct ModelSpec<T> {
    pub biot_savart: BiotSavart<T>,
    pub dissipation: Option<Dissipation<T>>,
    /// Integrate in `τ = δt`; requires the `Rescaled(δ)` velocity symbol and
    /// divides the dissipation rate by `δ`.
    pub rescaled_time: bool,
    pub dealias: DealiasRule,
}

impl<T: Scalar> ModelSpec<T> {
    /// Inviscid Ohkitani model, `u = -∇⊥ log(a + Λ) θ`.
    pub fn ohkitani(shift: T) -> Self {
        Self {
            biot_savart: BiotSavart::ohkitani(shift),
            dissipation: None,
            rescaled_time: false,
            dealias: DealiasRule::TwoThirds,
        }
    }

    /// Inviscid δ-SQG in physical time.
    pub fn delta_sqg(delta: T, shift: T) -> Self {
        Self {
            biot_savart: BiotSavart::delta_sqg(delta, shift),
            dissipation: None,
            rescaled_time: false,
            dealias: DealiasRule::TwoThirds,
        }
    }

    /// Inviscid δ-SQG written in `τ = δt`.
    pub fn delta_sqg_rescaled(delta: T, shift: T) -> Self {
        Self {
            biot_savart: BiotSavart::delta_sqg_rescaled(delta, shift),
            dissipation: None,
            rescaled_time: true,
            dealias: DealiasRule::TwoThirds,
        }
    }

    /// δ-SQG damped by `κ Ψ`.
    pub fn dissipative_delta_sqg(delta: T, kappa: T, psi: Symbol<T>, shift: T) -> Self {
        Self::delta_sqg(delta, shift).with_dissipation(kappa, psi)
    }

    /// Ohkitani model damped by `κ log^β(a + Λ)`.
    pub fn log_dissipative(kappa: T, beta: T, shift: T) -> Self {
        Self::ohkitani(shift).with_dissipation(kappa, Symbol::LogPow { beta, shift })
    }

    pub fn with_dissipation(mut self, kappa: T, symbol: Symbol<T>) -> Self {
        self.dissipation = Some(Dissipation { kappa, symbol });
        self
    }

    pub fn with_dealias(mut self, rule: DealiasRule) -> Self {
        self.dealias = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.biot_savart.symbol.validate()?;
        if let Some(d) = &self.dissipation {
            if !(d.kappa > T::zero()) || !d.kappa.is_finite() {
                return Err(Error::param("kappa", "must be positive"));
            }
            d.symbol.validate()?;
        }
        if self.rescaled_time && !matches!(self.biot_savart.symbol, Symbol::Rescaled { .. }) {
            return Err(Error::param("rescaled_time", "requires the rescaled velocity symbol"));
        }
        Ok(())
    }

    /// Dissipation rate per unit of the integration variable.
    pub fn effective_kappa(&self) -> Option<T> {
        let d = self.dissipation.as_ref()?;
        match (self.rescaled_time, self.biot_savart.symbol.delta()) {
            (true, Some(delta)) => Some(d.kappa / delta),
            _ => Some(d.kappa),
        }
    }
}

/// Solution snapshot.
#[derive(Clone, Debug)]
pub struct SimulationState<T: Scalar> {
    pub t: T,
    pub theta: SpectralField<T>,
    pub step_count: u64,
}

impl<T: Scalar> SimulationState<T> {
    pub fn new(theta: SpectralField<T>) -> Self {
        Self { t: T::zero(), theta, step_count: 0 }
    }
}
