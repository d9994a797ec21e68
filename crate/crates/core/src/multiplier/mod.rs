//! Radial Fourier symbols `γ(|ξ|)` and their application to spectral fields.
//!
//! Every family is a function of `|ξ|` only, so the even-symmetry the
//! well-posedness theory relies on holds by construction.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{perp_gradient, Grid, SpectralField, VelocityField};

fn default_shift<T: Scalar>() -> T {
    T::lit(10.0)
}

/// A radial symbol family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Scalar"))]
pub enum Symbol<T> {
    /// `log(a + r)`
    Log {
        #[serde(default = "default_shift")]
        shift: T,
    },
    /// `(a + r)^{-δ}`
    PowerShift {
        delta: T,
        #[serde(default = "default_shift")]
        shift: T,
    },
    /// `((a + r)^{-δ} - 1) / δ`, the rescaled-time velocity symbol.
    Rescaled {
        delta: T,
        #[serde(default = "default_shift")]
        shift: T,
    },
    /// `log^β(a + r)`
    LogPow {
        beta: T,
        #[serde(default = "default_shift")]
        shift: T,
    },
    /// `log^α(a + log(a + r))`
    LogOfLog {
        alpha: T,
        #[serde(default = "default_shift")]
        shift: T,
    },
    /// `r^{2α}`, the symbol of `(-Δ)^α`.
    FracLap { alpha: T },
    Identity,
    /// Monotone table interpolated linearly in `log r`, constant outside the knots.
    Tabulated { radii: Vec<T>, values: Vec<T> },
}

impl<T: Scalar> Symbol<T> {
    pub fn log(shift: T) -> Self {
        Symbol::Log { shift }
    }

    pub fn log10() -> Self {
        Symbol::Log { shift: T::lit(10.0) }
    }

    pub fn power_shift(delta: T, shift: T) -> Self {
        Symbol::PowerShift { delta, shift }
    }

    pub fn rescaled(delta: T, shift: T) -> Self {
        Symbol::Rescaled { delta, shift }
    }

    pub fn validate(&self) -> Result<()> {
        let shift_ok = |a: T| {
            if a >= T::one() && a.is_finite() {
                Ok(())
            } else {
                Err(Error::param("shift", "must be >= 1"))
            }
        };
        let delta_ok = |d: T| {
            if d > T::zero() && d < T::one() {
                Ok(())
            } else {
                Err(Error::param("delta", "must lie in (0, 1)"))
            }
        };
        match *self {
            Symbol::Log { shift } => shift_ok(shift),
            Symbol::PowerShift { delta, shift } | Symbol::Rescaled { delta, shift } => {
                delta_ok(delta)?;
                shift_ok(shift)
            }
            Symbol::LogPow { beta, shift } => {
                if !(beta > T::zero()) || !beta.is_finite() {
                    return Err(Error::param("beta", "must be positive"));
                }
                shift_ok(shift)
            }
            Symbol::LogOfLog { alpha, shift } => {
                if !(alpha > T::zero()) || !alpha.is_finite() {
                    return Err(Error::param("alpha", "must be positive"));
                }
                shift_ok(shift)
            }
            Symbol::FracLap { alpha } => {
                if alpha > T::zero() && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param("alpha", "must be positive"))
                }
            }
            Symbol::Identity => Ok(()),
            Symbol::Tabulated { ref radii, ref values } => validate_table(radii, values),
        }
    }

    /// `γ(r)` for `r >= 0`. Parameters are assumed valid; see [`Symbol::try_eval`].
    pub fn eval(&self, r: T) -> T {
        match *self {
            Symbol::Log { shift } => (shift + r).ln(),
            Symbol::PowerShift { delta, shift } => (-delta * (shift + r).ln()).exp(),
            Symbol::Rescaled { delta, shift } => (-delta * (shift + r).ln()).exp_m1() / delta,
            Symbol::LogPow { beta, shift } => (shift + r).ln().powf(beta),
            Symbol::LogOfLog { alpha, shift } => (shift + (shift + r).ln()).ln().powf(alpha),
            Symbol::FracLap { alpha } => {
                if r == T::zero() {
                    T::zero()
                } else {
                    r.powf(T::lit(2.0) * alpha)
                }
            }
            Symbol::Identity => T::one(),
            Symbol::Tabulated { ref radii, ref values } => eval_table(radii, values, r),
        }
    }

    pub fn try_eval(&self, r: T) -> Result<T> {
        self.validate()?;
        if !(r >= T::zero()) {
            return Err(Error::param("r", "must be nonnegative"));
        }
        let v = self.eval(r);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("symbol value"))
        }
    }

    /// `δ` for the families that carry one.
    pub fn delta(&self) -> Option<T> {
        match *self {
            Symbol::PowerShift { delta, .. } | Symbol::Rescaled { delta, .. } => Some(delta),
            _ => None,
        }
    }
}

fn validate_table<T: Scalar>(radii: &[T], values: &[T]) -> Result<()> {
    if radii.len() != values.len() || radii.len() < 2 {
        return Err(Error::param("radii", "need at least two knots and one value per knot"));
    }
    if radii.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("tabulated symbol"));
    }
    if !(radii[0] > T::zero()) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("radii", "must be positive and strictly increasing"));
    }
    let up = values.windows(2).all(|w| w[1] >= w[0]);
    let down = values.windows(2).all(|w| w[1] <= w[0]);
    if !(up || down) {
        return Err(Error::param("values", "must be monotone"));
    }
    Ok(())
}

fn eval_table<T: Scalar>(radii: &[T], values: &[T], r: T) -> T {
    let last = radii.len() - 1;
    if r <= radii[0] {
        return values[0];
    }
    if r >= radii[last] {
        return values[last];
    }
    let hi = radii.partition_point(|&x| x < r);
    let lo = hi - 1;
    let w = (r.ln() - radii[lo].ln()) / (radii[hi].ln() - radii[lo].ln());
    values[lo] + w * (values[hi] - values[lo])
}

/// Per-mode symbol values on a grid.
///
/// Values are evaluated once per distinct `k1² + k2²` and reused across modes.
#[derive(Clone, Debug)]
pub struct SymbolTable<T: Scalar> {
    grid: Arc<Grid<T>>,
    values: Vec<T>,
}

impl<T: Scalar> SymbolTable<T> {
    pub fn new(grid: &Arc<Grid<T>>, symbol: &Symbol<T>) -> Result<Self> {
        symbol.validate()?;
        let mut by_q: HashMap<i64, T> = HashMap::new();
        let mut values = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let (k1, k2) = grid.mode(idx);
            let q = k1 * k1 + k2 * k2;
            let v = *by_q.entry(q).or_insert_with(|| symbol.eval(grid.kmag()[idx]));
            if !v.is_finite() {
                return Err(Error::NonFinite("symbol value on grid"));
            }
            values.push(v);
        }
        Ok(Self { grid: Arc::clone(grid), values })
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    pub fn scaled(mut self, factor: T) -> Self {
        for v in &mut self.values {
            *v = *v * factor;
        }
        self
    }
}

/// Output coefficient `γ(|k|) θ̂(k)` per mode.
pub fn apply_symbol<T: Scalar>(theta: &SpectralField<T>, symbol: &Symbol<T>) -> Result<SpectralField<T>> {
    let table = SymbolTable::new(theta.grid(), symbol)?;
    Ok(theta.map_modes(|i| table.values()[i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

impl Sign {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// Velocity law `u = sign · ∇⊥ Γ θ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Scalar"))]
pub struct BiotSavart<T> {
    pub symbol: Symbol<T>,
    pub sign: Sign,
}

impl<T: Scalar> BiotSavart<T> {
    /// `u = -∇⊥ log(a + Λ) θ`.
    pub fn ohkitani(shift: T) -> Self {
        Self { symbol: Symbol::log(shift), sign: Sign::Minus }
    }

    /// `u = ∇⊥ (a + Λ)^{-δ} θ`.
    pub fn delta_sqg(delta: T, shift: T) -> Self {
        Self { symbol: Symbol::power_shift(delta, shift), sign: Sign::Plus }
    }

    /// `u = ∇⊥ ((a + Λ)^{-δ} - 1)/δ θ`, the same flow in time `τ = δt`.
    pub fn delta_sqg_rescaled(delta: T, shift: T) -> Self {
        Self { symbol: Symbol::rescaled(delta, shift), sign: Sign::Plus }
    }

    /// Per-mode signed symbol `sign · γ(|k|)`.
    pub fn table(&self, grid: &Arc<Grid<T>>) -> Result<SymbolTable<T>> {
        Ok(SymbolTable::new(grid, &self.symbol)?.scaled(self.sign.value()))
    }
}

pub fn velocity_from_scalar<T: Scalar>(
    theta: &SpectralField<T>,
    law: &BiotSavart<T>,
) -> Result<VelocityField<T>> {
    let table = law.table(theta.grid())?;
    let stream = theta.map_modes(|i| table.values()[i]);
    Ok(perp_gradient(&stream))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitGapReport {
    /// `sup_r |γ_Rescaled(r) + log(a + r)|`
    pub sup_raw: f64,
    /// `sup_r |γ_Rescaled(r) + log(a + r)| / (δ log²(a + r))`
    pub sup_weighted: f64,
}

/// Distance between the rescaled symbol and `-log(a + r)` on `samples` uniform
/// points of `[0, r_max]` (a single sample means `r = 0`).
pub fn rescaled_limit_gap<T: Scalar>(delta: T, shift: T, r_max: T, samples: usize) -> Result<LimitGapReport> {
    let sym = Symbol::rescaled(delta, shift);
    sym.validate()?;
    if !(r_max > T::zero()) {
        return Err(Error::param("r_max", "must be positive"));
    }
    if samples == 0 {
        return Err(Error::param("samples", "must be positive"));
    }
    let mut sup_raw = T::zero();
    let mut sup_weighted = T::zero();
    for i in 0..samples {
        let r = if samples == 1 { T::zero() } else { r_max * T::lit(i as f64 / (samples - 1) as f64) };
        let l = (shift + r).ln();
        let gap = (sym.eval(r) + l).abs();
        sup_raw = sup_raw.max(gap);
        sup_weighted = sup_weighted.max(gap / (delta * l * l));
    }
    Ok(LimitGapReport { sup_raw: sup_raw.to_f64_lossy(), sup_weighted: sup_weighted.to_f64_lossy() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, inverse_transform, RealField};
    use proptest::prelude::*;

    const LOG10: f64 = 2.302_585_092_994_045_7;
    const LOG11: f64 = 2.397_895_272_798_370_5;

    fn dense_r() -> Vec<f64> {
        let mut r = vec![0.0];
        r.extend((0..2000).map(|i| 10f64.powf(-3.0 + 7.0 * i as f64 / 1999.0)));
        r
    }

    #[test]
    fn spot_values() {
        assert!((Symbol::<f64>::log10().eval(0.0) - LOG10).abs() < 1e-15);
        let resc: f64 = Symbol::rescaled(0.1, 10.0).eval(0.0);
        assert!((resc - (-2.056_717_652_757_185)).abs() < 1e-14);
        assert_eq!(Symbol::<f64>::Identity.eval(123.0), 1.0);
        assert_eq!(Symbol::FracLap { alpha: 0.5 }.eval(1.0), 1.0);
    }

    #[test]
    fn parameter_ranges() {
        assert!(Symbol::rescaled(0.0, 10.0).validate().is_err());
        assert!(Symbol::power_shift(1.0, 10.0).validate().is_err());
        assert!(Symbol::log(0.5).validate().is_err());
        assert!(Symbol::LogPow { beta: -1.0, shift: 10.0 }.validate().is_err());
        assert!(Symbol::<f64>::log10().try_eval(-1.0).is_err());
        let bad = Symbol::Tabulated { radii: vec![1.0, 2.0, 3.0], values: vec![1.0, 3.0, 2.0] };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn family_monotonicity_and_ranges() {
        let rs = dense_r();
        let check = |s: Symbol<f64>, increasing: bool| {
            for w in rs.windows(2) {
                let (a, b) = (s.eval(w[0]), s.eval(w[1]));
                assert!(if increasing { b > a } else { b < a }, "{s:?} at {w:?}");
            }
        };
        check(Symbol::log10(), true);
        check(Symbol::power_shift(0.3, 10.0), false);
        check(Symbol::rescaled(0.3, 10.0), false);
        check(Symbol::LogPow { beta: 2.0, shift: 10.0 }, true);
        check(Symbol::LogOfLog { alpha: 0.5, shift: 10.0 }, true);
        for &r in &rs {
            let p = Symbol::power_shift(0.3, 10.0).eval(r);
            assert!(p > 0.0 && p <= 1.0);
            assert!(Symbol::rescaled(0.3, 10.0).eval(r) <= 0.0);
            assert!(Symbol::<f64>::log10().eval(r) > 0.0);
        }
    }

    #[test]
    fn tabulated_interpolates_in_log_r() {
        let s: Symbol<f64> = Symbol::Tabulated { radii: vec![1.0, 100.0], values: vec![0.0, 2.0] };
        assert_eq!(s.eval(0.0), 0.0);
        assert!((s.eval(10.0) - 1.0).abs() < 1e-14);
        assert_eq!(s.eval(1e6), 2.0);
    }

    #[test]
    fn gap_spot_value_at_origin() {
        let rep = rescaled_limit_gap(0.1, 10.0, 1.0, 1).unwrap();
        assert!((rep.sup_raw - 0.245_867_440_236_860_7).abs() < 1e-13);
        assert!((rep.sup_weighted - 0.463_734_751_429_758_7).abs() < 1e-12);
        assert!(rescaled_limit_gap(0.0, 10.0, 1.0, 10).is_err());
    }

    #[test]
    fn gap_at_small_delta() {
        let r_max = 1e4;
        let rep = rescaled_limit_gap(1e-3, 10.0, r_max, 20001).unwrap();
        let l = (10.0f64 + r_max).ln();
        assert!(rep.sup_raw <= 1e-3 * l * l);
        assert!(rep.sup_weighted <= 1.0);
    }

    #[test]
    fn rescaled_decreases_to_minus_log() {
        for &r in &dense_r() {
            let l = (10.0 + r).ln();
            let mut prev = f64::INFINITY;
            for &d in &[0.9, 0.5, 0.2, 0.1, 0.01, 0.001] {
                let v = Symbol::rescaled(d, 10.0).eval(r);
                assert!(v >= -l && v <= prev, "r={r} d={d}");
                prev = v;
            }
        }
    }

    #[test]
    fn ohkitani_and_delta_velocities_on_shear() {
        let g = Grid::<f64>::periodic(16).unwrap();
        let theta = forward_transform(&RealField::from_fn(&g, |x, _| x.cos()).unwrap()).unwrap();
        let delta = 0.3;
        let expect_delta = -(11f64).powf(-delta);
        for (law, amp) in [
            (BiotSavart::ohkitani(10.0), LOG11),
            (BiotSavart::delta_sqg(delta, 10.0), expect_delta),
        ] {
            let u = velocity_from_scalar(&theta, &law).unwrap();
            let u1 = inverse_transform(&u.u1).unwrap();
            let u2 = inverse_transform(&u.u2).unwrap();
            for i in 0..g.len() {
                let x = (i / 16) as f64 * g.dx();
                assert!(u1.values()[i].abs() < 1e-14);
                assert!((u2.values()[i] - amp * x.sin()).abs() < 1e-13);
            }
        }
        let zero = velocity_from_scalar(&SpectralField::zeros(&g), &BiotSavart::ohkitani(10.0)).unwrap();
        assert_eq!(zero.u1.power() + zero.u2.power(), 0.0);
    }

    #[test]
    fn apply_symbol_on_cosine() {
        let g = Grid::<f64>::periodic(8).unwrap();
        let theta = forward_transform(&RealField::from_fn(&g, |x, _| x.cos()).unwrap()).unwrap();
        let out = apply_symbol(&theta, &Symbol::log10()).unwrap();
        assert!((out.at(1, 0).re - 0.5 * LOG11).abs() < 1e-15);
        let id = apply_symbol(&theta, &Symbol::Identity).unwrap();
        assert_eq!(id.coeffs(), theta.coeffs());
        let fl = apply_symbol(&theta, &Symbol::FracLap { alpha: 0.5 }).unwrap();
        assert_eq!(fl.at(1, 0), theta.at(1, 0));
        assert_eq!(fl.at(-1, 0), theta.at(-1, 0));
    }

    proptest! {
        #[test]
        fn taylor_envelopes(delta in 1e-4f64..0.999, r in 0f64..1e6) {
            let l = (10.0 + r).ln();
            let gap = (Symbol::rescaled(delta, 10.0).eval(r) + l).abs();
            prop_assert!(gap <= delta * l * l);
            let p = Symbol::power_shift(delta, 10.0).eval(r);
            prop_assert!((p - 1.0).abs() <= delta * l);
        }
    }
}
