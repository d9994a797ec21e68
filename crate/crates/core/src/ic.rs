//! Initial-condition recipes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;

use crate::diagnostics::hs_norm;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{DealiasRule, Grid, SpectralField};

/// `amplitude · cos(x₁)` in the `2π`-periodic coordinate, a steady state of every model.
pub fn shear<T: Scalar>(grid: &Arc<Grid<T>>, amplitude: T) -> SpectralField<T> {
    let mut f = SpectralField::zeros(grid);
    f.set_mode(1, 0, Complex::new(amplitude * T::lit(0.5), T::zero()));
    f
}

/// Random-phase field supported on `k_min <= |k| <= k_max`, scaled to `Σ|θ̂|² = 1`.
///
/// Modes are visited in a fixed order and drawn from a ChaCha8 stream, so the
/// result depends only on the grid size, the band and the seed.
pub fn random_band<T: Scalar>(grid: &Arc<Grid<T>>, k_min: f64, k_max: f64, seed: u64) -> Result<SpectralField<T>> {
    if !(k_min >= 0.0 && k_max >= k_min && k_max >= 1.0) || !k_max.is_finite() {
        return Err(Error::param("band", format!("need 0 <= k_min <= k_max, k_max >= 1; got [{k_min}, {k_max}]")));
    }
    let n = grid.n();
    let kk = k_max.floor() as i64;
    if !DealiasRule::TwoThirds.keeps(n, kk, 0) {
        return Err(Error::param("band", format!("k_max = {k_max} exceeds the dealiased range of an n = {n} grid")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = SpectralField::zeros(grid);
    let mut any = false;
    for k1 in -kk..=kk {
        for k2 in 0..=kk {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if r < k_min || r > k_max {
                continue;
            }
            let amp: f64 = rng.random_range(0.0..1.0);
            let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            field.set_mode(k1, k2, Complex::new(T::lit(amp * phase.cos()), T::lit(amp * phase.sin())));
            any = true;
        }
    }
    if !any {
        return Err(Error::param("band", "contains no lattice modes"));
    }
    let p = field.power().sqrt();
    Ok(field.scaled(T::one() / p))
}

/// Field with the listed `(k1, k2, re, im)` coefficients and their conjugates.
pub fn from_modes<T: Scalar>(grid: &Arc<Grid<T>>, modes: &[(i64, i64, f64, f64)]) -> Result<SpectralField<T>> {
    let mut field = SpectralField::zeros(grid);
    let n = grid.n();
    for &(k1, k2, re, im) in modes {
        if !DealiasRule::TwoThirds.keeps(n, k1, k2) {
            return Err(Error::param("modes", format!("mode ({k1}, {k2}) lies outside the dealiased range")));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite("mode coefficient"));
        }
        field.set_mode(k1, k2, Complex::new(T::lit(re), T::lit(im)));
    }
    Ok(field)
}

/// Rescales `field` so that its shifted `H^s` norm equals `target`.
pub fn normalize_hs<T: Scalar>(field: &SpectralField<T>, s: T, target: T) -> Result<SpectralField<T>> {
    let norm = hs_norm(field, s, field.grid().shift());
    if norm == T::zero() {
        return Err(Error::param("ic", "cannot normalize the zero field"));
    }
    Ok(field.scaled(target / norm))
}
