use std::sync::Arc;

use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{fft2, Direction, FftScratch, Grid};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative Hermitian residue above which an input is treated as corrupted.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    /// Zero every mode with `max(|k1|, |k2|) > n/3`.
    #[default]
    TwoThirds,
    None,
}

impl DealiasRule {
    /// Whether integer mode `(k1, k2)` survives on an `n`-point grid.
    #[inline]
    pub fn keeps(self, n: usize, k1: i64, k2: i64) -> bool {
        match self {
            DealiasRule::TwoThirds => 3 * k1.abs().max(k2.abs()) as usize <= n,
            DealiasRule::None => true,
        }
    }
}

/// Fourier coefficients of a real scalar field, `θ̂(k) = n⁻² Σ_x θ(x) e^{-ik·x}`.
#[derive(Clone, Debug)]
pub struct SpectralField<T: Scalar> {
    grid: Arc<Grid<T>>,
    coeffs: Vec<Complex<T>>,
}

/// Samples of a real field on the `n × n` collocation lattice `x = (i, j)·length/n`.
#[derive(Clone, Debug)]
pub struct RealField<T: Scalar> {
    grid: Arc<Grid<T>>,
    values: Vec<T>,
}

/// Velocity in spectral form.
#[derive(Clone, Debug)]
pub struct VelocityField<T: Scalar> {
    pub u1: SpectralField<T>,
    pub u2: SpectralField<T>,
}

impl<T: Scalar> SpectralField<T> {
    pub fn zeros(grid: &Arc<Grid<T>>) -> Self {
        Self { grid: Arc::clone(grid), coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()] }
    }

    /// Wraps raw coefficients; Hermitian symmetry is enforced on the way in.
    pub fn from_coeffs(grid: &Arc<Grid<T>>, mut coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients"));
        }
        enforce_hermitian(grid, &mut coeffs);
        Ok(Self { grid: Arc::clone(grid), coeffs })
    }

    /// Wraps coefficients that are already known to be Hermitian.
    pub(crate) fn from_raw(grid: &Arc<Grid<T>>, coeffs: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid: Arc::clone(grid), coeffs }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Mutable coefficient access; callers are responsible for symmetry.
    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient at integer mode `(k1, k2)`.
    pub fn at(&self, k1: i64, k2: i64) -> Complex<T> {
        self.coeffs[self.grid.index_of(k1, k2)]
    }

    /// Sets `θ̂(k)` and `θ̂(-k) = conj θ̂(k)` together.
    pub fn set_mode(&mut self, k1: i64, k2: i64, value: Complex<T>) {
        let idx = self.grid.index_of(k1, k2);
        let cidx = self.grid.conjugate_index(idx);
        if idx == cidx {
            self.coeffs[idx] = Complex::new(value.re, T::zero());
        } else {
            self.coeffs[idx] = value;
            self.coeffs[cidx] = value.conj();
        }
    }

    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `max |θ̂(k) - conj θ̂(-k)|` relative to `max |θ̂|`.
    pub fn hermitian_residue(&self) -> T {
        let mut worst = T::zero();
        let mut scale = T::zero();
        for (idx, c) in self.coeffs.iter().enumerate() {
            let p = self.coeffs[self.grid.conjugate_index(idx)];
            worst = worst.max((*c - p.conj()).norm());
            scale = scale.max(c.norm());
        }
        if scale > T::zero() {
            worst / scale
        } else {
            worst
        }
    }

    /// Largest modulus `max(|k1|, |k2|)` carrying a nonzero coefficient.
    pub fn max_active_mode(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != T::zero() || c.im != T::zero())
            .map(|(idx, _)| {
                let (a, b) = self.grid.mode(idx);
                a.abs().max(b.abs())
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scaled(&self, factor: T) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(factor)).collect();
        Self::from_raw(&self.grid, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a - *b).collect();
        Ok(Self::from_raw(&self.grid, coeffs))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a + *b).collect();
        Ok(Self::from_raw(&self.grid, coeffs))
    }

    /// Spectral `Σ_k |θ̂(k)|²`.
    pub fn power(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Multiplies every coefficient by a per-mode real weight.
    pub fn map_modes(&self, mut weight: impl FnMut(usize) -> T) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c.scale(weight(i))).collect();
        Self::from_raw(&self.grid, coeffs)
    }
}

impl<T: Scalar> RealField<T> {
    pub fn new(grid: &Arc<Grid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real field"));
        }
        Ok(Self { grid: Arc::clone(grid), values })
    }

    /// Samples `f(x1, x2)` on the collocation lattice.
    pub fn from_fn(grid: &Arc<Grid<T>>, f: impl Fn(T, T) -> T) -> Result<Self> {
        let n = grid.n();
        let dx = grid.dx();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(T::lit(i as f64) * dx, T::lit(j as f64) * dx));
            }
        }
        Self::new(grid, values)
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Midpoint-rule `∫ f g dx` over the torus.
    pub fn integral_product(&self, other: &Self) -> T {
        let cell = self.grid.dx() * self.grid.dx();
        self.values.iter().zip(&other.values).fold(T::zero(), |acc, (a, b)| acc + *a * *b) * cell
    }
}

pub(crate) fn ensure_same_grid<T: Scalar>(a: &Grid<T>, b: &Grid<T>) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Replaces each conjugate pair by its exact Hermitian average; self-conjugate
/// modes lose their imaginary part. Idempotent on symmetric input.
pub fn enforce_hermitian<T: Scalar>(grid: &Grid<T>, coeffs: &mut [Complex<T>]) {
    let half = T::lit(0.5);
    for idx in 0..coeffs.len() {
        let cidx = grid.conjugate_index(idx);
        if cidx == idx {
            coeffs[idx].im = T::zero();
        } else if idx < cidx {
            let avg = (coeffs[idx] + coeffs[cidx].conj()).scale(half);
            coeffs[idx] = avg;
            coeffs[cidx] = avg.conj();
        }
    }
}

pub fn forward_transform<T: Scalar>(f: &RealField<T>) -> Result<SpectralField<T>> {
    if f.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("real field"));
    }
    let grid = &f.grid;
    let mut data: Vec<Complex<T>> = f.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft2(grid, &mut data, Direction::Forward, &mut FftScratch::new());
    let norm = T::one() / T::lit(grid.len() as f64);
    for c in &mut data {
        *c = c.scale(norm);
    }
    enforce_hermitian(grid, &mut data);
    Ok(SpectralField::from_raw(grid, data))
}

pub fn inverse_transform<T: Scalar>(theta: &SpectralField<T>) -> Result<RealField<T>> {
    let residue = theta.hermitian_residue();
    if !residue.is_finite() {
        return Err(Error::NonFinite("spectral coefficients"));
    }
    if residue > T::lit(SYMMETRY_TOLERANCE) {
        return Err(Error::SymmetryViolation(residue.to_f64_lossy()));
    }
    let mut data = theta.coeffs.clone();
    fft2(&theta.grid, &mut data, Direction::Inverse, &mut FftScratch::new());
    let values = data.into_iter().map(|c| c.re).collect();
    Ok(RealField { grid: Arc::clone(&theta.grid), values })
}

pub fn dealias<T: Scalar>(theta: &SpectralField<T>, rule: DealiasRule) -> SpectralField<T> {
    let mut out = theta.clone();
    dealias_in_place(&theta.grid, &mut out.coeffs, rule);
    out
}

pub(crate) fn dealias_in_place<T: Scalar>(grid: &Grid<T>, coeffs: &mut [Complex<T>], rule: DealiasRule) {
    if rule == DealiasRule::None {
        return;
    }
    let n = grid.n();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let (k1, k2) = grid.mode(idx);
        if !rule.keeps(n, k1, k2) {
            *c = Complex::new(T::zero(), T::zero());
        }
    }
}

/// `(∂₁θ, ∂₂θ)` in spectral form.
pub fn gradient<T: Scalar>(theta: &SpectralField<T>) -> (SpectralField<T>, SpectralField<T>) {
    let grid = &theta.grid;
    let mut d1 = Vec::with_capacity(grid.len());
    let mut d2 = Vec::with_capacity(grid.len());
    for (idx, c) in theta.coeffs.iter().enumerate() {
        let (k1, k2) = grid.deriv(idx);
        d1.push(Complex::new(-k1 * c.im, k1 * c.re));
        d2.push(Complex::new(-k2 * c.im, k2 * c.re));
    }
    (SpectralField::from_raw(grid, d1), SpectralField::from_raw(grid, d2))
}

/// `∇⊥θ = (-∂₂θ, ∂₁θ)`.
pub fn perp_gradient<T: Scalar>(theta: &SpectralField<T>) -> VelocityField<T> {
    let (d1, d2) = gradient(theta);
    VelocityField { u1: d2.scaled(-T::one()), u2: d1 }
}

/// Plancherel pairing `∫ a b dx = length² Σ_k Re(â(k) conj b̂(k))`.
pub fn l2_inner<T: Scalar>(a: &SpectralField<T>, b: &SpectralField<T>) -> Result<T> {
    ensure_same_grid(&a.grid, &b.grid)?;
    let sum = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .fold(T::zero(), |acc, (x, y)| acc + x.re * y.re + x.im * y.im);
    let l = a.grid.length();
    Ok(l * l * sum)
}

impl<T: Scalar> VelocityField<T> {
    /// Largest `|k·û(k)|` over modes, using the derivative wavenumbers.
    pub fn divergence_residue(&self) -> T {
        let grid = self.u1.grid();
        self.u1
            .coeffs()
            .iter()
            .zip(self.u2.coeffs())
            .enumerate()
            .fold(T::zero(), |m, (idx, (a, b))| {
                let (k1, k2) = grid.deriv(idx);
                m.max((a.scale(k1) + b.scale(k2)).norm())
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> Arc<Grid<f64>> {
        Grid::periodic(n).unwrap()
    }

    fn random_real(g: &Arc<Grid<f64>>, seed: u64) -> RealField<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        RealField::new(g, v).unwrap()
    }

    fn cos_x1(g: &Arc<Grid<f64>>) -> SpectralField<f64> {
        forward_transform(&RealField::from_fn(g, |x, _| x.cos()).unwrap()).unwrap()
    }

    #[test]
    fn constant_field_has_only_mean() {
        let g = grid(8);
        let f = RealField::from_fn(&g, |_, _| 3.5).unwrap();
        let h = forward_transform(&f).unwrap();
        assert!((h.at(0, 0).re - 3.5).abs() < 1e-14);
        assert!(h.coeffs().iter().skip(1).all(|c| c.norm() < 1e-14));
    }

    #[test]
    fn cosine_has_half_amplitudes() {
        let g = grid(16);
        let h = cos_x1(&g);
        for (idx, c) in h.coeffs().iter().enumerate() {
            let (k1, k2) = g.mode(idx);
            let expect = if k1.abs() == 1 && k2 == 0 { 0.5 } else { 0.0 };
            assert!((c.re - expect).abs() < 1e-14 && c.im.abs() < 1e-14, "{k1} {k2} {c}");
        }
        let back = inverse_transform(&h).unwrap();
        for (i, v) in back.values().iter().enumerate() {
            let x = (i / 16) as f64 * g.dx();
            assert!((v - x.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn only_mean_inverts_to_constant() {
        let g = grid(8);
        let mut h = SpectralField::zeros(&g);
        h.set_mode(0, 0, Complex::new(2.0, 0.0));
        let f = inverse_transform(&h).unwrap();
        assert!(f.values().iter().all(|v| (v - 2.0).abs() < 1e-15));
    }

    #[test]
    fn inverse_rejects_asymmetric_input() {
        let g = grid(8);
        let mut h = SpectralField::zeros(&g);
        h.coeffs_mut()[g.index_of(1, 0)] = Complex::new(1.0, 0.0);
        assert!(matches!(inverse_transform(&h), Err(Error::SymmetryViolation(_))));
    }

    #[test]
    fn forward_rejects_non_finite() {
        let g = grid(8);
        assert!(RealField::new(&g, vec![f64::NAN; 64]).is_err());
    }

    #[test]
    fn dealias_threshold_n12() {
        let g = grid(12);
        let mut h = SpectralField::zeros(&g);
        h.set_mode(5, 0, Complex::new(1.0, 0.0));
        h.set_mode(4, 0, Complex::new(1.0, 0.0));
        let d = dealias(&h, DealiasRule::TwoThirds);
        assert_eq!(d.at(5, 0), Complex::new(0.0, 0.0));
        assert_eq!(d.at(4, 0), Complex::new(1.0, 0.0));
        let same = dealias(&h, DealiasRule::None);
        assert_eq!(same.coeffs(), h.coeffs());
    }

    #[test]
    fn gradient_of_cosine() {
        let g = grid(16);
        let h = cos_x1(&g);
        let (d1, d2) = gradient(&h);
        let f1 = inverse_transform(&d1).unwrap();
        let f2 = inverse_transform(&d2).unwrap();
        let vp = perp_gradient(&h);
        let p1 = inverse_transform(&vp.u1).unwrap();
        let p2 = inverse_transform(&vp.u2).unwrap();
        for i in 0..g.len() {
            let x = (i / 16) as f64 * g.dx();
            assert!((f1.values()[i] + x.sin()).abs() < 1e-14);
            assert!(f2.values()[i].abs() < 1e-14);
            assert!(p1.values()[i].abs() < 1e-14);
            assert!((p2.values()[i] + x.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn inner_products_of_trig_modes() {
        let g = grid(16);
        let c = cos_x1(&g);
        let s = forward_transform(&RealField::from_fn(&g, |x, _| x.sin()).unwrap()).unwrap();
        let two_pi_sq = 19.739208802178716;
        assert!((l2_inner(&c, &c).unwrap() - two_pi_sq).abs() < 1e-12);
        assert!(l2_inner(&c, &s).unwrap().abs() < 1e-13);
        assert_eq!(l2_inner(&SpectralField::zeros(&g), &c).unwrap(), 0.0);
        let other = Grid::periodic(8).unwrap();
        assert!(matches!(l2_inner(&c, &SpectralField::zeros(&other)), Err(Error::GridMismatch)));
    }

    #[test]
    fn single_precision_round_trip() {
        let g = Grid::<f32>::periodic(16).unwrap();
        let f = RealField::from_fn(&g, |x, y| (x + 2.0 * y).sin() + 0.25).unwrap();
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip_and_parseval(seed in any::<u64>(), which in 0usize..3) {
            let n = [8, 32, 128][which];
            let g = grid(n);
            let f = random_real(&g, seed);
            let h = forward_transform(&f).unwrap();
            prop_assert_eq!(h.hermitian_residue(), 0.0);
            let back = inverse_transform(&h).unwrap();
            let scale = f.sup_norm();
            for (a, b) in f.values().iter().zip(back.values()) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
            let physical = f.integral_product(&f);
            let spectral = l2_inner(&h, &h).unwrap();
            prop_assert!((physical - spectral).abs() <= 1e-12 * physical);
        }

        #[test]
        fn dealias_is_a_self_adjoint_projection(seed in any::<u64>()) {
            let g = grid(24);
            let a = forward_transform(&random_real(&g, seed)).unwrap();
            let b = forward_transform(&random_real(&g, seed.wrapping_add(1))).unwrap();
            let da = dealias(&a, DealiasRule::TwoThirds);
            let dda = dealias(&da, DealiasRule::TwoThirds);
            prop_assert_eq!(da.coeffs(), dda.coeffs());
            prop_assert_eq!(da.hermitian_residue(), 0.0);
            let lhs = l2_inner(&da, &b).unwrap();
            let rhs = l2_inner(&a, &dealias(&b, DealiasRule::TwoThirds)).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }

        #[test]
        fn perp_gradient_is_divergence_free(seed in any::<u64>()) {
            let g = grid(16);
            let a = forward_transform(&random_real(&g, seed)).unwrap();
            let v = perp_gradient(&a);
            prop_assert_eq!(v.u1.hermitian_residue(), 0.0);
            prop_assert_eq!(v.u2.hermitian_residue(), 0.0);
            let (d1, _) = gradient(&a);
            prop_assert_eq!(d1.hermitian_residue(), 0.0);
            let scale = a.coeffs().iter().fold(0.0f64, |m, c| m.max(c.norm())) * 64.0;
            prop_assert!(v.divergence_residue() <= 4.0 * f64::EPSILON * scale);
        }
    }
}
