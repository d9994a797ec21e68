use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square collocation grid on the 2-torus `[0, length)^2` with `n` modes per axis.
///
/// Coefficient arrays are stored row-major with the first index running over the
/// `x1` wavenumber and the second over `x2`, both in FFT order
/// (`0, 1, ..., n/2, -n/2+1, ..., -1`).
pub struct Grid<T: Scalar> {
    n: usize,
    length: T,
    shift: T,
    axis: Vec<i64>,
    /// Derivative wavenumbers per axis index; the Nyquist entry is zero.
    deriv: Vec<T>,
    /// Physical wavenumber magnitude per mode.
    kmag: Vec<T>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Scalar> Grid<T> {
    pub fn new(n: usize, length: T, shift: T) -> Result<Arc<Self>> {
        if n % 2 != 0 {
            return Err(Error::InvalidGrid("n must be even".into()));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n must be at least 8, got {n}")));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidGrid("length must be positive and finite".into()));
        }
        if !(shift >= T::one()) || !shift.is_finite() {
            return Err(Error::InvalidGrid("shift must be >= 1".into()));
        }

        let half = (n / 2) as i64;
        let axis: Vec<i64> = (0..n as i64).map(|j| if j <= half { j } else { j - n as i64 }).collect();
        let scale = T::TAU() / length;
        let deriv = axis
            .iter()
            .map(|&k| if k == half { T::zero() } else { T::lit(k as f64) * scale })
            .collect();
        let mut kmag = Vec::with_capacity(n * n);
        for &k1 in &axis {
            for &k2 in &axis {
                let q = (k1 * k1 + k2 * k2) as f64;
                kmag.push(T::lit(q.sqrt()) * scale);
            }
        }

        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(Arc::new(Self { n, length, shift, axis, deriv, kmag, fwd, inv }))
    }

    /// Standard `2π`-periodic grid with the default shift `a = 10`.
    pub fn periodic(n: usize) -> Result<Arc<Self>> {
        Self::new(n, T::TAU(), T::lit(10.0))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    #[inline]
    pub fn shift(&self) -> T {
        self.shift
    }

    /// Grid spacing `length / n`.
    pub fn dx(&self) -> T {
        self.length / T::lit(self.n as f64)
    }

    /// `2π / length`, the factor turning integer wavenumbers into physical ones.
    pub fn wavenumber_scale(&self) -> T {
        T::TAU() / self.length
    }

    /// Integer wavenumbers of one axis in FFT order.
    pub fn wavenumbers(&self) -> &[i64] {
        &self.axis
    }

    /// Integer wavenumber pair of the mode at flat index `idx`.
    #[inline]
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        (self.axis[idx / self.n], self.axis[idx % self.n])
    }

    /// Flat index of integer mode `(k1, k2)`, wrapping modulo `n`.
    #[inline]
    pub fn index_of(&self, k1: i64, k2: i64) -> usize {
        let n = self.n as i64;
        (k1.rem_euclid(n) * n + k2.rem_euclid(n)) as usize
    }

    /// Flat index of the mode `-k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j) = (idx / n, idx % n);
        ((n - i) % n) * n + (n - j) % n
    }

    #[inline]
    pub fn kmag(&self) -> &[T] {
        &self.kmag
    }

    /// Derivative wavenumbers `(k1, k2)` at flat index `idx` (Nyquist rows zeroed).
    #[inline]
    pub fn deriv(&self, idx: usize) -> (T, T) {
        (self.deriv[idx / self.n], self.deriv[idx % self.n])
    }

    pub fn max_kmag(&self) -> T {
        self.kmag.iter().copied().fold(T::zero(), T::max)
    }

    pub(crate) fn forward_plan(&self) -> &Arc<dyn Fft<T>> {
        &self.fwd
    }

    pub(crate) fn inverse_plan(&self) -> &Arc<dyn Fft<T>> {
        &self.inv
    }

    /// Same discretization, ignoring plan identity.
    pub fn same_as(&self, other: &Grid<T>) -> bool {
        self.n == other.n && self.length == other.length && self.shift == other.shift
    }
}

impl<T: Scalar> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl<T: Scalar> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("shift", &self.shift)
            .finish()
    }
}
