use std::sync::Arc;

use rustfft::num_complex::Complex;

use super::model::{ModelSpec, SimulationState};
use crate::error::{Error, Result};
use crate::multiplier::SymbolTable;
use crate::scalar::Scalar;
use crate::spectral::field::dealias_in_place;
use crate::spectral::{enforce_hermitian, fft2, Direction, FftScratch, Grid, SpectralField};

type Coeffs<T> = Vec<Complex<T>>;

/// Pseudo-spectral evaluator and integrating-factor RK4 stepper for one model on one grid.
///
/// Symbol tables are evaluated once at construction; work buffers are reused
/// across calls, so a stepper is cheap to call repeatedly but not `Sync`.
pub struct Stepper<T: Scalar> {
    grid: Arc<Grid<T>>,
    model: ModelSpec<T>,
    /// `sign · γ(|k|)`
    velocity: Vec<T>,
    /// `κ ψ(|k|)` per unit of the integration variable, if damped.
    damping: Option<Vec<T>>,
    vel_buf: Coeffs<T>,
    grad_buf: Coeffs<T>,
    scratch: FftScratch<T>,
    factors: Option<(T, Vec<T>, Vec<T>)>,
}

impl<T: Scalar> Stepper<T> {
    pub fn new(grid: &Arc<Grid<T>>, model: &ModelSpec<T>) -> Result<Self> {
        model.validate()?;
        let velocity = model.biot_savart.table(grid)?.values().to_vec();
        let damping = match (&model.dissipation, model.effective_kappa()) {
            (Some(d), Some(kappa)) => Some(SymbolTable::new(grid, &d.symbol)?.scaled(kappa).values().to_vec()),
            _ => None,
        };
        let zero = Complex::new(T::zero(), T::zero());
        Ok(Self {
            grid: Arc::clone(grid),
            model: model.clone(),
            velocity,
            damping,
            vel_buf: vec![zero; grid.len()],
            grad_buf: vec![zero; grid.len()],
            scratch: FftScratch::new(),
            factors: None,
        })
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    pub fn model(&self) -> &ModelSpec<T> {
        &self.model
    }

    /// Physical velocity and gradient samples packed as `u1 + i u2` and `∂₁θ + i ∂₂θ`.
    fn physical_fields(&mut self, theta: &[Complex<T>]) {
        let grid = &self.grid;
        for (idx, c) in theta.iter().enumerate() {
            let (k1, k2) = grid.deriv(idx);
            let g = c.scale(self.velocity[idx]);
            // û1 = -i k2 g, û2 = i k1 g
            let u1 = Complex::new(k2 * g.im, -k2 * g.re);
            let u2 = Complex::new(-k1 * g.im, k1 * g.re);
            self.vel_buf[idx] = Complex::new(u1.re - u2.im, u1.im + u2.re);
            let tx = Complex::new(-k1 * c.im, k1 * c.re);
            let ty = Complex::new(-k2 * c.im, k2 * c.re);
            self.grad_buf[idx] = Complex::new(tx.re - ty.im, tx.im + ty.re);
        }
        fft2(grid, &mut self.vel_buf, Direction::Inverse, &mut self.scratch);
        fft2(grid, &mut self.grad_buf, Direction::Inverse, &mut self.scratch);
    }

    fn sup_from_buffer(&self) -> T {
        self.vel_buf.iter().fold(T::zero(), |m, v| {
            let s = v.norm_sqr();
            if s.is_nan() || m.is_nan() {
                T::nan()
            } else {
                m.max(s)
            }
        })
        .sqrt()
    }

    /// `N(θ) = -P[F(u·∇θ)]` written into `out`; returns `‖u‖_∞` on the collocation grid.
    ///
    /// The mean mode of `N` is set to zero, since `∫ u·∇θ = 0` for divergence-free `u`.
    pub(crate) fn advection_into(&mut self, theta: &[Complex<T>], out: &mut Coeffs<T>) -> T {
        self.physical_fields(theta);
        let u_max = self.sup_from_buffer();
        out.clear();
        out.extend(self.vel_buf.iter().zip(&self.grad_buf).map(|(u, d)| {
            Complex::new(u.re * d.re + u.im * d.im, T::zero())
        }));
        let grid = &self.grid;
        fft2(grid, out, Direction::Forward, &mut self.scratch);
        let norm = -T::one() / T::lit(grid.len() as f64);
        for c in out.iter_mut() {
            *c = c.scale(norm);
        }
        dealias_in_place(grid, out, self.model.dealias);
        out[0] = Complex::new(T::zero(), T::zero());
        enforce_hermitian(grid, out);
        u_max
    }

    /// Advection term and velocity sup-norm of `θ`.
    pub fn advection(&mut self, theta: &SpectralField<T>) -> Result<(SpectralField<T>, T)> {
        self.check_grid(theta)?;
        let mut out = Vec::with_capacity(self.grid.len());
        let u_max = self.advection_into(theta.coeffs(), &mut out);
        Ok((SpectralField::from_raw(&self.grid, out), u_max))
    }

    /// Full semi-discrete right-hand side, dissipation included.
    pub fn rhs(&mut self, theta: &SpectralField<T>) -> Result<SpectralField<T>> {
        let (mut n, _) = self.advection(theta)?;
        if let Some(damp) = &self.damping {
            for ((o, c), l) in n.coeffs_mut().iter_mut().zip(theta.coeffs()).zip(damp) {
                *o = *o - c.scale(*l);
            }
        }
        Ok(n)
    }

    /// `‖u‖_∞` on the collocation grid.
    pub fn velocity_sup(&mut self, theta: &SpectralField<T>) -> Result<T> {
        self.check_grid(theta)?;
        self.physical_fields(theta.coeffs());
        Ok(self.sup_from_buffer())
    }

    fn check_grid(&self, theta: &SpectralField<T>) -> Result<()> {
        if theta.grid().same_as(&self.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn integrating_factors(&mut self, dt: T) -> (Vec<T>, Vec<T>) {
        if let Some((cached, full, half)) = &self.factors {
            if *cached == dt {
                return (full.clone(), half.clone());
            }
        }
        let (full, half): (Vec<T>, Vec<T>) = match &self.damping {
            Some(d) => d
                .iter()
                .map(|l| ((-*l * dt).exp(), (-*l * dt * T::lit(0.5)).exp()))
                .unzip(),
            None => (vec![T::one(); self.grid.len()], vec![T::one(); self.grid.len()]),
        };
        self.factors = Some((dt, full.clone(), half.clone()));
        (full, half)
    }

    /// Integrating-factor RK4 step of size `dt`, given `a = N(θ)` already evaluated.
    ///
    /// Exact for the linear damping; classical RK4 when there is none.
    pub(crate) fn step_from(&mut self, state: &SimulationState<T>, a: &[Complex<T>], dt: T) -> SimulationState<T> {
        let (e, e2) = self.integrating_factors(dt);
        let theta = state.theta.coeffs();
        let half = dt * T::lit(0.5);
        let len = theta.len();
        let mut stage: Coeffs<T> = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        let mut c = Vec::with_capacity(len);
        let mut d = Vec::with_capacity(len);

        stage.extend((0..len).map(|i| (theta[i] + a[i].scale(half)).scale(e2[i])));
        self.advection_into(&stage, &mut b);
        stage.clear();
        stage.extend((0..len).map(|i| theta[i].scale(e2[i]) + b[i].scale(half)));
        self.advection_into(&stage, &mut c);
        stage.clear();
        stage.extend((0..len).map(|i| theta[i].scale(e[i]) + c[i].scale(dt * e2[i])));
        self.advection_into(&stage, &mut d);

        let sixth = dt / T::lit(6.0);
        let two = T::lit(2.0);
        let mut next: Coeffs<T> = (0..len)
            .map(|i| {
                theta[i].scale(e[i])
                    + (a[i].scale(e[i]) + (b[i] + c[i]).scale(two * e2[i]) + d[i]).scale(sixth)
            })
            .collect();
        dealias_in_place(&self.grid, &mut next, self.model.dealias);
        enforce_hermitian(&self.grid, &mut next);
        SimulationState {
            t: state.t + dt,
            theta: SpectralField::from_raw(&self.grid, next),
            step_count: state.step_count + 1,
        }
    }

    /// One step of size `dt`; a non-finite result is reported as a blow-up.
    pub fn step(&mut self, state: &SimulationState<T>, dt: T) -> Result<SimulationState<T>> {
        if !(dt > T::zero()) {
            return Err(Error::param("dt", "must be positive"));
        }
        self.check_grid(&state.theta)?;
        let mut a = Vec::with_capacity(self.grid.len());
        self.advection_into(state.theta.coeffs(), &mut a);
        let next = self.step_from(state, &a, dt);
        if !next.theta.is_finite() {
            return Err(Error::BlowUp {
                t: state.t.to_f64_lossy(),
                step: state.step_count,
                reason: "non-finite coefficients".into(),
            });
        }
        Ok(next)
    }
}

/// Full right-hand side for a single state.
pub fn rhs<T: Scalar>(state: &SimulationState<T>, model: &ModelSpec<T>) -> Result<SpectralField<T>> {
    Stepper::new(state.theta.grid(), model)?.rhs(&state.theta)
}

pub fn step_rk4<T: Scalar>(state: &SimulationState<T>, model: &ModelSpec<T>, dt: T) -> Result<SimulationState<T>> {
    Stepper::new(state.theta.grid(), model)?.step(state, dt)
}

/// `min(dt_max, cfl Δx / max(1e-14, u_max))`.
pub fn dt_from_velocity<T: Scalar>(u_max: T, dx: T, cfl: T, dt_max: T) -> T {
    dt_max.min(cfl * dx / u_max.max(T::lit(1e-14)))
}

pub fn cfl_dt<T: Scalar>(state: &SimulationState<T>, model: &ModelSpec<T>, cfl: T, dt_max: T) -> Result<T> {
    if !(cfl > T::zero() && cfl <= T::one()) {
        return Err(Error::param("cfl", "must lie in (0, 1]"));
    }
    let grid = state.theta.grid();
    let u = Stepper::new(grid, model)?.velocity_sup(&state.theta)?;
    Ok(dt_from_velocity(u, grid.dx(), cfl, dt_max))
}
