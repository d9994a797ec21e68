//! Real/spectral representation of scalar fields on the square 2-torus.

mod fft;
pub(crate) mod field;
mod grid;

pub(crate) use fft::{fft2, Direction, FftScratch};
pub use field::{
    dealias, enforce_hermitian, forward_transform, gradient, inverse_transform, l2_inner,
    perp_gradient, DealiasRule, RealField, SpectralField, VelocityField,
};
pub use grid::Grid;
