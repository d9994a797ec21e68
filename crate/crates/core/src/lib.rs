//! Pseudo-spectral toolkit for the logarithmically singular SQG (Ohkitani) model,
//! the δ-SQG family and their dissipative variants on the 2-torus, together with
//! numerical oracles for the inequalities their well-posedness theory rests on.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the double-precision instantiation used by the experiment harnesses
//! and the command-line tool.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod ic;
pub mod io;
pub mod multiplier;
pub mod oracles;
pub mod run;
pub mod scalar;
pub mod spectral;

pub use dynamics::{ModelSpec, SimulationState};
pub use error::{Error, Result};
pub use io::SimulationConfig;
pub use multiplier::{BiotSavart, Sign, Symbol, SymbolTable};
pub use scalar::Scalar;
pub use spectral::{DealiasRule, Grid, RealField, SpectralField, VelocityField};

pub type Grid64 = Grid<f64>;
pub type SpectralField64 = SpectralField<f64>;
pub type RealField64 = RealField<f64>;
pub type Symbol64 = Symbol<f64>;
pub type ModelSpec64 = ModelSpec<f64>;
pub type SimulationState64 = SimulationState<f64>;

pub type Grid32 = Grid<f32>;
pub type SpectralField32 = SpectralField<f32>;
