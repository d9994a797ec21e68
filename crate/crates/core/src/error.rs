use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("Hermitian symmetry violated (relative residue {0:e})")]
    SymmetryViolation(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("blow-up candidate at t = {t} (step {step}): {reason}")]
    BlowUp { t: f64, step: u64, reason: String },

    #[error("exponent schedule exceeded horizon: s({t}) = {s} <= 4")]
    HorizonExceeded { t: f64, s: f64 },

    #[error("input is not band-limited: {0}")]
    NotBandLimited(String),

    #[error("inadmissible Riccati data: {0}")]
    Inadmissible(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("csv error: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Short machine-readable tag, used by the CLI error envelope.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::GridMismatch => "grid_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::SymmetryViolation(_) => "symmetry_violation",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::BlowUp { .. } => "blow_up",
            Error::HorizonExceeded { .. } => "horizon_exceeded",
            Error::NotBandLimited(_) => "not_band_limited",
            Error::Inadmissible(_) => "inadmissible",
            Error::Config { .. } => "config",
            Error::Checkpoint(_) => "checkpoint",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
        }
    }
}
