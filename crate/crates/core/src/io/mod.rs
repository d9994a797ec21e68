//! Config files, binary checkpoints and diagnostics CSV.

pub mod checkpoint;
pub mod config;
pub mod csv;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use config::{
    parse_config, parse_config_str, ConvergenceConfig, ExponentRate, GridConfig, IcConfig, IcKind, ModeConfig,
    ModelConfig, Normalization, NormsConfig, OutputConfig, Preset, ProbeConfig, SimulationConfig, TimeConfig, TimeMode,
};
pub use csv::{format_diagnostics, parse_diagnostics, read_diagnostics, write_diagnostics, DIAGNOSTICS_HEADER};
