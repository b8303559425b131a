//! Configuration-driven experiment harness for the block Gram-Schmidt
//! kernels: condition-number sweeps, CSV/SVG/report emission, and the
//! built-in acceptance suite.

pub mod acceptance;
pub mod config;
pub mod emit;
pub mod plot;
pub mod sweep;
pub mod tolerances;

pub use config::{parse_config, ConfigError, SweepConfig};
pub use sweep::{run_sweep, RunRecord};
pub use tolerances::ToleranceProfile;
