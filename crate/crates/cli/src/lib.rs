//! Config-driven experiment runner and report emission for the `lpmult`
//! workbench. The binary in this crate wires the library modules into
//! subcommands; everything it does goes through this library so runs are
//! scriptable and testable.

pub mod config;
pub mod report;
pub mod runner;
pub mod svg;

pub use config::{ExperimentConfig, ExperimentKind, ModelSpec, SetSpec};
pub use report::{Cell, CellTiming, EmitFormat, Report};
pub use runner::run;
