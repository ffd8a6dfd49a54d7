//! Configuration-driven parameter sweeps over both engines.

pub mod config;
pub mod output;
pub mod run;

pub use config::{Axis, Engine, EngineKind, NumericOptions, Spacing, SweepConfig};
pub use output::{config_hash, read_csv, render_csv, write_outputs, CsvTable};
pub use run::{
    compare_engines, evaluate, grid_min_g2, run_point, run_sweep, scan_delta1, scan_g, Command, CompareReport,
    Row, SweepResult,
};
