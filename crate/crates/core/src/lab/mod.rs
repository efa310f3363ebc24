//! Configuration, experiment drivers and report emission for the command
//! line tool.

pub mod commands;
pub mod config;
pub mod raster;
pub mod runs;

pub use commands::{run_command, Command};
pub use config::{load_config, Config};
pub use raster::{render_ppm, Palette, Rgb};
pub use runs::{
    run_histogram, run_path, run_sweep, Histogram, PathRow, PathRun, Sweep, SweepRow,
    JUMP_THRESHOLD,
};
