//! Declarative experiment driver behind the `quelab` binary.
//!
//! A config file names the experiment kind, the surface, a grid of spectral
//! parameters, a radius rule and a center; [`run_experiment`] evaluates one
//! [`ResultRow`] per grid point and the writers in [`output`] serialise the
//! table as CSV or JSON lines.

pub mod config;
pub mod output;
pub mod run;

pub use config::{ExperimentConfig, Kind, MassMethodSpec, RadiusRule, Surface, RADIUS_PRESETS};
pub use output::{csv_string, format_float, metadata_json, write_csv, write_jsonl};
pub use run::{build_evaluator, run_experiment, ResultRow, ResultTable, RunOptions, COLUMNS, SCHEMA_VERSION};
