//! Scene-driven front-end: reads scene files, runs the invariant batteries
//! and the property runner, and renders reports.

pub mod battery;
pub mod commands;
pub mod error;
pub mod oracle_suite;
pub mod polynomial;
pub mod properties;
pub mod report;
pub mod scene;
pub mod verify;

pub use commands::Options;
pub use error::{CliError, Result};
pub use report::Report;
pub use scene::Scene;
