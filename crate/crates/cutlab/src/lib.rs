//! File formats, the experiment runner, reports and the command line on top
//! of `cutlab-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod graph_io;
pub mod heuristics;
pub mod record;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
