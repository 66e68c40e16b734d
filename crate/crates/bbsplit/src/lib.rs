//! Scenario files, experiment sweeps and the `bbsplit` command-line driver
//! on top of [`bbsplit_core`].

pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
