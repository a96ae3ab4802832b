//! File formats, JSON configuration and the `partfuse` command-line tool
//! built on [`partfuse_core`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod report;

pub use error::{Error, Result};
