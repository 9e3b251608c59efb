//! Command-line front end for `exactlab-core`: the structure file format,
//! experiment configurations, reports and CSV tables, and grid counts run
//! on a thread pool.

pub mod cli;
pub mod config;
pub mod error;
pub mod parallel;
pub mod report;
pub mod structfile;

pub use error::{LabError, Result};
pub use structfile::{read_structure, read_structure_file, write_structure};
