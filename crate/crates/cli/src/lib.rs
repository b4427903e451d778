//! File formats, reports and the `ktres` command line on top of
//! [`ktres_core`].

pub mod commands;
pub mod report;
pub mod spec_file;

pub use commands::run;
pub use spec_file::{load_spec, save_spec, ProblemSpecFile, SpecError};
