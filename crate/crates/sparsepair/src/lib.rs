//! Standard-library companion to `sparsepair-core`: dictionary and signal
//! files, CSV output with reproducibility headers, rayon batch runners and
//! the `sparsepair` command line.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod output;
pub mod parallel;

pub use error::{Error, Result};
