//! Command-line front end: connection files, the built-in corpus and the
//! verification suites.

pub mod app;
pub mod corpus;
pub mod error;
pub mod format;
pub mod random;
pub mod suites;

pub use app::{run, Outcome, MAX_SAT_ENV};
pub use error::CliError;
