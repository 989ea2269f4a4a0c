//! Command-line front end for `proth-core`.

pub mod args;
pub mod commands;
pub mod report;

pub use args::Cli;
pub use commands::run;
pub use report::Report;
