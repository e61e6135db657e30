//! The `vtt` command-line tool and its read-only HTTP service.

pub mod commands;
pub mod load;
pub mod service;

pub use commands::run;
