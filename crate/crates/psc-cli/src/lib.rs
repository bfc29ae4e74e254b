//! Instance file format, report rendering, and command implementations for
//! the `psc` binary.

pub mod commands;
pub mod format;
pub mod report;
