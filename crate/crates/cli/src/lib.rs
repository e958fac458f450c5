//! File formats, reporting, and command implementations behind the `bsys`
//! binary. Kept as a library so the commands are testable in-process.

pub mod commands;
pub mod csvio;
pub mod quiver;
pub mod report;
pub mod runner;
