//! Experiments behind the `hsgen` command.

pub mod experiments;
pub mod property;
pub mod report;
