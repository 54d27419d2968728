//! Modelling of N x N optical omega networks.
//!
//! The library routes messages through an n-stage shuffle-exchange fabric
//! ([`topology`]), detects switch and link crosstalk conflicts both by path
//! simulation and by combination-matrix window analysis ([`conflict`]), and
//! partitions message sets into conflict-free passes with several schedulers
//! ([`sched`]). [`bench`] runs seeded comparisons across schedulers, and
//! the remaining modules back the `omin` command line tool.

pub mod bench;
pub mod cli;
pub mod conflict;
pub mod dot;
pub mod error;
pub mod msgfile;
pub mod report;
pub mod sched;
pub mod topology;

pub use error::{Error, Result};
pub use topology::{Address, NetworkConfig, Path, SwitchId};
