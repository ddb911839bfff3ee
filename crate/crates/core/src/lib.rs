//! Dynamic line rating and its effect on economic dispatch.
//!
//! The pipeline runs in four stages:
//!
//! - [`weather`] reconstructs per-zone wind, irradiance and air temperature
//!   from RES feed-in series and daily temperature records;
//! - [`thermal`] turns ambient conditions into conductor ampacity through the
//!   steady-state heat balance;
//! - [`grid`] converts ampacity into corridor limits (MVA), calibrated so that
//!   the nominal reference weather reproduces each corridor's static rating, and
//!   computes DC flows through PTDFs;
//! - [`dispatch`] solves a receding-horizon economic dispatch with those limits.
//!
//! [`scenario`] wires the stages to CSV inputs, a TOML benchmark description
//! and report outputs. Runnable walkthroughs of each stage live in the crate's
//! `examples/` directory.

pub mod thermal;
pub mod dispatch;
pub mod grid;
pub mod scenario;
pub mod weather;
