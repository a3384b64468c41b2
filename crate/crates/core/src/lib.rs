//! Symmetric rendezvous of two agents in a disk with a common reference
//! point.
//!
//! Agents start on the boundary of a unit disk at arc distance `2 alpha` and
//! share knowledge of the center. The crate evaluates the randomized
//! `k`-round darting strategies in closed form, finds their optimal angles,
//! checks every formula against an independent simulator, and derives
//! effectiveness thresholds, asymptotic constants and time/energy tradeoffs.

pub mod analysis;
pub mod analytic;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod optimize;
pub mod simulate;

pub use analytic::{evaluate, Energy, PerformanceReport};
pub use error::{Error, Result};
pub use geometry::{DartingGeometry, Instance, Steps, Strategy};
