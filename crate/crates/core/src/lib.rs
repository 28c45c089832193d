//! Link budgets for free-space optical satellite links.
//!
//! Covers optical inter-satellite links and ground up/downlinks through a
//! cloudy atmosphere: received power, link margin, the transmit power needed
//! for a margin, and the longest distance that closes at a power cap.
//! Computation runs in linear units; decibels are for presentation.

pub mod atmosphere;
pub mod budget;
pub mod error;
pub mod geometry;
pub mod optics;
pub mod quantities;
pub mod report;
pub mod scenario;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use quantities::{Decibels, PowerValue};
pub use report::{render_table, TableFormat};
pub use scenario::{parse_scenario, parse_scenario_with_overrides, Scenario, ScenarioError};
pub use sweep::{run_sweep, LinkSetup, SweepDef, SweepKind, SweepRow};

/// Version string stamped into rendered output headers.
pub const MODEL_VERSION: &str = concat!("fsolink ", env!("CARGO_PKG_VERSION"));
