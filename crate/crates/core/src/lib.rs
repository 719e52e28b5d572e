//! Finite-element multi-valley effective-mass solver for the conduction
//! subbands of Si quantum wells and the splitting of the z-valley pair.
//!
//! The pipeline is: [`potential::build_profile`] → [`fem::Problem::solve`] →
//! [`valley::valley_splitting`], with [`sweep`] driving parameter grids and
//! [`oracles`] holding the independent checks.

pub mod error;
pub mod fem;
pub mod material;
pub mod oracles;
pub mod oscillatory;
pub mod potential;
pub mod sweep;
pub mod units;
pub mod valley;

pub use error::{Error, Result};
pub use fem::{EigenSolution, Problem};
pub use material::{ConstantsMode, MaterialSystem, Preset, ValleyPairConstants};
pub use potential::{PotentialProfile, WellGeometry};
pub use valley::{IntegrationDomain, SplittingResult};
