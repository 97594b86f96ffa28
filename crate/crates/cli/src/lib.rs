//! Command-line surface for the phase library: sweeps, verification suites,
//! and point evaluations.

pub mod fig1;
pub mod point;
pub mod scenario;
pub mod verify;
