//! Geometric and dynamical phases of multipartite entangled qubit states
//! evolving under local parallel-transported unitaries.
//!
//! The library computes the composite geometric phase Γ of a Dicke
//! superposition under cyclic local loops, decomposes it into per-site
//! mixed-state phases γ_n^M plus a mutual phase Δγ = Γ − Σγ_n^M, attributes
//! that correction to classical or quantum correlations via the relative
//! entropy of entanglement, and cross-validates every closed form against an
//! independent dense-statevector simulation.
//!
//! Organization:
//! - [`angle`], [`state`]: branch-aware angles and the state/reduced-state
//!   domain types;
//! - [`closed_form`]: the analytic phase engine (sign-pattern combinatorics,
//!   elementary-symmetric-polynomial reduction, S/W special cases);
//! - [`entanglement`]: E_R for the S and W families, closest-separable-state
//!   phases, correlation attribution;
//! - [`oracle`]: the dense simulator (statevectors, parallel-transported
//!   unitary paths, phase integrals);
//! - [`io`]: state files.

pub mod angle;
pub mod closed_form;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod oracle;
pub mod report;
pub mod state;

pub use angle::{Angle, BranchMode};
pub use error::{PhaseError, Result};
pub use report::PhaseReport;
pub use state::{DickeSuperposition, LocalLoop, ReducedQubit};
