//! Independent dense-statevector oracle.
//!
//! Everything here validates the closed forms from first principles: states
//! are explicit 2^N amplitude vectors, evolutions are numerically integrated
//! per-site unitary paths, and phases come out of overlaps and quadrature —
//! no combinatorial shortcuts shared with the analytic engine.

pub mod mat2;
pub mod path;
pub mod phases;
pub mod state;
mod stencil;

pub use mat2::Mat2;
pub use path::{
    computational_basis, enforce_pt, hamiltonian_path, pt_final_unitary, pt_gamma, pt_path_z,
    pt_path_z_for_state, FourierHamiltonian, PTReport, SiteBasis, UnitaryPath, MIN_PATH_STEPS,
};
pub use phases::{
    dynamical_phase, subsystem_gp_oracle, total_phase, DynamicalPhases, OVERLAP_TOL,
    RICHARDSON_TOL,
};
pub use state::{StateVector, DEFAULT_QUBIT_CAP, STATE_NORM_TOL};
