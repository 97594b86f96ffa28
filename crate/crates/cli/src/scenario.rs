//! Scenario files: a state, a drive (tilt angles, uniform phase, or explicit
//! Hamiltonian coefficients), step count, and seed, bundled as JSON.
//!
//! ```json
//! {
//!   "state": { "family": "w", "n": 3, "k": 1 },
//!   "alphas": [0.9, 0.9, 0.9],
//!   "steps": 20000,
//!   "oracle": true
//! }
//! ```
//!
//! `state` may instead be `{ "family": "s", "n": 5, "r": 0.5 }`, an inline
//! `{ "n": ..., "amps": [[re, im], ...] }` document, or
//! `{ "file": "state.json" }`. A `hamiltonians` list (per-site Fourier
//! coefficients c0/c_cos/c_sin) replaces the transport loop with an
//! arbitrary local path, reported through the gauge-corrected machinery.

use std::fmt::Write as _;
use std::path::Path;

use gphase_core::error::{PhaseError, Result};
use gphase_core::io::{LoadError, StateFile};
use gphase_core::oracle::{
    dynamical_phase, enforce_pt, hamiltonian_path, FourierHamiltonian, StateVector,
    DEFAULT_QUBIT_CAP,
};
use gphase_core::{BranchMode, DickeSuperposition};
use serde::{Deserialize, Serialize};

use crate::point::{run_point, Drive, PointSpec, PointState};

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioState {
    Family(FamilySpec),
    Inline(StateFile),
    File { file: String },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: String,
    pub n: usize,
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub k: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub state: ScenarioState,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub alphas: Option<Vec<f64>>,
    #[serde(default)]
    pub hamiltonians: Option<Vec<FourierHamiltonian>>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub branch: Option<String>,
}

fn default_steps() -> usize {
    20_000
}

pub fn load_scenario(path: &Path) -> std::result::Result<Scenario, LoadError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_branch(s: Option<&str>) -> Result<BranchMode> {
    match s {
        None | Some("unwrapped") => Ok(BranchMode::Unwrapped),
        Some("principal") => Ok(BranchMode::Principal),
        Some(other) => Err(PhaseError::OutOfRange(format!(
            "unknown branch mode '{other}'"
        ))),
    }
}

/// Executes a scenario and returns the report text.
pub fn run_scenario(scenario: &Scenario, base_dir: &Path) -> Result<String> {
    let branch = parse_branch(scenario.branch.as_deref())?;
    let state_spec = resolve_state(&scenario.state, base_dir)?;

    if let Some(hams) = &scenario.hamiltonians {
        return run_hamiltonian_scenario(&state_spec, hams, scenario.steps);
    }

    let drive = match (&scenario.alphas, scenario.gamma) {
        (Some(alphas), None) => Drive::Alphas(alphas.clone()),
        (None, Some(g)) => Drive::uniform_gamma(g),
        (None, None) => {
            return Err(PhaseError::PreconditionViolated(
                "scenario needs gamma, alphas, or hamiltonians".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(PhaseError::PreconditionViolated(
                "scenario gives both gamma and alphas".into(),
            ))
        }
    };
    let mut spec = PointSpec::new(state_spec, drive);
    spec.branch = branch;
    spec.oracle = scenario.oracle;
    spec.steps = scenario.steps;
    run_point(&spec)
}

fn resolve_state(state: &ScenarioState, base_dir: &Path) -> Result<PointState> {
    match state {
        ScenarioState::Family(f) => match (f.family.as_str(), f.r, f.k) {
            ("s" | "S", Some(r), None) => Ok(PointState::SFamily { r, n: f.n }),
            ("w" | "W", None, Some(k)) => Ok(PointState::WFamily { k, n: f.n }),
            _ => Err(PhaseError::PreconditionViolated(
                "family spec needs family=s with r, or family=w with k".into(),
            )),
        },
        ScenarioState::Inline(file) => {
            let st = serde_json::to_string(file)
                .ok()
                .and_then(|s| serde_json::from_str::<StateFile>(&s).ok())
                .ok_or_else(|| PhaseError::PreconditionViolated("bad inline state".into()))?
                .into_state()
                .map_err(|e| PhaseError::PreconditionViolated(e.to_string()))?;
            Ok(PointState::Custom(st))
        }
        ScenarioState::File { file } => {
            let path = base_dir.join(file);
            let st = gphase_core::io::load_state(&path)
                .map_err(|e| PhaseError::PreconditionViolated(e.to_string()))?;
            Ok(PointState::Custom(st))
        }
    }
}

fn build_state(spec: &PointState) -> Result<DickeSuperposition> {
    match spec {
        PointState::SFamily { r, n } => DickeSuperposition::s_state(*r, *n),
        PointState::WFamily { k, n } => {
            if k.fract() != 0.0 {
                return Err(PhaseError::PreconditionViolated(
                    "hamiltonian scenarios need an integer k".into(),
                ));
            }
            DickeSuperposition::single_dicke(*n, *k as usize)
        }
        PointState::Custom(st) => Ok(st.clone()),
    }
}

/// Arbitrary-path scenario: gauge-correct the given per-site Hamiltonian
/// path against the state's eigenbasis and report dynamical-phase data.
fn run_hamiltonian_scenario(
    state_spec: &PointState,
    hams: &[FourierHamiltonian],
    steps: usize,
) -> Result<String> {
    let state = build_state(state_spec)?;
    let n = state.n_qubits();
    if hams.len() != n {
        return Err(PhaseError::PreconditionViolated(format!(
            "{} hamiltonians for {} sites",
            hams.len(),
            n
        )));
    }
    let eig = state.reduced_qubit().eigen2()?;
    let bases = vec![eig.eigenvectors; n];
    let raw = hamiltonian_path(hams, steps)?;
    let path = enforce_pt(&raw, &bases)?;
    let report = path.pt_report(&bases)?;
    let psi0 = StateVector::from_superposition_capped(&state, DEFAULT_QUBIT_CAP)?;
    let d = dynamical_phase(&psi0, &path)?;

    let mut out = String::new();
    writeln!(out, "n: {n}").unwrap();
    writeln!(out, "steps: {steps}").unwrap();
    writeln!(out, "pt_max_violation: {:.3e}", report.max_violation).unwrap();
    writeln!(out, "cyclic_defect: {:.3e}", report.cyclic_defect).unwrap();
    writeln!(out, "Delta: {:.16e}", d.composite).unwrap();
    for (i, delta) in d.per_site.iter().enumerate() {
        writeln!(out, "delta[{i}]: {:.16e}", delta).unwrap();
    }
    writeln!(out, "additivity_defect: {:.3e}", d.additivity_defect()).unwrap();
    Ok(out)
}
