//! Single-configuration phase reports.

use std::fmt::Write as _;

use gphase_core::angle::{circle_distance, wrap_principal};
use gphase_core::closed_form::{self, composite_gp, subsystem_gp};
use gphase_core::entanglement::{attribute, er_s_state, er_w_state, Family};
use gphase_core::error::{PhaseError, Result};
use gphase_core::oracle::{
    dynamical_phase, pt_gamma, pt_path_z_for_state, subsystem_gp_oracle, total_phase,
    StateVector, DEFAULT_QUBIT_CAP,
};
use gphase_core::{BranchMode, DickeSuperposition, LocalLoop, PhaseReport};

/// Where the state of a point evaluation comes from.
#[derive(Debug, Clone)]
pub enum PointState {
    SFamily { r: f64, n: usize },
    WFamily { k: f64, n: usize },
    Custom(DickeSuperposition),
}

/// One point evaluation request.
#[derive(Debug, Clone)]
pub struct PointSpec {
    pub state: PointState,
    /// Uniform cyclic phase, or per-site tilt angles realizing it.
    pub drive: Drive,
    pub branch: BranchMode,
    pub oracle: bool,
    pub steps: usize,
    pub cap: usize,
}

#[derive(Debug, Clone)]
pub enum Drive {
    /// Cyclic phases: one value is applied to every site, a list gives
    /// per-site phases.
    Gammas(Vec<f64>),
    /// Per-site tilt angles of the transport loop (γ_n = π(1 + cos α_n)).
    Alphas(Vec<f64>),
}

impl Drive {
    pub fn uniform_gamma(gamma: f64) -> Self {
        Drive::Gammas(vec![gamma])
    }
}

impl PointSpec {
    pub fn new(state: PointState, drive: Drive) -> Self {
        PointSpec {
            state,
            drive,
            branch: BranchMode::Unwrapped,
            oracle: false,
            steps: 20_000,
            cap: DEFAULT_QUBIT_CAP,
        }
    }
}

/// Runs a point evaluation and renders the structured text report.
pub fn run_point(spec: &PointSpec) -> Result<String> {
    let mut out = String::new();

    let (state, family): (DickeSuperposition, Option<Family>) = match &spec.state {
        PointState::SFamily { r, n } => {
            writeln!(out, "family: S").unwrap();
            writeln!(out, "n: {n}").unwrap();
            writeln!(out, "r: {r:.16e}").unwrap();
            (
                DickeSuperposition::s_state(*r, *n)?,
                Some(Family::S { r: *r }),
            )
        }
        PointState::WFamily { k, n } => {
            writeln!(out, "family: W").unwrap();
            writeln!(out, "n: {n}").unwrap();
            writeln!(out, "k: {k:.16e}").unwrap();
            if k.fract() != 0.0 {
                return Err(PhaseError::PreconditionViolated(
                    "point evaluation needs an integer k (continuous k is a sweep-only extension)"
                        .into(),
                ));
            }
            (
                DickeSuperposition::single_dicke(*n, *k as usize)?,
                Some(Family::W { k: *k }),
            )
        }
        PointState::Custom(st) => {
            writeln!(out, "family: custom").unwrap();
            writeln!(out, "n: {}", st.n_qubits()).unwrap();
            (st.clone(), None)
        }
    };
    let n = state.n_qubits();

    let (gammas, alphas): (Vec<f64>, Option<Vec<f64>>) = match &spec.drive {
        Drive::Gammas(gs) if gs.len() == 1 => {
            writeln!(out, "gamma: {:.16e}", gs[0]).unwrap();
            ((vec![gs[0]; n]), None)
        }
        Drive::Gammas(gs) => {
            if gs.len() != n {
                return Err(PhaseError::PreconditionViolated(format!(
                    "{} phases for {} sites",
                    gs.len(),
                    n
                )));
            }
            for (i, g) in gs.iter().enumerate() {
                writeln!(out, "gamma[{i}]: {g:.16e}").unwrap();
            }
            (gs.clone(), None)
        }
        Drive::Alphas(alphas) => {
            if alphas.len() != n {
                return Err(PhaseError::PreconditionViolated(format!(
                    "{} tilt angles for {} sites",
                    alphas.len(),
                    n
                )));
            }
            let gs: Vec<f64> = alphas.iter().map(|&a| wrap_principal(pt_gamma(a))).collect();
            for (i, (a, g)) in alphas.iter().zip(&gs).enumerate() {
                writeln!(out, "alpha[{i}]: {a:.16e} (gamma: {g:.16e})").unwrap();
            }
            (gs, Some(alphas.clone()))
        }
    };
    writeln!(
        out,
        "branch: {}",
        match spec.branch {
            BranchMode::Principal => "principal",
            BranchMode::Unwrapped => "unwrapped",
        }
    )
    .unwrap();

    let local_loop = LocalLoop::cyclic(gammas.clone());
    let report = assemble_report(&state, &local_loop, spec.branch, &mut out)?;

    if let Some(fam) = family {
        let uniform = gammas[0];
        if gammas.iter().all(|g| (g - uniform).abs() < 1e-15) {
            match attribute(fam, n, uniform, spec.branch) {
                Ok(ent) => {
                    writeln!(out, "E_R: {:.16e}", ent.e_r).unwrap();
                    writeln!(out, "Gamma_S: {:.16e}", ent.gamma_s.value()).unwrap();
                    writeln!(
                        out,
                        "quantum_contribution: {:.16e}",
                        ent.quantum_contribution.value()
                    )
                    .unwrap();
                    writeln!(
                        out,
                        "classical_contribution: {:.16e}",
                        ent.classical_contribution.value()
                    )
                    .unwrap();
                }
                Err(PhaseError::DegenerateSubsystem { .. }) => {
                    let e_r = match fam {
                        Family::S { r } => er_s_state(r)?,
                        Family::W { k } => er_w_state(n, k)?,
                    };
                    writeln!(out, "E_R: {e_r:.16e}").unwrap();
                    writeln!(out, "Gamma_S: degenerate (r < 1e-9)").unwrap();
                }
                Err(e) => return Err(e),
            }
        }
    }

    if spec.oracle {
        append_oracle(&state, &gammas, alphas.as_deref(), spec, report.as_ref(), &mut out)?;
    }

    Ok(out)
}

/// Closed-form phase block; degenerate subsystems are flagged rather than
/// fatal (the composite phase can still be reported).
fn assemble_report(
    state: &DickeSuperposition,
    local_loop: &LocalLoop,
    branch: BranchMode,
    out: &mut String,
) -> Result<Option<PhaseReport>> {
    match closed_form::mutual_gp(state, local_loop, branch) {
        Ok(rep) => {
            write!(out, "{rep}").unwrap();
            Ok(Some(rep))
        }
        Err(PhaseError::DegenerateSubsystem { r }) => {
            let composite = composite_gp(state, local_loop, branch)?;
            writeln!(out, "Gamma: {:.16e}", composite.value()).unwrap();
            writeln!(out, "gamma_M: degenerate (r = {r:.3e} < 1e-9)").unwrap();
            writeln!(out, "Delta_gamma: nan").unwrap();
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Runs the dense oracle along the tilted-axis transport loop and appends
/// measured values and deviations.
fn append_oracle(
    state: &DickeSuperposition,
    gammas: &[f64],
    alphas: Option<&[f64]>,
    spec: &PointSpec,
    report: Option<&PhaseReport>,
    out: &mut String,
) -> Result<()> {
    let n = state.n_qubits();
    // invert γ = π(1 + cos α) when tilt angles were not given directly
    let alphas: Vec<f64> = match alphas {
        Some(a) => a.to_vec(),
        None => gammas
            .iter()
            .map(|&g| {
                let c = (g.rem_euclid(2.0 * std::f64::consts::PI)) / std::f64::consts::PI - 1.0;
                c.clamp(-1.0, 1.0).acos()
            })
            .collect(),
    };
    let path = pt_path_z_for_state(state, &alphas, spec.steps)?;
    let psi0 = StateVector::from_superposition_capped(state, spec.cap)?;
    let oracle_gamma = total_phase(&psi0, &path.final_unitaries())?.value();
    writeln!(out, "oracle_Gamma: {oracle_gamma:.16e}").unwrap();
    if let Some(rep) = report {
        writeln!(
            out,
            "oracle_Gamma_deviation: {:.3e}",
            circle_distance(rep.composite_gp.value(), oracle_gamma)
        )
        .unwrap();
    }
    for site in 0..n {
        match subsystem_gp_oracle(&psi0, &path, site) {
            Ok(a) => {
                writeln!(out, "oracle_gamma_M[{site}]: {:.16e}", a.value()).unwrap();
                if let Some(rep) = report {
                    writeln!(
                        out,
                        "oracle_gamma_M[{site}]_deviation: {:.3e}",
                        circle_distance(rep.subsystem_gps[site].value(), a.value())
                    )
                    .unwrap();
                }
            }
            Err(PhaseError::DegenerateSubsystem { .. }) => {
                writeln!(out, "oracle_gamma_M[{site}]: degenerate").unwrap();
            }
            Err(e) => return Err(e),
        }
    }
    let dyn_phases = dynamical_phase(&psi0, &path)?;
    writeln!(out, "oracle_Delta: {:.16e}", dyn_phases.composite).unwrap();
    writeln!(
        out,
        "oracle_additivity_defect: {:.3e}",
        dyn_phases.additivity_defect()
    )
    .unwrap();
    Ok(())
}

/// Subsystem phase for one site of `state` (used by tests).
pub fn site_phase(state: &DickeSuperposition, gamma: f64, branch: BranchMode) -> Result<f64> {
    subsystem_gp(state, gamma, branch).map(|a| a.value())
}
