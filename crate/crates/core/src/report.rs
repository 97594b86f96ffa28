//! Aggregated phase results.

use std::fmt;

use crate::angle::Angle;

/// Composite, per-site, and mutual phases of one evolution, plus optional
/// entanglement data for the S/W families.
///
/// The invariant `mutual_gp = composite_gp − Σ subsystem_gps` holds in the
/// branch mode shared by all phase fields.
#[derive(Debug, Clone)]
pub struct PhaseReport {
    /// Composite geometric phase Γ.
    pub composite_gp: Angle,
    /// Per-site mixed-state geometric phases γ_n^M.
    pub subsystem_gps: Vec<Angle>,
    /// Mutual geometric phase Δγ = Γ − Σ_n γ_n^M.
    pub mutual_gp: Angle,
    /// Composite dynamical phase Δ (0 for parallel-transported loops).
    pub dynamical_composite: f64,
    /// Per-site dynamical phases δ_n^M.
    pub dynamical_subsystems: Vec<f64>,
    /// Closest-separable-state geometric phase Γ_S, when the family is known.
    pub closest_separable_gp: Option<Angle>,
    /// Relative entropy of entanglement in bits, when the family is known.
    pub relative_entropy: Option<f64>,
}

impl PhaseReport {
    /// Assembles a report from geometric phases alone; dynamical phases are
    /// zero (the parallel-transported case) and entanglement fields empty.
    ///
    /// The mutual phase is the raw difference of the stored values — it is
    /// never reduced again, so the defining identity survives even when the
    /// inputs are principal-branch values.
    pub fn from_phases(composite: Angle, subsystem: Vec<Angle>) -> Self {
        let sum: f64 = subsystem.iter().map(|a| a.value()).sum();
        let n = subsystem.len();
        PhaseReport {
            composite_gp: composite,
            mutual_gp: Angle::unwrapped(composite.value() - sum),
            subsystem_gps: subsystem,
            dynamical_composite: 0.0,
            dynamical_subsystems: vec![0.0; n],
            closest_separable_gp: None,
            relative_entropy: None,
        }
    }

    /// Σ_n γ_n^M.
    pub fn subsystem_sum(&self) -> f64 {
        self.subsystem_gps.iter().map(|a| a.value()).sum()
    }

    /// Σ_n δ_n^M.
    pub fn dynamical_sum(&self) -> f64 {
        self.dynamical_subsystems.iter().sum()
    }
}

impl fmt::Display for PhaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gamma: {:.16e}", self.composite_gp.value())?;
        for (i, g) in self.subsystem_gps.iter().enumerate() {
            writeln!(f, "gamma_M[{i}]: {:.16e}", g.value())?;
        }
        writeln!(f, "sum_gamma_M: {:.16e}", self.subsystem_sum())?;
        writeln!(f, "Delta_gamma: {:.16e}", self.mutual_gp.value())?;
        writeln!(f, "Delta: {:.16e}", self.dynamical_composite)?;
        for (i, d) in self.dynamical_subsystems.iter().enumerate() {
            writeln!(f, "delta[{i}]: {:.16e}", d)?;
        }
        if let Some(gs) = self.closest_separable_gp {
            writeln!(f, "Gamma_S: {:.16e}", gs.value())?;
        }
        if let Some(er) = self.relative_entropy {
            writeln!(f, "E_R: {:.16e}", er)?;
        }
        Ok(())
    }
}
