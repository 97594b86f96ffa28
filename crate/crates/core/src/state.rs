//! Symmetric multiqubit state family and single-qubit reduced states.
//!
//! The states handled here are superpositions Σ_k a_k |N,k⟩ over the Dicke
//! basis (|N,k⟩ = symmetrized N-qubit state with k excitations). Every site
//! of such a state carries the same reduced density matrix, so one
//! [`ReducedQubit`] describes them all.

use num_complex::Complex64;

use crate::error::{PhaseError, Result};

/// Tolerance on Σ|a_k|² − 1 for an already-normalized amplitude vector.
pub const NORM_TOL: f64 = 1e-12;
/// Bloch length below which a qubit density matrix is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// A normalized superposition of Dicke states, Σ_k a_k |N,k⟩.
#[derive(Debug, Clone)]
pub struct DickeSuperposition {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl DickeSuperposition {
    /// Builds from N and the N+1 amplitudes a_0..a_N; requires Σ|a_k|² = 1
    /// within [`NORM_TOL`].
    pub fn new(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(PhaseError::OutOfRange("n_qubits must be positive".into()));
        }
        if amps.len() != n_qubits + 1 {
            return Err(PhaseError::PreconditionViolated(format!(
                "expected {} amplitudes for N = {}, got {}",
                n_qubits + 1,
                n_qubits,
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(PhaseError::PreconditionViolated(format!(
                "amplitudes not normalized: Σ|a_k|² = {norm_sq}"
            )));
        }
        Ok(DickeSuperposition { n_qubits, amps })
    }

    /// Builds after rescaling the amplitudes to unit norm.
    pub fn normalized(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(PhaseError::PreconditionViolated(
                "cannot normalize an all-zero amplitude vector".into(),
            ));
        }
        let scale = norm_sq.sqrt().recip();
        for a in &mut amps {
            *a *= scale;
        }
        DickeSuperposition::new(n_qubits, amps)
    }

    /// The single Dicke state |N,k⟩ (a_k = 1).
    pub fn single_dicke(n_qubits: usize, k: usize) -> Result<Self> {
        if k > n_qubits {
            return Err(PhaseError::IndexOutOfRange {
                index: k,
                max: n_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_qubits + 1];
        amps[k] = Complex64::new(1.0, 0.0);
        DickeSuperposition::new(n_qubits, amps)
    }

    /// The two-term S state √((1+r)/2)|0…0⟩ + √((1−r)/2)|1…1⟩.
    pub fn s_state(r: f64, n_qubits: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(PhaseError::OutOfRange(format!("r = {r} not in [0, 1]")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_qubits + 1];
        amps[0] = Complex64::new((0.5 * (1.0 + r)).sqrt(), 0.0);
        amps[n_qubits] = Complex64::new((0.5 * (1.0 - r)).sqrt(), 0.0);
        DickeSuperposition::new(n_qubits, amps)
    }

    /// The product state (cos β|0⟩ + sin β|1⟩)^⊗N expanded in the Dicke
    /// basis: a_k = √C(N,k) cos^{N−k}β sin^k β.
    pub fn binomial_product(beta: f64, n_qubits: usize) -> Result<Self> {
        let (c, s) = (beta.cos(), beta.sin());
        let amps = (0..=n_qubits)
            .map(|k| {
                let coeff = crate::closed_form::binomial(n_qubits, k).sqrt()
                    * c.powi((n_qubits - k) as i32)
                    * s.powi(k as i32);
                Complex64::new(coeff, 0.0)
            })
            .collect();
        DickeSuperposition::normalized(n_qubits, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// |a_k|² weights.
    pub fn weights(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// The reduced density matrix of any one site (identical for every site
    /// of a symmetric state):
    ///
    /// ρ00 = Σ_k |a_k|² (N−k)/N,  ρ11 = Σ_k |a_k|² k/N,
    /// ρ01 = ⟨0|ρ|1⟩ = Σ_{k=1}^N a_{k−1} a_k^* √(k(N−k+1))/N.
    pub fn reduced_qubit(&self) -> ReducedQubit {
        let n = self.n_qubits as f64;
        let mut rho00 = 0.0;
        let mut rho11 = 0.0;
        let mut rho01 = Complex64::new(0.0, 0.0);
        for (k, a) in self.amps.iter().enumerate() {
            let w = a.norm_sqr();
            rho00 += w * (n - k as f64) / n;
            rho11 += w * k as f64 / n;
            if k >= 1 {
                let coupling = (k as f64 * (n - k as f64 + 1.0)).sqrt() / n;
                rho01 += self.amps[k - 1] * a.conj() * coupling;
            }
        }
        ReducedQubit::new(rho00, rho11, rho01)
            .expect("reduced state of a normalized symmetric state is always valid")
    }

    /// Σ_k |a_k|² (N−2k)/N = ρ00 − ρ11 = r·cosθ of the reduced state.
    pub fn bloch_z(&self) -> f64 {
        let n = self.n_qubits as f64;
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm_sqr() * (n - 2.0 * k as f64) / n)
            .sum()
    }
}

/// A single-qubit density matrix in the |0⟩,|1⟩ basis.
///
/// `rho01` is the ⟨0|ρ|1⟩ matrix element.
#[derive(Debug, Clone, Copy)]
pub struct ReducedQubit {
    rho00: f64,
    rho11: f64,
    rho01: Complex64,
}

impl ReducedQubit {
    pub fn new(rho00: f64, rho11: f64, rho01: Complex64) -> Result<Self> {
        if !(-NORM_TOL..=1.0 + NORM_TOL).contains(&rho00)
            || !(-NORM_TOL..=1.0 + NORM_TOL).contains(&rho11)
        {
            return Err(PhaseError::OutOfRange(format!(
                "diagonal entries ({rho00}, {rho11}) outside [0, 1]"
            )));
        }
        if (rho00 + rho11 - 1.0).abs() > NORM_TOL {
            return Err(PhaseError::PreconditionViolated(format!(
                "trace = {} != 1",
                rho00 + rho11
            )));
        }
        let rq = ReducedQubit {
            rho00,
            rho11,
            rho01,
        };
        if rq.bloch_r() > 1.0 + NORM_TOL {
            return Err(PhaseError::OutOfRange(format!(
                "Bloch length {} exceeds 1",
                rq.bloch_r()
            )));
        }
        Ok(rq)
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }

    /// Bloch vector length r = √((ρ00−ρ11)² + 4|ρ01|²).
    pub fn bloch_r(&self) -> f64 {
        let dz = self.rho00 - self.rho11;
        (dz * dz + 4.0 * self.rho01.norm_sqr()).sqrt()
    }

    /// z-component r·cosθ = ρ00 − ρ11.
    pub fn bloch_z(&self) -> f64 {
        self.rho00 - self.rho11
    }

    /// True when the spectrum is too close to degenerate for the
    /// eigenbasis-dependent formulas.
    pub fn is_degenerate(&self) -> bool {
        self.bloch_r() < DEGENERACY_TOL
    }

    /// Eigendecomposition in Bloch form.
    ///
    /// Eigenvalues are (1±r)/2 with eigenvectors
    /// |φ₁⟩ = e^{−iφ/2}cos(θ/2)|0⟩ + e^{iφ/2}sin(θ/2)|1⟩ and its orthogonal
    /// complement. When ρ01 = 0 exactly, θ ∈ {0, π} with the tie broken so
    /// the dominant eigenvector is |0⟩ when ρ00 ≥ ρ11. Fails with
    /// `DegenerateSpectrum` when r < 1e-9.
    pub fn eigen2(&self) -> Result<Eigen2> {
        let r = self.bloch_r();
        if r < DEGENERACY_TOL {
            return Err(PhaseError::DegenerateSpectrum { r });
        }
        let off = 2.0 * self.rho01.norm();
        let theta = off.atan2(self.rho00 - self.rho11);
        let phi = if self.rho01.norm() < crate::angle::ZERO_MAG_THRESHOLD {
            0.0
        } else {
            // ⟨0|ρ|1⟩ = (r sinθ / 2) e^{−iφ}
            -self.rho01.arg()
        };
        let (half_cos, half_sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let em = Complex64::from_polar(1.0, -phi / 2.0);
        let ep = Complex64::from_polar(1.0, phi / 2.0);
        let v1 = [em * half_cos, ep * half_sin];
        let v2 = [-em * half_sin, ep * half_cos];
        Ok(Eigen2 {
            r,
            theta,
            phi,
            eigenvalues: [(1.0 + r) / 2.0, (1.0 - r) / 2.0],
            eigenvectors: [v1, v2],
        })
    }

    /// Dense 2x2 matrix form, row-major.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.rho00, 0.0), self.rho01],
            [self.rho01.conj(), Complex64::new(self.rho11, 0.0)],
        ]
    }
}

/// Result of [`ReducedQubit::eigen2`].
#[derive(Debug, Clone)]
pub struct Eigen2 {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    /// [(1+r)/2, (1−r)/2]
    pub eigenvalues: [f64; 2],
    /// [|φ₁⟩, |φ₂⟩] as (⟨0|φ⟩, ⟨1|φ⟩) pairs.
    pub eigenvectors: [[Complex64; 2]; 2],
}

/// End-of-loop data of a family of local unitaries: per-site pure-state
/// phases γ_n and visibilities c_n from c_n e^{iγ_n} = ⟨0|U_n(T)|0⟩.
#[derive(Debug, Clone)]
pub struct LocalLoop {
    gammas: Vec<f64>,
    visibilities: Vec<f64>,
    cyclic: bool,
}

/// Visibility tolerance: a loop may claim cyclicity only if every c_n is 1
/// within this.
pub const CYCLIC_TOL: f64 = 1e-9;

impl LocalLoop {
    pub fn new(gammas: Vec<f64>, visibilities: Vec<f64>, cyclic: bool) -> Result<Self> {
        if gammas.len() != visibilities.len() {
            return Err(PhaseError::PreconditionViolated(format!(
                "{} phases vs {} visibilities",
                gammas.len(),
                visibilities.len()
            )));
        }
        if let Some(c) = visibilities.iter().find(|c| !(0.0..=1.0 + 1e-12).contains(*c)) {
            return Err(PhaseError::OutOfRange(format!("visibility {c} not in [0, 1]")));
        }
        if cyclic {
            if let Some(c) = visibilities.iter().find(|c| (1.0 - **c).abs() > CYCLIC_TOL) {
                return Err(PhaseError::PreconditionViolated(format!(
                    "cyclic loop requires c_n = 1, got {c}"
                )));
            }
        }
        Ok(LocalLoop {
            gammas,
            visibilities,
            cyclic,
        })
    }

    /// A cyclic loop with per-site phases and unit visibilities.
    pub fn cyclic(gammas: Vec<f64>) -> Self {
        let n = gammas.len();
        LocalLoop {
            gammas,
            visibilities: vec![1.0; n],
            cyclic: true,
        }
    }

    /// A cyclic loop with the same phase at every one of `n` sites.
    pub fn cyclic_uniform(gamma: f64, n: usize) -> Self {
        LocalLoop::cyclic(vec![gamma; n])
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn visibilities(&self) -> &[f64] {
        &self.visibilities
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn n_sites(&self) -> usize {
        self.gammas.len()
    }
}
