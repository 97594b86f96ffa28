//! Dense statevector representation of N-qubit states.
//!
//! Basis index bit (N−1−site) holds the computational value of `site`, so
//! index bits read left to right as the ket string |q_0 q_1 … q_{N−1}⟩.

use num_complex::Complex64;

use crate::closed_form::binomial;
use crate::error::{PhaseError, Result};
use crate::state::{DickeSuperposition, ReducedQubit};

use super::mat2::Mat2;

/// Default cap on statevector width (2^14 amplitudes).
pub const DEFAULT_QUBIT_CAP: usize = 14;
/// Norm drift allowed after any operation.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// A dense, unit-norm N-qubit state.
#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The Dicke state |N,k⟩: amplitude 1/√C(N,k) on every basis string of
    /// Hamming weight k.
    pub fn dicke(n_qubits: usize, k: usize) -> Result<Self> {
        StateVector::dicke_capped(n_qubits, k, DEFAULT_QUBIT_CAP)
    }

    /// [`StateVector::dicke`] with an explicit qubit cap.
    pub fn dicke_capped(n_qubits: usize, k: usize, cap: usize) -> Result<Self> {
        check_cap(n_qubits, cap)?;
        if k > n_qubits {
            return Err(PhaseError::IndexOutOfRange {
                index: k,
                max: n_qubits,
            });
        }
        let amp = Complex64::new(binomial(n_qubits, k).sqrt().recip(), 0.0);
        let amps = (0..1usize << n_qubits)
            .map(|b| {
                if b.count_ones() as usize == k {
                    amp
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(StateVector { n_qubits, amps })
    }

    /// Σ_k a_k |N,k⟩ as a dense vector.
    pub fn from_superposition(state: &DickeSuperposition) -> Result<Self> {
        StateVector::from_superposition_capped(state, DEFAULT_QUBIT_CAP)
    }

    pub fn from_superposition_capped(state: &DickeSuperposition, cap: usize) -> Result<Self> {
        let n = state.n_qubits();
        check_cap(n, cap)?;
        let scaled: Vec<Complex64> = state
            .amps()
            .iter()
            .enumerate()
            .map(|(k, a)| a / binomial(n, k).sqrt())
            .collect();
        let amps = (0..1usize << n)
            .map(|b| scaled[b.count_ones() as usize])
            .collect();
        let sv = StateVector { n_qubits: n, amps };
        sv.check_norm()?;
        Ok(sv)
    }

    /// Builds from raw amplitudes; must have length 2^N and unit norm within
    /// [`STATE_NORM_TOL`].
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(PhaseError::PreconditionViolated(format!(
                "expected {} amplitudes, got {}",
                1usize << n_qubits,
                amps.len()
            )));
        }
        let sv = StateVector { n_qubits, amps };
        sv.check_norm()?;
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn check_norm(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(PhaseError::PreconditionViolated(format!(
                "state norm drifted to {n}"
            )));
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies a 2×2 unitary to one site, in place.
    pub fn apply_site(&mut self, site: usize, u: &Mat2) -> Result<()> {
        if site >= self.n_qubits {
            return Err(PhaseError::IndexOutOfRange {
                index: site,
                max: self.n_qubits - 1,
            });
        }
        apply_site_unchecked(&mut self.amps, self.n_qubits, site, u);
        Ok(())
    }

    /// Reduced density matrix of `site`, by summation over the complementary
    /// index space.
    pub fn partial_trace_single(&self, site: usize) -> Result<ReducedQubit> {
        if site >= self.n_qubits {
            return Err(PhaseError::IndexOutOfRange {
                index: site,
                max: self.n_qubits - 1,
            });
        }
        let stride = 1usize << (self.n_qubits - 1 - site);
        let mut rho00 = 0.0;
        let mut rho11 = 0.0;
        let mut rho01 = Complex64::new(0.0, 0.0);
        for base in 0..self.amps.len() {
            if base & stride != 0 {
                continue;
            }
            let a0 = self.amps[base];
            let a1 = self.amps[base | stride];
            rho00 += a0.norm_sqr();
            rho11 += a1.norm_sqr();
            rho01 += a0 * a1.conj();
        }
        ReducedQubit::new(rho00, rho11, rho01)
    }
}

pub(crate) fn apply_site_unchecked(
    amps: &mut [Complex64],
    n_qubits: usize,
    site: usize,
    u: &Mat2,
) {
    let stride = 1usize << (n_qubits - 1 - site);
    let (u00, u01, u10, u11) = (u.e[0][0], u.e[0][1], u.e[1][0], u.e[1][1]);
    let mut base = 0usize;
    while base < amps.len() {
        for i in base..base + stride {
            let a = amps[i];
            let b = amps[i + stride];
            amps[i] = u00 * a + u01 * b;
            amps[i + stride] = u10 * a + u11 * b;
        }
        base += 2 * stride;
    }
}

fn check_cap(n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(PhaseError::OutOfRange("n_qubits must be positive".into()));
    }
    if n_qubits > cap {
        return Err(PhaseError::TooLarge {
            size: n_qubits as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}
