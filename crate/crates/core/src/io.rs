//! State input files.
//!
//! A state file is a JSON document with an integer `n` and an array of N+1
//! `[re, im]` amplitude pairs:
//!
//! ```json
//! { "n": 3, "amps": [[0.8944, 0.0], [0.0, 0.0], [0.0, 0.4472], [0.0, 0.0]] }
//! ```
//!
//! The loader renormalizes amplitudes whose squared norm deviates from 1 by
//! at most 1e-6 and rejects anything farther off.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::DickeSuperposition;

/// Largest |Σ|a_k|² − 1| the loader will silently repair.
pub const LOAD_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read state file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse state file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("state file invalid: {0}")]
    Invalid(String),
}

/// Serialized form of a Dicke superposition.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amps: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &DickeSuperposition) -> Self {
        StateFile {
            n: state.n_qubits(),
            amps: state.amps().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<DickeSuperposition, LoadError> {
        if self.amps.len() != self.n + 1 {
            return Err(LoadError::Invalid(format!(
                "expected {} amplitudes for n = {}, found {}",
                self.n + 1,
                self.n,
                self.amps.len()
            )));
        }
        let amps: Vec<Complex64> = self
            .amps
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > LOAD_NORM_TOL {
            return Err(LoadError::Invalid(format!(
                "Σ|a_k|² = {norm_sq} deviates from 1 by more than {LOAD_NORM_TOL}"
            )));
        }
        DickeSuperposition::normalized(self.n, amps)
            .map_err(|e| LoadError::Invalid(e.to_string()))
    }
}

/// Loads a state file from disk.
pub fn load_state(path: &Path) -> Result<DickeSuperposition, LoadError> {
    let text = fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    file.into_state()
}

/// Writes a state file to disk.
pub fn save_state(path: &Path, state: &DickeSuperposition) -> Result<(), LoadError> {
    let file = StateFile::from_state(state);
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}
