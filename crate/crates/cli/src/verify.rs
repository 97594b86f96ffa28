//! Oracle-vs-formula verification suites.
//!
//! Each mode draws a deterministic ensemble from a seed, evaluates one
//! quantity two independent ways, and records per-case inputs, both values,
//! and the absolute error. Cases run in parallel; the report order is fixed
//! by case index.

use std::fmt::Write as _;

use gphase_core::angle::circle_distance;
use gphase_core::closed_form::{composite_gp, esp_eval, multiset_perm_sum};
use gphase_core::error::{PhaseError, Result};
use gphase_core::oracle::{
    dynamical_phase, enforce_pt, hamiltonian_path, pt_final_unitary, pt_gamma, total_phase,
    FourierHamiltonian, StateVector, DEFAULT_QUBIT_CAP,
};
use gphase_core::{BranchMode, DickeSuperposition, LocalLoop};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Verification suites driven by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Composite-phase closed form vs dense propagation on cyclic
    /// parallel-transported loops (diagonal reduced states).
    Cyclic,
    /// Gauge-corrected arbitrary paths: transport quality, vanishing
    /// dynamical phase, additivity.
    Generic,
    /// Dynamical-phase additivity on random states and local paths.
    Additivity,
    /// Elementary-symmetric-polynomial route vs sign-row enumeration.
    Esp,
}

impl VerifyMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cyclic" => Some(VerifyMode::Cyclic),
            "generic" => Some(VerifyMode::Generic),
            "additivity" => Some(VerifyMode::Additivity),
            "esp" => Some(VerifyMode::Esp),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            VerifyMode::Cyclic => "cyclic",
            VerifyMode::Generic => "generic",
            VerifyMode::Additivity => "additivity",
            VerifyMode::Esp => "esp",
        }
    }

    /// Default tolerance per suite.
    pub fn default_tol(&self) -> f64 {
        match self {
            VerifyMode::Cyclic => 1e-6,
            VerifyMode::Generic => 1e-8,
            VerifyMode::Additivity => 1e-8,
            VerifyMode::Esp => 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub mode: VerifyMode,
    pub n: usize,
    pub seed: u64,
    pub steps: usize,
    pub tol: f64,
    pub cases: usize,
    pub cap: usize,
}

impl VerifyConfig {
    pub fn new(mode: VerifyMode, n: usize) -> Self {
        VerifyConfig {
            mode,
            n,
            seed: 42,
            steps: 20_000,
            tol: mode.default_tol(),
            cases: 100,
            cap: DEFAULT_QUBIT_CAP,
        }
    }
}

/// One verified case.
#[derive(Debug, Clone)]
pub struct CaseRecord {
    pub inputs: String,
    pub formula: f64,
    pub oracle: f64,
    pub error: f64,
    pub pass: bool,
}

/// Suite outcome.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub config: VerifyConfig,
    pub records: Vec<CaseRecord>,
}

impl VerifyOutcome {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    pub fn max_error(&self) -> f64 {
        self.records.iter().map(|r| r.error).fold(0.0, f64::max)
    }

    /// `PASS n=<cases>` or `FAIL n=<violations>`.
    pub fn summary_line(&self) -> String {
        if self.passed() {
            format!("PASS n={}", self.records.len())
        } else {
            format!("FAIL n={}", self.violations())
        }
    }

    /// Structured text report: one record per case plus the summary line.
    pub fn report_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        writeln!(out, "mode: {}", c.mode.label()).unwrap();
        writeln!(out, "n: {}", c.n).unwrap();
        writeln!(out, "seed: {}", c.seed).unwrap();
        writeln!(out, "steps: {}", c.steps).unwrap();
        writeln!(out, "tol: {:.1e}", c.tol).unwrap();
        writeln!(out, "cases: {}", c.cases).unwrap();
        for (i, r) in self.records.iter().enumerate() {
            writeln!(
                out,
                "case {i}: {} formula={:.16e} oracle={:.16e} abs_error={:.3e} {}",
                r.inputs,
                r.formula,
                r.oracle,
                r.error,
                if r.pass { "ok" } else { "VIOLATION" }
            )
            .unwrap();
        }
        writeln!(out, "{}", self.summary_line()).unwrap();
        out
    }
}

/// Runs one verification suite.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyOutcome> {
    if config.cases == 0 {
        return Err(PhaseError::OutOfRange("cases must be positive".into()));
    }
    let records = match config.mode {
        VerifyMode::Esp => esp_suite(config),
        VerifyMode::Additivity => additivity_suite(config)?,
        VerifyMode::Cyclic => cyclic_suite(config)?,
        VerifyMode::Generic => generic_suite(config)?,
    };
    Ok(VerifyOutcome {
        config: config.clone(),
        records,
    })
}

/// Random amplitudes with no adjacent nonzero entries (ρ01 = 0), avoiding
/// composite trace magnitudes too small for a stable phase comparison.
pub fn rho01_free_state(n: usize, rng: &mut impl Rng) -> DickeSuperposition {
    loop {
        let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut any = false;
        let mut k = 0;
        while k <= n {
            if rng.gen_bool(0.5) {
                amps[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                any = true;
                k += 2;
            } else {
                k += 1;
            }
        }
        if !any {
            continue;
        }
        if let Ok(st) = DickeSuperposition::normalized(n, amps) {
            return st;
        }
    }
}

/// Random Dicke superposition with a non-degenerate reduced state.
pub fn random_superposition(n: usize, rng: &mut impl Rng) -> DickeSuperposition {
    loop {
        let amps: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(st) = DickeSuperposition::normalized(n, amps) {
            if !st.reduced_qubit().is_degenerate() {
                return st;
            }
        }
    }
}

/// Random dense state (not necessarily symmetric).
pub fn random_dense_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(n, amps).expect("normalized by construction")
}

/// Per-site Hamiltonian scale used by the random-path ensembles: components
/// bounded so ‖b⃗‖ stays near π, keeping finite-step transport artifacts
/// well under the suite tolerances.
pub const RANDOM_FIELD_SCALE: f64 = 1.813; // π/√3

fn esp_suite(config: &VerifyConfig) -> Vec<CaseRecord> {
    let n_max = config.n.min(12);
    let per_pair = config.cases;
    let mut jobs = Vec::new();
    for n in 2..=n_max {
        for k in 0..=n {
            for case in 0..per_pair {
                jobs.push((n, k, case));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(n, k, case)| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(config.seed ^ hash3(n as u64, k as u64, case as u64));
            let gammas: Vec<f64> = (0..n).map(|_| rng.gen_range(-PI..PI)).collect();
            let brute = multiset_perm_sum(&gammas, k).expect("guarded sizes");
            let twists: Vec<Complex64> = gammas
                .iter()
                .map(|g| Complex64::from_polar(1.0, -2.0 * g))
                .collect();
            let total: f64 = gammas.iter().sum();
            let smart = esp_eval(&twists, k).expect("k <= n") * Complex64::from_polar(1.0, total);
            let error = (brute - smart).norm();
            CaseRecord {
                inputs: format!("n={n} k={k} case={case}"),
                formula: smart.re,
                oracle: brute.re,
                error,
                pass: error <= config.tol,
            }
        })
        .collect()
}

fn additivity_suite(config: &VerifyConfig) -> Result<Vec<CaseRecord>> {
    check_sim_size(config)?;
    let records: Vec<CaseRecord> = (0..config.cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ hash3(1, config.n as u64, case as u64));
            let psi0 = random_dense_state(config.n, &mut rng);
            let hams: Vec<FourierHamiltonian> = (0..config.n)
                .map(|_| FourierHamiltonian::random(&mut rng, RANDOM_FIELD_SCALE))
                .collect();
            let path = hamiltonian_path(&hams, config.steps)?;
            let d = dynamical_phase(&psi0, &path)?;
            let error = d.additivity_defect();
            Ok(CaseRecord {
                inputs: format!("case={case} n={}", config.n),
                formula: d.per_site.iter().sum(),
                oracle: d.composite,
                error,
                pass: error <= config.tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(records)
}

fn cyclic_suite(config: &VerifyConfig) -> Result<Vec<CaseRecord>> {
    check_sim_size(config)?;
    let records: Vec<CaseRecord> = (0..config.cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ hash3(2, config.n as u64, case as u64));
            // resample until the composite trace is well-conditioned
            let (state, alphas, formula) = loop {
                let state = rho01_free_state(config.n, &mut rng);
                let alphas: Vec<f64> =
                    (0..config.n).map(|_| rng.gen_range(0.1..PI - 0.1)).collect();
                let gammas: Vec<f64> = alphas.iter().map(|&a| pt_gamma(a)).collect();
                let z = gphase_core::closed_form::composite_trace(&state, &gammas)?;
                if z.norm() < 0.05 {
                    continue;
                }
                let lp = LocalLoop::cyclic(gammas);
                let formula = composite_gp(&state, &lp, BranchMode::Principal)?.value();
                break (state, alphas, formula);
            };
            let psi0 = StateVector::from_superposition_capped(&state, config.cap)?;
            let finals: Vec<_> = alphas
                .iter()
                .map(|&a| pt_final_unitary(a, config.steps))
                .collect();
            let oracle = total_phase(&psi0, &finals)?.value();
            let error = circle_distance(formula, oracle);
            Ok(CaseRecord {
                inputs: format!("case={case} n={}", config.n),
                formula,
                oracle,
                error,
                pass: error <= config.tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(records)
}

fn generic_suite(config: &VerifyConfig) -> Result<Vec<CaseRecord>> {
    check_sim_size(config)?;
    let records: Vec<CaseRecord> = (0..config.cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ hash3(3, config.n as u64, case as u64));
            let state = random_superposition(config.n, &mut rng);
            let eig = state.reduced_qubit().eigen2()?;
            let bases = vec![eig.eigenvectors; config.n];
            let hams: Vec<FourierHamiltonian> = (0..config.n)
                .map(|_| FourierHamiltonian::random(&mut rng, RANDOM_FIELD_SCALE))
                .collect();
            let raw = hamiltonian_path(&hams, config.steps)?;
            let path = enforce_pt(&raw, &bases)?;
            let report = path.pt_report(&bases)?;
            let psi0 = StateVector::from_superposition_capped(&state, config.cap)?;
            let d = dynamical_phase(&psi0, &path)?;
            // transported paths must carry no dynamical phase, additively
            let error = report
                .max_violation
                .max(d.composite.abs())
                .max(d.additivity_defect());
            Ok(CaseRecord {
                inputs: format!(
                    "case={case} n={} violation={:.3e} delta={:.3e}",
                    config.n, report.max_violation, d.composite
                ),
                formula: 0.0,
                oracle: d.composite,
                error,
                pass: error <= config.tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(records)
}

fn check_sim_size(config: &VerifyConfig) -> Result<()> {
    if config.n == 0 {
        return Err(PhaseError::OutOfRange("n must be positive".into()));
    }
    if config.n > config.cap {
        return Err(PhaseError::TooLarge {
            size: config.n as u128,
            cap: config.cap as u128,
        });
    }
    if config.steps < gphase_core::oracle::MIN_PATH_STEPS {
        return Err(PhaseError::PreconditionViolated(format!(
            "steps = {} below minimum {}",
            config.steps,
            gphase_core::oracle::MIN_PATH_STEPS
        )));
    }
    Ok(())
}

fn hash3(a: u64, b: u64, c: u64) -> u64 {
    // splitmix-style mixing for stable per-case seeds
    let mut x = a
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(b)
        .wrapping_mul(0xbf58_476d_1ce4_e5b9)
        .wrapping_add(c);
    x ^= x >> 30;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
