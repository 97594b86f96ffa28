//! Closed forms for composite and subsystem geometric phases of Dicke
//! superpositions under cyclic local loops.
//!
//! The composite phase is
//!
//! Γ = arg{ Σ_k (|a_k|²/C(N,k)) Σ_m exp(i Σ_n A^k_{mn} γ_n) },
//!
//! where the rows of the sign matrix A^k run over all placements of k minus
//! signs among N sites. The m-sum is evaluated through its elementary
//! symmetric polynomial reduction,
//!
//! Σ_m exp(i Σ_n A^k_{mn} γ_n) = e^{iΣ_nγ_n} · e_k(e^{−2iγ_1}, …, e^{−2iγ_N}),
//!
//! which costs O(N²) for all k at once; direct enumeration of the sign rows
//! is kept as an independent reference implementation.

use num_complex::Complex64;

use crate::angle::{
    ellipse_arg_principal, ellipse_arg_unwrapped, principal_arg, unwrap_sequence, Angle,
    BranchMode,
};
use crate::error::{PhaseError, Result};
use crate::report::PhaseReport;
use crate::state::{DickeSuperposition, LocalLoop, DEGENERACY_TOL};

/// |trace| below this is treated as a phase-jump point for the composite.
pub const COMPOSITE_ZERO_TOL: f64 = 1e-12;
/// Default cap on the number of enumerated sign rows.
pub const ENUMERATION_CAP: u128 = 10_000_000;
/// Enumeration guard on qubit count; masks are held in a u32.
pub const ENUMERATION_MAX_QUBITS: usize = 20;

/// Binomial coefficient C(n, k) as f64 (exact through n = 64).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 64 {
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as f64
    } else {
        let mut acc = 1.0f64;
        for i in 0..k {
            acc *= (n - i) as f64 / (i + 1) as f64;
        }
        acc
    }
}

/// ln C(n, k) for real k via the log-Gamma function (continuous in k).
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// The sign matrix A^k: C(N,k) ordered rows of ±1, each with N−k entries +1
/// and k entries −1, enumerated lazily in lexicographic order (+1 before −1).
#[derive(Debug, Clone, Copy)]
pub struct SignPattern {
    n_qubits: usize,
    k: usize,
}

impl SignPattern {
    pub fn new(n_qubits: usize, k: usize) -> Result<Self> {
        if k > n_qubits {
            return Err(PhaseError::IndexOutOfRange {
                index: k,
                max: n_qubits,
            });
        }
        if n_qubits > ENUMERATION_MAX_QUBITS {
            return Err(PhaseError::TooLarge {
                size: n_qubits as u128,
                cap: ENUMERATION_MAX_QUBITS as u128,
            });
        }
        Ok(SignPattern { n_qubits, k })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row_count(&self) -> u128 {
        binomial(self.n_qubits, self.k) as u128
    }

    /// Iterator over the rows as ±1 vectors.
    pub fn rows(&self) -> SignRows {
        SignRows {
            pattern: *self,
            mask: (1u32 << self.k) - 1,
            remaining: self.row_count(),
        }
    }

    /// Bit masks of the −1 positions (bit j ↔ site N−1−j), in the same
    /// lexicographic order as [`Self::rows`].
    fn masks(&self) -> SignMasks {
        SignMasks {
            mask: (1u32 << self.k) - 1,
            remaining: self.row_count(),
        }
    }
}

/// Lazy row iterator for [`SignPattern`].
pub struct SignRows {
    pattern: SignPattern,
    mask: u32,
    remaining: u128,
}

impl Iterator for SignRows {
    type Item = Vec<i8>;

    fn next(&mut self) -> Option<Vec<i8>> {
        if self.remaining == 0 {
            return None;
        }
        let n = self.pattern.n_qubits;
        let row = (0..n)
            .map(|site| {
                if self.mask >> (n - 1 - site) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        self.remaining -= 1;
        self.mask = next_same_popcount(self.mask);
        Some(row)
    }
}

struct SignMasks {
    mask: u32,
    remaining: u128,
}

impl Iterator for SignMasks {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        let m = self.mask;
        self.remaining -= 1;
        self.mask = next_same_popcount(self.mask);
        Some(m)
    }
}

/// Gosper's hack: next larger integer with the same popcount.
fn next_same_popcount(v: u32) -> u32 {
    if v == 0 {
        return 0;
    }
    let u = v & v.wrapping_neg();
    let w = v.wrapping_add(u);
    if w == 0 {
        return 0;
    }
    w | (((v ^ w) / u) >> 2)
}

/// k-th elementary symmetric polynomial of `values`, by the iterative
/// product recurrence in O(N·k) operations; e_0 = 1.
pub fn esp_eval(values: &[Complex64], k: usize) -> Result<Complex64> {
    if k > values.len() {
        return Err(PhaseError::IndexOutOfRange {
            index: k,
            max: values.len(),
        });
    }
    let mut e = vec![Complex64::new(0.0, 0.0); k + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, &x) in values.iter().enumerate() {
        let top = k.min(i + 1);
        for j in (1..=top).rev() {
            let prev = e[j - 1];
            e[j] += x * prev;
        }
    }
    Ok(e[k])
}

/// All elementary symmetric polynomials e_0..e_N of `values` in one O(N²)
/// pass.
pub fn esp_all(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, &x) in values.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] = e[j] + x * e[j - 1];
        }
    }
    e
}

/// Reference implementation of the m-sum in the composite phase formula:
/// Σ over all C(N,k) sign rows of exp(i Σ_n A^k_{mn} γ_n), by direct
/// enumeration.
pub fn multiset_perm_sum(gammas: &[f64], k: usize) -> Result<Complex64> {
    let n = gammas.len();
    let pattern = SignPattern::new(n, k)?;
    let rows = pattern.row_count();
    if rows > ENUMERATION_CAP {
        return Err(PhaseError::TooLarge {
            size: rows,
            cap: ENUMERATION_CAP,
        });
    }
    let total: f64 = gammas.iter().sum();
    let mut acc = Complex64::new(0.0, 0.0);
    for mask in pattern.masks() {
        let mut minus = 0.0;
        let mut bits = mask;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            minus += gammas[n - 1 - j];
            bits &= bits - 1;
        }
        acc += Complex64::from_polar(1.0, total - 2.0 * minus);
    }
    Ok(acc)
}

/// The complex quantity inside the composite arg:
/// Σ_k (|a_k|²/C(N,k)) e^{iΣγ} e_k(e^{−2iγ_1}, …, e^{−2iγ_N}).
pub fn composite_trace(state: &DickeSuperposition, gammas: &[f64]) -> Result<Complex64> {
    let n = state.n_qubits();
    if gammas.len() != n {
        return Err(PhaseError::PreconditionViolated(format!(
            "{} phases for {} sites",
            gammas.len(),
            n
        )));
    }
    let twists: Vec<Complex64> = gammas
        .iter()
        .map(|g| Complex64::from_polar(1.0, -2.0 * g))
        .collect();
    let e = esp_all(&twists);
    let mut z = Complex64::new(0.0, 0.0);
    for (k, a) in state.amps().iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        z += e[k] * (w / binomial(n, k));
    }
    let total: f64 = gammas.iter().sum();
    Ok(z * Complex64::from_polar(1.0, total))
}

/// Composite geometric phase Γ of `state` under a cyclic local loop.
///
/// Principal mode evaluates arg of [`composite_trace`] directly. Unwrapped
/// mode lifts the phase continuously along the scaled loop s·γ⃗, s ∈ [0, 1],
/// anchored at 0, refining the sample grid until the lift is stable.
pub fn composite_gp(
    state: &DickeSuperposition,
    local_loop: &LocalLoop,
    mode: BranchMode,
) -> Result<Angle> {
    if !local_loop.is_cyclic() {
        return Err(PhaseError::NonCyclicLoop);
    }
    if local_loop.n_sites() != state.n_qubits() {
        return Err(PhaseError::PreconditionViolated(format!(
            "loop has {} sites, state has {}",
            local_loop.n_sites(),
            state.n_qubits()
        )));
    }
    let gammas = local_loop.gammas();
    match mode {
        BranchMode::Principal => {
            let z = composite_trace(state, gammas)?;
            let magnitude = z.norm();
            if magnitude <= COMPOSITE_ZERO_TOL {
                return Err(PhaseError::ZeroMagnitude { magnitude });
            }
            principal_arg(z)
        }
        BranchMode::Unwrapped => composite_gp_lift(state, gammas),
    }
}

/// Continuous lift of Γ along s ↦ s·γ⃗ with doubling refinement.
fn composite_gp_lift(state: &DickeSuperposition, gammas: &[f64]) -> Result<Angle> {
    const LIFT_TOL: f64 = 1e-9;
    const MAX_SAMPLES: usize = 1 << 17;
    let rate: f64 = gammas.iter().map(|g| g.abs()).sum();
    let mut m = ((8.0 * rate).ceil() as usize).max(64);

    let eval = |m: usize| -> Result<f64> {
        let mut args = Vec::with_capacity(m + 1);
        let mut scaled = vec![0.0; gammas.len()];
        for j in 0..=m {
            let s = j as f64 / m as f64;
            for (dst, g) in scaled.iter_mut().zip(gammas) {
                *dst = s * g;
            }
            let z = composite_trace(state, &scaled)?;
            let magnitude = z.norm();
            if magnitude <= COMPOSITE_ZERO_TOL {
                return Err(PhaseError::ZeroMagnitude { magnitude });
            }
            args.push(z.im.atan2(z.re));
        }
        Ok(*unwrap_sequence(&args).last().unwrap())
    };

    let mut prev = eval(m)?;
    while m <= MAX_SAMPLES {
        m *= 2;
        let next = eval(m)?;
        if (next - prev).abs() <= LIFT_TOL {
            return Ok(Angle::unwrapped(next));
        }
        prev = next;
    }
    Err(PhaseError::GridTooCoarse {
        disagreement: prev.abs(),
        tolerance: LIFT_TOL,
    })
}

/// Subsystem geometric phase γ^M = arg{cos γ + i (r cosθ) sin γ} for a
/// symmetric state evolved with the same cyclic phase γ at every site.
///
/// Cross-checked in debug builds against the weighted-average form
/// arg{ρ00 e^{iγ} + ρ11 e^{−iγ}}; the two agree identically.
pub fn subsystem_gp(state: &DickeSuperposition, gamma: f64, mode: BranchMode) -> Result<Angle> {
    let rq = state.reduced_qubit();
    let r = rq.bloch_r();
    if r < DEGENERACY_TOL {
        return Err(PhaseError::DegenerateSubsystem { r });
    }
    let rz = rq.bloch_z();
    match mode {
        BranchMode::Principal => {
            let value = ellipse_arg_principal(gamma, rz)?;
            let weighted = Complex64::from_polar(rq.rho00(), gamma)
                + Complex64::from_polar(rq.rho11(), -gamma);
            debug_assert!(
                (weighted.im.atan2(weighted.re) - value).abs() < 1e-12,
                "arg form and weighted-average form disagree"
            );
            Ok(Angle::principal(value))
        }
        BranchMode::Unwrapped => Ok(Angle::unwrapped(ellipse_arg_unwrapped(gamma, rz))),
    }
}

/// S-state composite phase Γ = arg{(1+r)/2·e^{iNγ} + (1−r)/2·e^{−iNγ}}.
///
/// The unwrapped variant is the continuous-in-γ branch anchored at Γ(0) = 0.
pub fn s_state_gp(r: f64, n: usize, gamma: f64, mode: BranchMode) -> Result<Angle> {
    check_r(r)?;
    let u = n as f64 * gamma;
    match mode {
        BranchMode::Principal => Ok(Angle::principal(ellipse_arg_principal(u, r)?)),
        BranchMode::Unwrapped => Ok(Angle::unwrapped(ellipse_arg_unwrapped(u, r))),
    }
}

/// S-state subsystem phase γ^M = arg{cos γ + i r sin γ}.
pub fn s_state_subsystem_gp(r: f64, gamma: f64, mode: BranchMode) -> Result<Angle> {
    check_r(r)?;
    if r < DEGENERACY_TOL {
        return Err(PhaseError::DegenerateSubsystem { r });
    }
    match mode {
        BranchMode::Principal => Ok(Angle::principal(ellipse_arg_principal(gamma, r)?)),
        BranchMode::Unwrapped => Ok(Angle::unwrapped(ellipse_arg_unwrapped(gamma, r))),
    }
}

/// Dicke-state composite phase Γ = (N−2k)γ: an exact line in γ.
///
/// `k` may be non-integer; the continuous extension is used for smooth
/// entanglement sweeps.
pub fn w_state_gp(n: usize, k: f64, gamma: f64, mode: BranchMode) -> Angle {
    let line = (n as f64 - 2.0 * k) * gamma;
    Angle::with_mode(line, mode)
}

/// Dicke-state subsystem phase γ^M = arg{cos γ + i((N−2k)/N) sin γ}.
///
/// Invalid at N = 2k, where the reduced state is degenerate.
pub fn w_state_subsystem_gp(n: usize, k: f64, gamma: f64, mode: BranchMode) -> Result<Angle> {
    check_k(n, k)?;
    let b = (n as f64 - 2.0 * k) / n as f64;
    if b.abs() < DEGENERACY_TOL {
        return Err(PhaseError::DegenerateSubsystem { r: b.abs() });
    }
    match mode {
        BranchMode::Principal => Ok(Angle::principal(ellipse_arg_principal(gamma, b)?)),
        BranchMode::Unwrapped => Ok(Angle::unwrapped(ellipse_arg_unwrapped(gamma, b))),
    }
}

/// Composite, subsystem, and mutual geometric phases for `state` under a
/// cyclic local loop, as one report.
///
/// Δγ = Γ − Σ_n γ_n^M, with every field in the requested branch mode
/// (unwrapped lift anchored at 0 by default for reporting).
pub fn mutual_gp(
    state: &DickeSuperposition,
    local_loop: &LocalLoop,
    mode: BranchMode,
) -> Result<PhaseReport> {
    let composite = composite_gp(state, local_loop, mode)?;
    let subsystem: Result<Vec<Angle>> = local_loop
        .gammas()
        .iter()
        .map(|&g| subsystem_gp(state, g, mode))
        .collect();
    let subsystem = subsystem?;
    Ok(PhaseReport::from_phases(composite, subsystem))
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=1.0 + 1e-12).contains(&r) {
        return Err(PhaseError::OutOfRange(format!("r = {r} not in [0, 1]")));
    }
    Ok(())
}

fn check_k(n: usize, k: f64) -> Result<()> {
    if !(0.0..=n as f64).contains(&k) {
        return Err(PhaseError::OutOfRange(format!("k = {k} not in [0, {n}]")));
    }
    Ok(())
}
