//! Time-sampled families of local unitaries and their construction.
//!
//! Paths are integrated by composing exact 2×2 exponentials of the midpoint
//! generator, one per step (globally second order in the step count).
//! Parallel-transported paths are integrated in the co-moving frame
//! (U̇ = −i U K), where the stronger transport conditions make K strictly
//! off-diagonal in the subsystem eigenbasis; every discrete step then
//! satisfies the conditions exactly at the generator level, while the
//! endpoint keeps an honest O(h²) integration error for convergence studies.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PhaseError, Result};
use crate::state::{DickeSuperposition, LocalLoop, CYCLIC_TOL};

use super::mat2::Mat2;

/// An orthonormal basis pair for one site, as (⟨0|φ⟩, ⟨1|φ⟩) rows.
pub type SiteBasis = [[Complex64; 2]; 2];

/// The computational basis |0⟩, |1⟩.
pub fn computational_basis() -> SiteBasis {
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]
}

/// Quality metrics of a sampled path against the stronger parallel-transport
/// conditions.
#[derive(Debug, Clone, Copy)]
pub struct PTReport {
    /// Largest |⟨φ_i|U_n†U̇_n|φ_i⟩| over eigenvectors, sites, and times,
    /// with the derivative estimated by 4th-order finite differences.
    pub max_violation: f64,
    /// Largest deviation of |⟨0|U_n(T)|0⟩| from 1 over sites.
    pub cyclic_defect: f64,
}

/// A family of per-site 2×2 unitaries sampled at uniform times, with
/// U_n(0) = 1.
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    duration: f64,
    /// samples[site][j] = U_site(t_j), j = 0..=n_steps.
    samples: Vec<Vec<Mat2>>,
}

impl UnitaryPath {
    pub fn from_samples(duration: f64, samples: Vec<Vec<Mat2>>) -> Result<Self> {
        if samples.is_empty() || samples[0].len() < 2 {
            return Err(PhaseError::PreconditionViolated(
                "path needs at least one site and one step".into(),
            ));
        }
        let len = samples[0].len();
        if samples.iter().any(|s| s.len() != len) {
            return Err(PhaseError::PreconditionViolated(
                "sites sampled at different resolutions".into(),
            ));
        }
        Ok(UnitaryPath { duration, samples })
    }

    pub fn n_sites(&self) -> usize {
        self.samples.len()
    }

    pub fn n_steps(&self) -> usize {
        self.samples[0].len() - 1
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn time_step(&self) -> f64 {
        self.duration / self.n_steps() as f64
    }

    pub fn site_samples(&self, site: usize) -> &[Mat2] {
        &self.samples[site]
    }

    pub fn final_unitary(&self, site: usize) -> Mat2 {
        *self.samples[site].last().unwrap()
    }

    pub fn final_unitaries(&self) -> Vec<Mat2> {
        (0..self.n_sites()).map(|s| self.final_unitary(s)).collect()
    }

    /// Checks U_n(0) = 1 exactly and unitarity of every sample to 1e-10.
    pub fn validate(&self) -> Result<()> {
        for (site, samples) in self.samples.iter().enumerate() {
            if samples[0] != Mat2::identity() {
                return Err(PhaseError::PreconditionViolated(format!(
                    "site {site} does not start at the identity"
                )));
            }
            for (j, u) in samples.iter().enumerate() {
                let defect = u.unitarity_defect();
                if defect > 1e-10 {
                    return Err(PhaseError::PreconditionViolated(format!(
                        "site {site} sample {j} has unitarity defect {defect:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// max over sites of | |⟨0|U_n(T)|0⟩| − 1 |.
    pub fn cyclic_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.last().unwrap().e[0][0].norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// End-of-loop data: per-site phases γ_n and visibilities c_n from
    /// ⟨0|U_n(T)|0⟩, with the cyclic flag set iff every c_n is 1 within
    /// tolerance.
    pub fn local_loop(&self) -> Result<LocalLoop> {
        let mut gammas = Vec::with_capacity(self.n_sites());
        let mut cs = Vec::with_capacity(self.n_sites());
        for s in &self.samples {
            let z = s.last().unwrap().e[0][0];
            gammas.push(z.arg());
            cs.push(z.norm().min(1.0));
        }
        let cyclic = cs.iter().all(|c| (1.0 - c).abs() <= CYCLIC_TOL);
        LocalLoop::new(gammas, cs, cyclic)
    }

    /// Measures the stronger parallel-transport conditions against the given
    /// per-site bases.
    ///
    /// The violation at each step is the two-point finite-difference
    /// estimate |Im⟨φ_i|U(t_j)†U(t_{j+1})|φ_i⟩|/h of |⟨φ_i|U†U̇|φ_i⟩| at the
    /// step midpoint (exact for paths built from off-diagonal step
    /// generators, O(h²)-accurate otherwise).
    pub fn pt_report(&self, bases: &[SiteBasis]) -> Result<PTReport> {
        if bases.len() != self.n_sites() {
            return Err(PhaseError::PreconditionViolated(format!(
                "{} bases for {} sites",
                bases.len(),
                self.n_sites()
            )));
        }
        let n = self.n_steps();
        let h = self.time_step();
        let mut worst: f64 = 0.0;
        for (site, samples) in self.samples.iter().enumerate() {
            for j in 0..n {
                let step = samples[j].adjoint() * samples[j + 1];
                for vec in &bases[site] {
                    worst = worst.max(quad_form(&step, vec).im.abs() / h);
                }
            }
        }
        Ok(PTReport {
            max_violation: worst,
            cyclic_defect: self.cyclic_defect(),
        })
    }
}

/// ⟨v|M|v⟩.
pub(crate) fn quad_form(m: &Mat2, v: &[Complex64; 2]) -> Complex64 {
    let (a, b) = m.apply(v[0], v[1]);
    v[0].conj() * a + v[1].conj() * b
}

/// |v⟩⟨v| as a matrix.
fn projector(v: &[Complex64; 2]) -> Mat2 {
    Mat2::new(
        v[0] * v[0].conj(),
        v[0] * v[1].conj(),
        v[1] * v[0].conj(),
        v[1] * v[1].conj(),
    )
}

/// Minimum steps accepted by the path constructors.
pub const MIN_PATH_STEPS: usize = 1000;

/// Pure-state phase accumulated by |0⟩ along the tilted-axis
/// parallel-transport loop: γ(α) = π(1 + cos α), modulo 2π.
pub fn pt_gamma(alpha: f64) -> f64 {
    PI * (1.0 + alpha.cos())
}

/// Co-moving generator of the tilted-axis parallel-transport loop:
/// K(t) = (ω sinα/2)(cos(ω cosα·t)·σ_x + sin(ω cosα·t)·σ_y), ω = 2π/T.
///
/// Strictly off-diagonal at all times, so both |0⟩ and |1⟩ satisfy the
/// stronger transport conditions exactly; the loop closes on the
/// computational rays at t = T with phase γ(α).
fn pt_generator(alpha: f64, t: f64, omega: f64) -> Mat2 {
    let amp = 0.5 * omega * alpha.sin();
    let phase = omega * alpha.cos() * t;
    Mat2::from_pauli(0.0, [amp * phase.cos(), amp * phase.sin(), 0.0])
}

/// Builds the parallel-transported loop U_n(t) = exp(−iωt n̂_α·σ/2)
/// exp(+iω cosα_n t σ_z/2) per site by co-moving CF4 integration over T = 1.
///
/// Valid as a parallel transport only for states whose single-site
/// eigenvectors are |0⟩, |1⟩ (ρ01 = 0); see [`pt_path_z_for_state`] for the
/// checked variant.
pub fn pt_path_z(alphas: &[f64], n_steps: usize) -> Result<UnitaryPath> {
    if alphas.is_empty() {
        return Err(PhaseError::PreconditionViolated("no sites".into()));
    }
    if n_steps < MIN_PATH_STEPS {
        return Err(PhaseError::PreconditionViolated(format!(
            "n_steps = {n_steps} below minimum {MIN_PATH_STEPS}"
        )));
    }
    let duration = 1.0;
    let omega = 2.0 * PI / duration;
    let samples = alphas
        .iter()
        .map(|&alpha| {
            integrate_comoving(
                |t| pt_generator(alpha, t, omega),
                n_steps,
                duration,
                true,
            )
        })
        .collect();
    UnitaryPath::from_samples(duration, samples)
}

/// [`pt_path_z`] with the precondition check that the state's reduced
/// density matrix is diagonal (ρ01 = 0 within 1e-10).
pub fn pt_path_z_for_state(
    state: &DickeSuperposition,
    alphas: &[f64],
    n_steps: usize,
) -> Result<UnitaryPath> {
    let off = state.reduced_qubit().rho01().norm();
    if off > 1e-10 {
        return Err(PhaseError::PreconditionViolated(format!(
            "pt_path_z requires rho01 = 0 per site, got |rho01| = {off:.3e}"
        )));
    }
    if alphas.len() != state.n_qubits() {
        return Err(PhaseError::PreconditionViolated(format!(
            "{} tilt angles for {} sites",
            alphas.len(),
            state.n_qubits()
        )));
    }
    pt_path_z(alphas, n_steps)
}

/// Endpoint U_n(T) of the tilted-axis loop without storing samples.
pub fn pt_final_unitary(alpha: f64, n_steps: usize) -> Mat2 {
    let duration = 1.0;
    let omega = 2.0 * PI / duration;
    integrate_comoving_final(|t| pt_generator(alpha, t, omega), n_steps, duration)
}

/// Exponential-midpoint integration of U̇ = −i U K(t); returns all samples.
///
/// Each step multiplies by exp(−i h K(t_{j+1/2})) on the right, so any
/// structure of K in a fixed basis (here: vanishing diagonal) is inherited
/// exactly by the discrete step generators.
fn integrate_comoving(
    k_of_t: impl Fn(f64) -> Mat2,
    n_steps: usize,
    duration: f64,
    keep: bool,
) -> Vec<Mat2> {
    let h = duration / n_steps as f64;
    let mut u = Mat2::identity();
    let mut out = Vec::with_capacity(if keep { n_steps + 1 } else { 1 });
    out.push(u);
    for j in 0..n_steps {
        let tm = (j as f64 + 0.5) * h;
        u = u * Mat2::exp_minus_i_h(&k_of_t(tm), h);
        if keep {
            out.push(u);
        }
    }
    if !keep {
        out[0] = u;
    }
    out
}

fn integrate_comoving_final(
    k_of_t: impl Fn(f64) -> Mat2,
    n_steps: usize,
    duration: f64,
) -> Mat2 {
    integrate_comoving(k_of_t, n_steps, duration, false)[0]
}

/// Exponential-midpoint integration of U̇ = −i H(t) U; returns all samples.
fn integrate_lab(h_of_t: impl Fn(f64) -> Mat2, n_steps: usize, duration: f64) -> Vec<Mat2> {
    let h = duration / n_steps as f64;
    let mut u = Mat2::identity();
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(u);
    for j in 0..n_steps {
        let tm = (j as f64 + 0.5) * h;
        u = Mat2::exp_minus_i_h(&h_of_t(tm), h) * u;
        out.push(u);
    }
    out
}

/// A smooth single-site Hamiltonian H(t) = b⃗(t)·σ/2 with one Fourier mode:
/// b⃗(t) = c₀ + c_cos·cos(2πt/T) + c_sin·sin(2πt/T).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FourierHamiltonian {
    pub c0: [f64; 3],
    pub c_cos: [f64; 3],
    pub c_sin: [f64; 3],
}

impl FourierHamiltonian {
    pub fn matrix(&self, t: f64, duration: f64) -> Mat2 {
        let w = 2.0 * PI * t / duration;
        let (cw, sw) = (w.cos(), w.sin());
        let b = [
            0.5 * (self.c0[0] + self.c_cos[0] * cw + self.c_sin[0] * sw),
            0.5 * (self.c0[1] + self.c_cos[1] * cw + self.c_sin[1] * sw),
            0.5 * (self.c0[2] + self.c_cos[2] * cw + self.c_sin[2] * sw),
        ];
        Mat2::from_pauli(0.0, b)
    }

    /// Random coefficients with each vector component in [−scale, scale].
    pub fn random(rng: &mut impl Rng, scale: f64) -> Self {
        let mut draw = || {
            [
                rng.gen_range(-scale..scale),
                rng.gen_range(-scale..scale),
                rng.gen_range(-scale..scale),
            ]
        };
        FourierHamiltonian {
            c0: draw(),
            c_cos: draw(),
            c_sin: draw(),
        }
    }
}

/// Integrates per-site Hamiltonians into a sampled path over T = 1.
pub fn hamiltonian_path(hams: &[FourierHamiltonian], n_steps: usize) -> Result<UnitaryPath> {
    if hams.is_empty() {
        return Err(PhaseError::PreconditionViolated("no sites".into()));
    }
    if n_steps < MIN_PATH_STEPS {
        return Err(PhaseError::PreconditionViolated(format!(
            "n_steps = {n_steps} below minimum {MIN_PATH_STEPS}"
        )));
    }
    let duration = 1.0;
    let samples = hams
        .iter()
        .map(|ham| integrate_lab(|t| ham.matrix(t, duration), n_steps, duration))
        .collect();
    UnitaryPath::from_samples(duration, samples)
}

/// Gauge-corrects a path so every basis vector satisfies the stronger
/// parallel-transport conditions: per step, the co-moving generator loses
/// its diagonal part in the fixed per-site basis,
/// K → K − Σ_i |φ_i⟩⟨φ_i|K|φ_i⟩⟨φ_i|, and the path is rebuilt from the
/// projected generators.
///
/// Idempotent on already-transported paths; cyclicity of the input is not
/// preserved in general.
pub fn enforce_pt(path: &UnitaryPath, bases: &[SiteBasis]) -> Result<UnitaryPath> {
    if bases.len() != path.n_sites() {
        return Err(PhaseError::PreconditionViolated(format!(
            "{} bases for {} sites",
            bases.len(),
            path.n_sites()
        )));
    }
    let n = path.n_steps();
    let h = path.time_step();
    let mut corrected = Vec::with_capacity(path.n_sites());
    for (site, samples) in path.samples.iter().enumerate() {
        let projectors: Vec<(Mat2, [Complex64; 2])> = bases[site]
            .iter()
            .map(|v| (projector(v), *v))
            .collect();
        let mut out = Vec::with_capacity(n + 1);
        let mut u = samples[0];
        out.push(u);
        for j in 0..n {
            let k = Mat2::step_generator(&samples[j], &samples[j + 1], h);
            let mut stripped = k;
            for (p, v) in &projectors {
                let d = quad_form(&k, v).re;
                stripped = stripped - p.scale(Complex64::new(d, 0.0));
            }
            u = u * Mat2::exp_minus_i_h(&stripped, h);
            out.push(u);
        }
        corrected.push(out);
    }
    UnitaryPath::from_samples(path.duration, corrected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{circle_distance, wrap_principal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pt_path_endpoint_phases() {
        // α = π/2: equatorial loop, γ = π
        let path = pt_path_z(&[PI / 2.0], 2000).unwrap();
        let z = path.final_unitary(0).e[0][0];
        assert!(circle_distance(z.arg(), PI) < 1e-9, "{}", z.arg());

        // α = 0: identity path, γ ≡ 0 (mod 2π)
        let path = pt_path_z(&[0.0], 2000).unwrap();
        let z = path.final_unitary(0).e[0][0];
        assert!(circle_distance(z.arg(), 0.0) < 1e-12);

        // α = π/3: γ = 3π/2 ≡ −π/2
        let path = pt_path_z(&[PI / 3.0], 20_000).unwrap();
        let z = path.final_unitary(0).e[0][0];
        assert!(circle_distance(z.arg(), -PI / 2.0) < 1e-6);
        assert!(circle_distance(z.arg(), wrap_principal(pt_gamma(PI / 3.0))) < 1e-8);
    }

    #[test]
    fn pt_path_is_cyclic_and_transported() {
        let path = pt_path_z(&[0.4, 1.1, 2.3], 20_000).unwrap();
        path.validate().unwrap();
        assert!(path.cyclic_defect() < 1e-9);
        let bases = vec![computational_basis(); 3];
        let rep = path.pt_report(&bases).unwrap();
        assert!(rep.max_violation < 1e-8, "violation {}", rep.max_violation);
        let lp = path.local_loop().unwrap();
        assert!(lp.is_cyclic());
        for (i, &alpha) in [0.4, 1.1, 2.3].iter().enumerate() {
            assert!(circle_distance(lp.gammas()[i], pt_gamma(alpha)) < 1e-8);
        }
    }

    #[test]
    fn pt_path_requires_diagonal_reduced_state() {
        let plus = DickeSuperposition::binomial_product(0.6, 3).unwrap();
        assert!(matches!(
            pt_path_z_for_state(&plus, &[0.3; 3], 2000),
            Err(PhaseError::PreconditionViolated(_))
        ));
        let w = DickeSuperposition::single_dicke(3, 1).unwrap();
        assert!(pt_path_z_for_state(&w, &[0.3; 3], 2000).is_ok());
    }

    #[test]
    fn pt_final_matches_sampled_endpoint() {
        let path = pt_path_z(&[0.77], 4000).unwrap();
        let direct = pt_final_unitary(0.77, 4000);
        let d = path.final_unitary(0) - direct;
        let worst = d.e.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-13);
    }

    #[test]
    fn enforce_pt_is_idempotent_on_transported_paths() {
        let path = pt_path_z(&[0.9, 1.7], 2000).unwrap();
        let bases = vec![computational_basis(); 2];
        let again = enforce_pt(&path, &bases).unwrap();
        for site in 0..2 {
            for (a, b) in path.site_samples(site).iter().zip(again.site_samples(site)) {
                let d = *a - *b;
                let worst = d.e.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(worst < 1e-10);
            }
        }
    }

    #[test]
    fn enforce_pt_kills_pure_z_precession() {
        // exp(−iωtσ_z/2) has a fully diagonal generator; the projected path
        // is the identity at all times
        let n = 2000;
        let ham = FourierHamiltonian {
            c0: [0.0, 0.0, 2.0 * PI],
            c_cos: [0.0; 3],
            c_sin: [0.0; 3],
        };
        let path = hamiltonian_path(&[ham], n).unwrap();
        let fixed = enforce_pt(&path, &[computational_basis()]).unwrap();
        for u in fixed.site_samples(0) {
            let d = *u - Mat2::identity();
            let worst = d.e.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-10);
        }
    }

    #[test]
    fn enforce_pt_corrects_random_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let hams: Vec<FourierHamiltonian> = (0..4)
            .map(|_| FourierHamiltonian::random(&mut rng, PI / 3.0_f64.sqrt()))
            .collect();
        let path = hamiltonian_path(&hams, 20_000).unwrap();
        let bases = vec![computational_basis(); 4];
        let fixed = enforce_pt(&path, &bases).unwrap();
        fixed.validate().unwrap();
        let rep = fixed.pt_report(&bases).unwrap();
        assert!(rep.max_violation < 1e-8, "violation {}", rep.max_violation);
    }

    #[test]
    fn hamiltonian_path_converges_to_constant_field_solution() {
        let ham = FourierHamiltonian {
            c0: [0.0, 0.0, 3.0],
            c_cos: [0.0; 3],
            c_sin: [0.0; 3],
        };
        let path = hamiltonian_path(&[ham], 2000).unwrap();
        // exact: exp(−i·1.5·T·σ_z)
        let expect = Mat2::exp_minus_i_h(&Mat2::from_pauli(0.0, [0.0, 0.0, 1.5]), 1.0);
        let d = path.final_unitary(0) - expect;
        let worst = d.e.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12);
    }

    #[test]
    fn step_count_floor_is_enforced() {
        assert!(matches!(
            pt_path_z(&[0.3], 10),
            Err(PhaseError::PreconditionViolated(_))
        ));
    }
}
