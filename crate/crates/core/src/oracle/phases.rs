//! Phase integrals over sampled paths: dynamical phases by quadrature and
//! the Pancharatnam total phase from the final loop unitaries.

use num_complex::Complex64;

use crate::angle::{principal_arg, Angle};
use crate::error::{PhaseError, Result};
use crate::state::DEGENERACY_TOL;

use super::mat2::Mat2;
use super::path::UnitaryPath;
use super::state::{apply_site_unchecked, StateVector};
use super::stencil::{stencil_at, trapezoid};

/// Overlap modulus below which the total phase is undefined.
pub const OVERLAP_TOL: f64 = 1e-10;
/// Allowed disagreement between full- and half-resolution phase integrals.
pub const RICHARDSON_TOL: f64 = 1e-6;

/// Composite and per-site dynamical phases of one evolution.
///
/// Both are returned so additivity can be checked rather than assumed.
#[derive(Debug, Clone)]
pub struct DynamicalPhases {
    /// Δ = −i∫₀ᵀ tr[ρ 𝒰†𝒰̇] dt.
    pub composite: f64,
    /// δ_n = −i∫₀ᵀ tr[ρ_n U_n†U̇_n] dt.
    pub per_site: Vec<f64>,
}

impl DynamicalPhases {
    /// |Δ − Σ_n δ_n|.
    pub fn additivity_defect(&self) -> f64 {
        (self.composite - self.per_site.iter().sum::<f64>()).abs()
    }
}

/// Integrates the dynamical phases of `psi0` along `path`.
///
/// The composite integrand tr[ρ𝒰†𝒰̇] = ⟨ψ(t)|ψ̇(t)⟩ is evaluated from dense
/// statevector samples, the per-site integrands from the initial reduced
/// states and the per-site 2×2 samples; both use the same five-point
/// derivative stencils and trapezoidal quadrature. A half-resolution
/// re-evaluation guards against under-sampling.
pub fn dynamical_phase(psi0: &StateVector, path: &UnitaryPath) -> Result<DynamicalPhases> {
    let n_sites = path.n_sites();
    if n_sites != psi0.n_qubits() {
        return Err(PhaseError::PreconditionViolated(format!(
            "path has {n_sites} sites, state has {}",
            psi0.n_qubits()
        )));
    }
    let n = path.n_steps();
    if n < 24 || !n.is_multiple_of(2) {
        return Err(PhaseError::PreconditionViolated(format!(
            "dynamical phase integration needs an even step count ≥ 24, got {n}"
        )));
    }
    let h = path.time_step();

    let (full, half) = composite_integrands(psi0, path)?;
    let composite = trapezoid(h, &full);
    let composite_half = trapezoid(2.0 * h, &half);
    let disagreement = (composite - composite_half).abs();
    if disagreement > RICHARDSON_TOL {
        return Err(PhaseError::GridTooCoarse {
            disagreement,
            tolerance: RICHARDSON_TOL,
        });
    }

    let mut per_site = Vec::with_capacity(n_sites);
    for site in 0..n_sites {
        let rho = psi0.partial_trace_single(site)?.matrix();
        let samples = path.site_samples(site);
        let f = site_integrand(&rho, samples, h, 1);
        let g = site_integrand(&rho, samples, 2.0 * h, 2);
        let delta = trapezoid(h, &f);
        let delta_half = trapezoid(2.0 * h, &g);
        let disagreement = (delta - delta_half).abs();
        if disagreement > RICHARDSON_TOL {
            return Err(PhaseError::GridTooCoarse {
                disagreement,
                tolerance: RICHARDSON_TOL,
            });
        }
        per_site.push(delta);
    }

    Ok(DynamicalPhases {
        composite,
        per_site,
    })
}

/// Im⟨ψ_j|ψ̇_j⟩ on the full grid and on the stride-2 subgrid, in one sweep
/// with a ring buffer of nine statevectors.
fn composite_integrands(psi0: &StateVector, path: &UnitaryPath) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = path.n_steps();
    let n_sites = path.n_sites();
    let h = path.time_step();
    let dim = psi0.amplitudes().len();

    // d[m][i] = ⟨ψ_i|ψ_{i+m}⟩ for the offsets the stencils consume; the
    // odd/long offsets are only needed near the boundaries.
    let mut dots: [Vec<Complex64>; 8] =
        std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n + 1]);
    let edge = |i: usize| i <= 8 || i + 8 >= n;

    let mut ring: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); dim]; 9];
    for j in 0..=n {
        let slot = j % 9;
        {
            let psi = &mut ring[slot];
            psi.copy_from_slice(psi0.amplitudes());
            for site in 0..n_sites {
                apply_site_unchecked(psi, n_sites, site, &path.site_samples(site)[j]);
            }
            let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
            if (norm.sqrt() - 1.0).abs() > super::state::STATE_NORM_TOL {
                return Err(PhaseError::PreconditionViolated(format!(
                    "propagated state norm drifted to {} at step {j}",
                    norm.sqrt()
                )));
            }
        }
        for m in 1..=8usize {
            if m > j {
                break;
            }
            let i = j - m;
            let needed = matches!(m, 1 | 2 | 4) || edge(i);
            if !needed {
                continue;
            }
            let a = &ring[i % 9];
            let b = &ring[slot];
            dots[m - 1][i] = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        }
    }

    let dot_at = |i: usize, offset: isize| -> Complex64 {
        if offset == 0 {
            return Complex64::new(0.0, 0.0); // Im⟨ψ|ψ⟩ = 0
        }
        if offset > 0 {
            dots[offset as usize - 1][i]
        } else {
            let m = (-offset) as usize;
            dots[m - 1][i - m].conj()
        }
    };

    let full: Vec<f64> = (0..=n)
        .map(|j| {
            let (coeffs, first) = stencil_at(j, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &c) in coeffs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                acc += dot_at(j, first + idx as isize) * c;
            }
            acc.im / (12.0 * h)
        })
        .collect();

    let nh = n / 2;
    let half: Vec<f64> = (0..=nh)
        .map(|jj| {
            let (coeffs, first) = stencil_at(jj, nh);
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &c) in coeffs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                acc += dot_at(2 * jj, 2 * (first + idx as isize)) * c;
            }
            acc.im / (12.0 * 2.0 * h)
        })
        .collect();

    Ok((full, half))
}

/// Im tr[ρ U_j† U̇_j] over the sampled site path at the given stride.
fn site_integrand(rho: &[[Complex64; 2]; 2], samples: &[Mat2], h: f64, stride: usize) -> Vec<f64> {
    let n = (samples.len() - 1) / stride;
    (0..=n)
        .map(|j| {
            let (coeffs, first) = stencil_at(j, n);
            let mut d = Mat2::zero();
            for (idx, &c) in coeffs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let jj = ((j as isize + first + idx as isize) as usize) * stride;
                d = d + samples[jj].scale(Complex64::new(c, 0.0));
            }
            let m = samples[j * stride].adjoint() * d;
            let tr = rho[0][0] * m.e[0][0]
                + rho[0][1] * m.e[1][0]
                + rho[1][0] * m.e[0][1]
                + rho[1][1] * m.e[1][1];
            tr.im / (12.0 * h)
        })
        .collect()
}

/// Pancharatnam total phase arg⟨Ψ(0)|𝒰(T)|Ψ(0)⟩, with 𝒰(T) given by its
/// per-site 2×2 factors (never materialized as a 2^N matrix).
pub fn total_phase(psi0: &StateVector, site_finals: &[Mat2]) -> Result<Angle> {
    if site_finals.len() != psi0.n_qubits() {
        return Err(PhaseError::PreconditionViolated(format!(
            "{} site unitaries for {} qubits",
            site_finals.len(),
            psi0.n_qubits()
        )));
    }
    let mut evolved = psi0.amplitudes().to_vec();
    for (site, u) in site_finals.iter().enumerate() {
        apply_site_unchecked(&mut evolved, psi0.n_qubits(), site, u);
    }
    let overlap: Complex64 = psi0
        .amplitudes()
        .iter()
        .zip(&evolved)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let magnitude = overlap.norm();
    if magnitude < OVERLAP_TOL {
        return Err(PhaseError::ZeroMagnitude { magnitude });
    }
    principal_arg(overlap)
}

/// Mixed-state geometric phase of one subsystem, arg tr[ρ_n U_n(T)], from
/// the numerically propagated site unitary.
///
/// Meaningful only when the path is parallel-transported with respect to the
/// site's initial eigenvectors.
pub fn subsystem_gp_oracle(psi0: &StateVector, path: &UnitaryPath, site: usize) -> Result<Angle> {
    let rho = psi0.partial_trace_single(site)?;
    let r = rho.bloch_r();
    if r < DEGENERACY_TOL {
        return Err(PhaseError::DegenerateSubsystem { r });
    }
    let u = path.final_unitary(site);
    let m = rho.matrix();
    let tr = m[0][0] * u.e[0][0]
        + m[0][1] * u.e[1][0]
        + m[1][0] * u.e[0][1]
        + m[1][1] * u.e[1][1];
    let magnitude = tr.norm();
    if magnitude < OVERLAP_TOL {
        return Err(PhaseError::ZeroMagnitude { magnitude });
    }
    principal_arg(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::circle_distance;
    use crate::closed_form::{composite_gp, s_state_subsystem_gp, w_state_subsystem_gp};
    use crate::angle::BranchMode;
    use crate::oracle::path::{
        computational_basis, enforce_pt, hamiltonian_path, pt_gamma, pt_path_z,
        FourierHamiltonian,
    };
    use crate::state::DickeSuperposition;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn single_qubit_precession_phase() {
        // |0⟩ under exp(−iωtσ_z/2) with ωT = 2π: δ = −ωT/2 = −π
        let ham = FourierHamiltonian {
            c0: [0.0, 0.0, 2.0 * PI],
            c_cos: [0.0; 3],
            c_sin: [0.0; 3],
        };
        let path = hamiltonian_path(&[ham], 2000).unwrap();
        let psi0 = StateVector::dicke(1, 0).unwrap();
        let d = dynamical_phase(&psi0, &path).unwrap();
        assert!((d.composite + PI).abs() < 1e-8, "Δ = {}", d.composite);
        assert!((d.per_site[0] + PI).abs() < 1e-8);
    }

    #[test]
    fn parallel_transported_paths_carry_no_dynamical_phase() {
        let st = DickeSuperposition::s_state(0.55, 4).unwrap();
        let psi0 = StateVector::from_superposition(&st).unwrap();
        let path = pt_path_z(&[0.3, 0.9, 1.4, 2.0], 20_000).unwrap();
        let d = dynamical_phase(&psi0, &path).unwrap();
        assert!(d.composite.abs() < 1e-8, "Δ = {}", d.composite);
        for delta in &d.per_site {
            assert!(delta.abs() < 1e-8);
        }
    }

    #[test]
    fn additivity_holds_for_random_entangled_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=6usize {
            let psi0 = random_state(n, &mut rng);
            let hams: Vec<FourierHamiltonian> = (0..n)
                .map(|_| FourierHamiltonian::random(&mut rng, PI / 3.0f64.sqrt()))
                .collect();
            let path = hamiltonian_path(&hams, 4000).unwrap();
            let d = dynamical_phase(&psi0, &path).unwrap();
            assert!(
                d.additivity_defect() < 1e-8,
                "N={n}: defect {}",
                d.additivity_defect()
            );
        }
    }

    #[test]
    fn corrected_paths_transport_every_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 3;
        let st = DickeSuperposition::normalized(
            n,
            (0..=n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap();
        let eig = st.reduced_qubit().eigen2().unwrap();
        let bases = vec![eig.eigenvectors; n];
        let hams: Vec<FourierHamiltonian> = (0..n)
            .map(|_| FourierHamiltonian::random(&mut rng, 1.0))
            .collect();
        let fixed = enforce_pt(&hamiltonian_path(&hams, 20_000).unwrap(), &bases).unwrap();
        let psi0 = StateVector::from_superposition(&st).unwrap();
        let d = dynamical_phase(&psi0, &fixed).unwrap();
        assert!(d.composite.abs() < 1e-8, "Δ = {}", d.composite);
        assert!(d.additivity_defect() < 1e-8);
    }

    #[test]
    fn total_phase_identity_is_zero() {
        let psi0 = StateVector::dicke(3, 1).unwrap();
        let finals = vec![Mat2::identity(); 3];
        assert_eq!(total_phase(&psi0, &finals).unwrap().value(), 0.0);
    }

    #[test]
    fn total_phase_matches_dicke_line() {
        let alpha = 1.1f64;
        let gamma = pt_gamma(alpha);
        let path = pt_path_z(&[alpha; 3], 20_000).unwrap();
        let psi0 = StateVector::dicke(3, 1).unwrap();
        let got = total_phase(&psi0, &path.final_unitaries()).unwrap().value();
        let expect = (3.0 - 2.0) * gamma;
        assert!(circle_distance(got, expect) < 1e-6, "{got} vs {expect}");
    }

    #[test]
    fn total_phase_line_holds_for_nonsymmetric_one_excitation_states() {
        // (2|001⟩ + |010⟩ − |100⟩)/√6
        let mut amps = vec![c(0.0, 0.0); 8];
        let s6 = 6.0f64.sqrt();
        amps[0b001] = c(2.0 / s6, 0.0);
        amps[0b010] = c(1.0 / s6, 0.0);
        amps[0b100] = c(-1.0 / s6, 0.0);
        let psi0 = StateVector::from_amplitudes(3, amps).unwrap();
        let alpha = 0.8f64;
        let path = pt_path_z(&[alpha; 3], 20_000).unwrap();
        let got = total_phase(&psi0, &path.final_unitaries()).unwrap().value();
        let expect = (3.0 - 2.0) * pt_gamma(alpha);
        assert!(circle_distance(got, expect) < 1e-6);
    }

    #[test]
    fn total_phase_agrees_with_composite_formula() {
        // ρ01 = 0 superposition: support {0, 2, 5} at N = 5
        let mut amps = vec![c(0.0, 0.0); 6];
        amps[0] = c(0.6, 0.2);
        amps[2] = c(-0.3, 0.5);
        amps[5] = c(0.4, -0.1);
        let st = DickeSuperposition::normalized(5, amps).unwrap();
        let alphas = [0.4, 0.9, 1.3, 1.9, 2.4];
        let path = crate::oracle::path::pt_path_z_for_state(&st, &alphas, 20_000).unwrap();
        let lp = path.local_loop().unwrap();
        let formula = composite_gp(&st, &lp, BranchMode::Principal).unwrap().value();
        let psi0 = StateVector::from_superposition(&st).unwrap();
        let oracle = total_phase(&psi0, &path.final_unitaries()).unwrap().value();
        assert!(
            circle_distance(formula, oracle) < 1e-8,
            "{formula} vs {oracle}"
        );
    }

    #[test]
    fn subsystem_oracle_matches_closed_forms() {
        // S state
        let st = DickeSuperposition::s_state(0.6, 3).unwrap();
        let psi0 = StateVector::from_superposition(&st).unwrap();
        let alpha = 1.2f64;
        let path = pt_path_z(&[alpha; 3], 20_000).unwrap();
        let gamma = pt_gamma(alpha);
        for site in 0..3 {
            let got = subsystem_gp_oracle(&psi0, &path, site).unwrap().value();
            let expect = s_state_subsystem_gp(0.6, gamma, BranchMode::Principal)
                .unwrap()
                .value();
            assert!(circle_distance(got, expect) < 1e-6, "{got} vs {expect}");
        }

        // W state N = 3, k = 1
        let psi0 = StateVector::dicke(3, 1).unwrap();
        for site in 0..3 {
            let got = subsystem_gp_oracle(&psi0, &path, site).unwrap().value();
            let expect = w_state_subsystem_gp(3, 1.0, gamma, BranchMode::Principal)
                .unwrap()
                .value();
            assert!(circle_distance(got, expect) < 1e-6);
        }

        // separable |0…0⟩: γ^M = γ
        let psi0 = StateVector::dicke(3, 0).unwrap();
        let got = subsystem_gp_oracle(&psi0, &path, 0).unwrap().value();
        assert!(circle_distance(got, gamma) < 1e-9);
    }

    #[test]
    fn subsystem_oracle_rejects_degenerate_sites() {
        let psi0 = StateVector::dicke(4, 2).unwrap();
        let path = pt_path_z(&[0.5; 4], 2000).unwrap();
        assert!(matches!(
            subsystem_gp_oracle(&psi0, &path, 0),
            Err(PhaseError::DegenerateSubsystem { .. })
        ));
    }

    #[test]
    fn gauge_invariance_under_eigvec_rephasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 3;
        let hams: Vec<FourierHamiltonian> = (0..n)
            .map(|_| FourierHamiltonian::random(&mut rng, 1.0))
            .collect();
        let path = hamiltonian_path(&hams, 4000).unwrap();
        let base = computational_basis();
        let mut rephased = base;
        for (i, phase) in [(0usize, 0.83), (1usize, -2.1)] {
            for comp in &mut rephased[i] {
                *comp *= Complex64::from_polar(1.0, phase);
            }
        }
        let psi0 = random_state(n, &mut rng);
        let a = enforce_pt(&path, &vec![base; n]).unwrap();
        let b = enforce_pt(&path, &vec![rephased; n]).unwrap();
        let pa = total_phase(&psi0, &a.final_unitaries()).unwrap().value();
        let pb = total_phase(&psi0, &b.final_unitaries()).unwrap().value();
        assert!((pa - pb).abs() < 1e-9);
    }

    #[test]
    fn grid_too_coarse_is_detected() {
        // 26 steps over a 2π rotation: full and half resolutions disagree
        let ham = FourierHamiltonian {
            c0: [4.0 * PI, 0.0, 3.0 * PI],
            c_cos: [2.0 * PI, 0.0, 0.0],
            c_sin: [0.0, 5.0 * PI, 0.0],
        };
        let h = 1.0 / 26.0;
        let samples: Vec<Mat2> = {
            // build a deliberately under-resolved path by sampling a fine one
            let fine = hamiltonian_path(&[ham], 2600).unwrap();
            (0..=26).map(|j| fine.site_samples(0)[j * 100]).collect()
        };
        let _ = h;
        let path = UnitaryPath::from_samples(1.0, vec![samples]).unwrap();
        let psi0 = StateVector::dicke(1, 0).unwrap();
        match dynamical_phase(&psi0, &path) {
            Err(PhaseError::GridTooCoarse { .. }) => {}
            other => panic!("expected GridTooCoarse, got {other:?}"),
        }
    }
}
