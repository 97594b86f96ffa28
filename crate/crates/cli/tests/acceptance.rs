//! Acceptance suite: one test per shipping criterion, each run at its pinned
//! tolerance and printing a PASS line (run with `--nocapture` to see them).
//!
//! Timed criteria take a shared gate so wall-clock bounds are measured
//! without interference from sibling tests.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use gphase_cli::fig1::{self, SweepFamily, SweepSpec};
use gphase_cli::verify::{run_verify, VerifyConfig, VerifyMode, RANDOM_FIELD_SCALE};
use gphase_core::angle::circle_distance;
use gphase_core::closed_form::{
    composite_gp, mutual_gp, s_state_gp, w_state_gp, w_state_subsystem_gp,
};
use gphase_core::entanglement::{
    closest_separable_gp_s, closest_separable_gp_w, er_s_state, er_w_state,
    product_of_marginals_gp,
};
use gphase_core::oracle::{
    dynamical_phase, enforce_pt, hamiltonian_path, pt_gamma, pt_path_z, pt_path_z_for_state,
    total_phase, FourierHamiltonian, StateVector,
};
use gphase_core::{BranchMode, DickeSuperposition, LocalLoop};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

static GATE: Mutex<()> = Mutex::new(());

fn exclusive() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

#[test]
fn criterion_01_dynamical_additivity() {
    let _g = exclusive();
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=8usize {
        let mut cfg = VerifyConfig::new(VerifyMode::Additivity, n);
        cfg.cases = 100;
        cfg.steps = 20_000;
        cfg.tol = 1e-8;
        cfg.seed = 42;
        let out = run_verify(&cfg).expect("suite runs");
        assert!(
            out.passed(),
            "N={n}: {} violations, max |Δ−Σδ| = {:.3e}",
            out.violations(),
            out.max_error()
        );
        worst = worst.max(out.max_error());
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(60), "additivity suite took {dt:?}");
    println!(
        "criterion 01 dynamical additivity (700 cases, N=2..8, |Δ−Σδ| ≤ 1e-8, max {worst:.2e}): PASS in {dt:.1?}"
    );
}

#[test]
fn criterion_02_closed_form_vs_oracle() {
    let _g = exclusive();
    let t0 = Instant::now();
    let mut worst_coarse = 0.0f64;
    let mut worst_fine = 0.0f64;
    for n in 2..=10usize {
        let mut cfg = VerifyConfig::new(VerifyMode::Cyclic, n);
        cfg.cases = 50;
        cfg.seed = 7;

        cfg.steps = 20_000;
        cfg.tol = 1e-6;
        let out = run_verify(&cfg).expect("suite runs");
        assert!(out.passed(), "N={n} @2e4: max err {:.3e}", out.max_error());
        worst_coarse = worst_coarse.max(out.max_error());

        cfg.steps = 200_000;
        cfg.tol = 1e-8;
        let out = run_verify(&cfg).expect("suite runs");
        assert!(out.passed(), "N={n} @2e5: max err {:.3e}", out.max_error());
        worst_fine = worst_fine.max(out.max_error());
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(120), "cyclic suite took {dt:?}");
    println!(
        "criterion 02 closed form vs oracle (N=2..10, ≤1e-6 @2e4 [max {worst_coarse:.2e}], ≤1e-8 @2e5 [max {worst_fine:.2e}]): PASS in {dt:.1?}"
    );
}

#[test]
fn criterion_03_s_family_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut done = 0;
    while done < 1000 {
        let r: f64 = rng.gen_range(0.0..=1.0);
        let n = rng.gen_range(2..=12usize);
        let g: f64 = rng.gen_range(-PI..PI);
        // guard the arg conditioning at phase-jump points (never triggers
        // statistically; keeps the 1e-12 comparison meaningful)
        let z = Complex64::new((n as f64 * g).cos(), r * (n as f64 * g).sin());
        if z.norm() < 1e-4 {
            continue;
        }
        let st = DickeSuperposition::s_state(r, n).unwrap();
        let lp = LocalLoop::cyclic_uniform(g, n);
        let engine = composite_gp(&st, &lp, BranchMode::Principal).unwrap().value();
        let closed = s_state_gp(r, n, g, BranchMode::Principal).unwrap().value();
        assert!(
            circle_distance(engine, closed) <= 1e-12,
            "r={r} N={n} γ={g}: engine {engine} vs closed {closed}"
        );
        // Γ_S has the identical functional form: Γ − Γ_S = 0 pointwise
        let sep = closest_separable_gp_s(r, n, g, BranchMode::Principal)
            .unwrap()
            .value();
        assert!((closed - sep).abs() <= 1e-12);
        done += 1;
    }
    println!("criterion 03 S-family identities (1000 triples, ≤1e-12; Γ=Γ_S): PASS");
}

#[test]
fn criterion_04_w_family_identities() {
    let mut worst_line = 0.0f64;
    let mut worst_split = 0.0f64;
    for n in 2..=10usize {
        for k in 0..=n {
            let st = DickeSuperposition::single_dicke(n, k).unwrap();
            for j in 0..40 {
                let g = -PI + 2.0 * PI * j as f64 / 39.0;
                // Γ = (N−2k)γ exactly (non-modular line)
                let line = w_state_gp(n, k as f64, g, BranchMode::Unwrapped).value();
                assert_eq!(line, (n as f64 - 2.0 * k as f64) * g);
                // and the general engine reproduces it modulo 2π
                let lp = LocalLoop::cyclic_uniform(g, n);
                let engine = composite_gp(&st, &lp, BranchMode::Principal).unwrap().value();
                worst_line = worst_line.max(circle_distance(engine, line));

                if 2 * k == n {
                    continue; // degenerate subsystems
                }
                // Γ_S = Σ γ^M within 1e-12, checked against the
                // product-of-marginals phase rather than the same code path
                let sub_sum = n as f64
                    * w_state_subsystem_gp(n, k as f64, g, BranchMode::Unwrapped)
                        .unwrap()
                        .value();
                let gamma_s = closest_separable_gp_w(n, k as f64, g, BranchMode::Unwrapped)
                    .unwrap()
                    .value();
                assert!((gamma_s - sub_sum).abs() <= 1e-12);
                let marg = product_of_marginals_gp((n - k) as f64 / n as f64, g, n)
                    .unwrap()
                    .value();
                worst_split = worst_split.max(circle_distance(marg, sub_sum));
                // hence Γ − Γ_S = Δγ
                let delta = line - sub_sum;
                assert!(((line - gamma_s) - delta).abs() <= 1e-12);
            }
        }
    }
    assert!(worst_line <= 1e-12, "engine vs line: {worst_line:.3e}");
    assert!(worst_split <= 1e-12, "Γ_S vs marginals: {worst_split:.3e}");
    println!("criterion 04 W-family identities (Γ=(N−2k)γ, Γ_S=Σγ^M ≤1e-12): PASS");
}

#[test]
fn criterion_05_entanglement_values() {
    assert!((er_s_state(0.0).unwrap() - 1.0).abs() <= 1e-12);
    assert!(er_s_state(1.0).unwrap().abs() <= 1e-12);
    assert!((er_w_state(2, 1.0).unwrap() - 1.0).abs() <= 1e-12);

    let log2e = std::f64::consts::LOG2_E;
    let e = er_w_state(10_000, 1.0).unwrap();
    let deviation = e - log2e;
    assert!(deviation.abs() <= 1e-4, "|{e} − log₂e| = {:.3e}", deviation.abs());
    // the printed formula approaches log₂e from BELOW, against the claimed
    // E_R ≥ log₂e bound; the sign is recorded here
    assert!(deviation < 0.0);
    println!(
        "criterion 05 entanglement values (endpoints ≤1e-12; E_R(k=1, N=1e4) − log₂e = {deviation:.3e}, below the claimed ≥ log₂e bound): PASS"
    );
}

#[test]
fn criterion_06_combinatorial_engine() {
    let _g = exclusive();
    let t0 = Instant::now();
    let mut cfg = VerifyConfig::new(VerifyMode::Esp, 12);
    cfg.cases = 100;
    cfg.tol = 1e-10;
    cfg.seed = 6;
    let out = run_verify(&cfg).expect("suite runs");
    assert!(out.passed(), "max err {:.3e}", out.max_error());
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(30), "esp suite took {dt:?}");
    println!(
        "criterion 06 combinatorial engine ({} cases, all N ≤ 12, ≤1e-10, max {:.2e}): PASS in {dt:.1?}",
        out.records.len(),
        out.max_error()
    );
}

#[test]
fn criterion_07_parallel_transport_quality() {
    let _g = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let basis = gphase_core::oracle::computational_basis();

    // transport-loop paths at the default resolution
    let mut worst_violation = 0.0f64;
    let mut worst_cyclic = 0.0f64;
    let mut worst_delta = 0.0f64;
    for n in [2usize, 5, 8] {
        let alphas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..PI - 0.1)).collect();
        let path = pt_path_z(&alphas, 20_000).unwrap();
        let report = path.pt_report(&vec![basis; n]).unwrap();
        worst_violation = worst_violation.max(report.max_violation);
        worst_cyclic = worst_cyclic.max(report.cyclic_defect);

        // ρ01 = 0 state along the path: no dynamical phase anywhere
        let st = DickeSuperposition::s_state(0.6, n).unwrap();
        let psi0 = StateVector::from_superposition(&st).unwrap();
        let d = dynamical_phase(&psi0, &path).unwrap();
        worst_delta = worst_delta
            .max(d.composite.abs())
            .max(d.per_site.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    }
    assert!(worst_violation <= 1e-8, "violation {worst_violation:.3e}");
    assert!(worst_cyclic <= 1e-9, "cyclic defect {worst_cyclic:.3e}");
    assert!(worst_delta <= 1e-8, "|Δ| = {worst_delta:.3e}");

    // gauge-corrected arbitrary paths
    let mut cfg = VerifyConfig::new(VerifyMode::Generic, 4);
    cfg.cases = 10;
    cfg.steps = 20_000;
    cfg.tol = 1e-8;
    cfg.seed = 77;
    let out = run_verify(&cfg).expect("suite runs");
    assert!(out.passed(), "generic suite max err {:.3e}", out.max_error());

    println!(
        "criterion 07 parallel transport quality (violation {worst_violation:.2e} ≤ 1e-8, cyclic defect {worst_cyclic:.2e} ≤ 1e-9, |Δ| {worst_delta:.2e} ≤ 1e-8; corrected paths max {:.2e}): PASS",
        out.max_error()
    );
}

#[test]
fn criterion_08_figure_reproduction() {
    let _g = exclusive();
    let dir = tempfile::tempdir().unwrap();

    let t0 = Instant::now();
    let mut data = Vec::new();
    for family in [SweepFamily::S, SweepFamily::W] {
        let spec = SweepSpec::fig1_default(family);
        let d = fig1::generate(&spec).unwrap();
        let mut file =
            std::io::BufWriter::new(std::fs::File::create(dir.path().join(format!(
                "fig1_{}.csv",
                family.label()
            )))
            .unwrap());
        fig1::write_csv(&d, &mut file).unwrap();
        data.push((family, d));
    }
    let gen_time = t0.elapsed();
    assert!(gen_time < Duration::from_secs(5), "generation took {gen_time:?}");

    for (family, d) in &data {
        assert_eq!(d.rows.len(), 401 * 201);
        let diag = fig1::diagnostics(d);
        assert!(
            diag.monotonicity.passed(),
            "{family:?}: non-monotone at γ = {:?}",
            diag.monotonicity.violations
        );
        if *family == SweepFamily::W {
            assert!(diag.monotonicity.expected_nonmonotone > 0);
        }
        // periodicity in γ is measured, not asserted: the reported residual
        // is against the measured offsets (0 for S, −2kπ for W)
        println!(
            "criterion 08 [{:?}] π-shift residual vs measured offset: {:.2e} (reported)",
            family, diag.shift.max_residual
        );
    }

    // Δγ magnitude grows with N
    for family in [SweepFamily::S, SweepFamily::W] {
        let mut prev = 0.0;
        for n in [11usize, 31, 51] {
            let m = fig1::max_delta_magnitude(family, n).unwrap();
            assert!(m > prev, "{family:?}: max|Δγ| not growing at N={n}");
            prev = m;
        }
    }
    println!(
        "criterion 08 figure reproduction (2×401×201 in {gen_time:.2?} < 5 s; diagnostics + N-growth): PASS"
    );
}

#[test]
fn criterion_09_nonsymmetric_w_sector() {
    let _g = exclusive();
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut worst = 0.0f64;
    for n in [3usize, 4, 5] {
        let mut states: Vec<Vec<Complex64>> = Vec::new();
        if n == 3 {
            // (2|001⟩ + |010⟩ − |100⟩)/√6
            let mut amps = vec![Complex64::new(0.0, 0.0); 8];
            let s6 = 6.0f64.sqrt();
            amps[0b001] = Complex64::new(2.0 / s6, 0.0);
            amps[0b010] = Complex64::new(1.0 / s6, 0.0);
            amps[0b100] = Complex64::new(-1.0 / s6, 0.0);
            states.push(amps);
        }
        for _ in 0..2 {
            // random one-excitation superposition
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
            let mut norm = 0.0;
            for site in 0..n {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                amps[1 << (n - 1 - site)] = c;
                norm += c.norm_sqr();
            }
            let norm = norm.sqrt();
            for a in &mut amps {
                *a /= norm;
            }
            states.push(amps);
        }
        for amps in states {
            let psi0 = StateVector::from_amplitudes(n, amps).unwrap();
            let alpha = rng.gen_range(0.2..PI - 0.2);
            let path = pt_path_z(&vec![alpha; n], 20_000).unwrap();
            let oracle = total_phase(&psi0, &path.final_unitaries()).unwrap().value();
            let expect = (n as f64 - 2.0) * pt_gamma(alpha);
            let err = circle_distance(oracle, expect);
            assert!(err <= 1e-6, "N={n} α={alpha}: err {err:.3e}");
            worst = worst.max(err);
        }
    }
    println!(
        "criterion 09 non-symmetric W sector (Γ=(N−2k)γ, one-excitation states, ≤1e-6, max {worst:.2e}): PASS"
    );
}

#[test]
fn criterion_10_product_state_null_case() {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 8] {
        let st = DickeSuperposition::binomial_product(0.7, n).unwrap();
        for j in 0..101 {
            let g = -PI + 2.0 * PI * j as f64 / 100.0;
            let lp = LocalLoop::cyclic_uniform(g, n);
            let rep = mutual_gp(&st, &lp, BranchMode::Unwrapped).unwrap();
            let dg = rep.mutual_gp.value().abs();
            assert!(dg <= 1e-10, "N={n} γ={g}: Δγ = {dg:.3e}");
            worst = worst.max(dg);
        }
    }
    println!(
        "criterion 10 product-state null case (N ∈ {{3,5,8}}, 101-point grid, |Δγ| ≤ 1e-10, max {worst:.2e}): PASS"
    );
}

/// Supporting check for criterion 7's corrected-path clause on a state with
/// tilted eigen-axes (the transport basis comes from the state, not from
/// |0⟩/|1⟩).
#[test]
fn corrected_paths_respect_tilted_eigenbases() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 4;
    let st = loop {
        let amps: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(st) = DickeSuperposition::normalized(n, amps) {
            if st.reduced_qubit().rho01().norm() > 0.05 && !st.reduced_qubit().is_degenerate() {
                break st;
            }
        }
    };
    let eig = st.reduced_qubit().eigen2().unwrap();
    let bases = vec![eig.eigenvectors; n];
    let hams: Vec<FourierHamiltonian> = (0..n)
        .map(|_| FourierHamiltonian::random(&mut rng, RANDOM_FIELD_SCALE))
        .collect();
    let path = enforce_pt(&hamiltonian_path(&hams, 20_000).unwrap(), &bases).unwrap();
    let report = path.pt_report(&bases).unwrap();
    assert!(report.max_violation <= 1e-8);
    let psi0 = StateVector::from_superposition(&st).unwrap();
    let d = dynamical_phase(&psi0, &path).unwrap();
    assert!(d.composite.abs() <= 1e-8);
    assert!(d.additivity_defect() <= 1e-8);
}

/// The closed-form path and the transport loop agree end to end through the
/// public pipeline (state file → loop → report), pinning the wiring.
#[test]
fn pipeline_closed_form_and_oracle_agree() {
    let st = DickeSuperposition::s_state(0.45, 4).unwrap();
    let alphas = [0.7, 1.0, 1.9, 2.5];
    let path = pt_path_z_for_state(&st, &alphas, 20_000).unwrap();
    let lp = path.local_loop().unwrap();
    assert!(lp.is_cyclic());
    let formula = composite_gp(&st, &lp, BranchMode::Principal).unwrap().value();
    let psi0 = StateVector::from_superposition(&st).unwrap();
    let oracle = total_phase(&psi0, &path.final_unitaries()).unwrap().value();
    assert!(circle_distance(formula, oracle) <= 1e-8);
}
