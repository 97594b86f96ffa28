//! Δγ sweep over (entanglement, γ) grids and its structural diagnostics.
//!
//! Rows are emitted in row-major order, entanglement parameter outer and γ
//! inner; within each row Δγ is unwrapped along the γ axis and anchored so
//! the lift vanishes at γ = 0. Degenerate parameter values (r = 0 for the S
//! family, N = 2k for the W family) produce `nan` subsystem and Δγ fields
//! and are flagged in a footer comment.

use std::io::{self, Write};

use gphase_core::angle::{ellipse_arg_unwrapped, unwrap_sequence, wrap_principal};
use gphase_core::closed_form::{s_state_gp, w_state_gp};
use gphase_core::entanglement::{er_w_state, inverse_er_s};
use gphase_core::error::{PhaseError, Result};
use gphase_core::state::DEGENERACY_TOL;
use gphase_core::BranchMode;

/// Which closed-form family a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    S,
    W,
}

impl SweepFamily {
    pub fn label(&self) -> &'static str {
        match self {
            SweepFamily::S => "s",
            SweepFamily::W => "w",
        }
    }
}

/// Sweep description: γ grid × entanglement grid at fixed N.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub n: usize,
    /// (min, max, points) over γ.
    pub gamma_grid: (f64, f64, usize),
    /// Points on the entanglement axis: E_R ∈ [0,1] for S, k ∈ [0,N] for W.
    pub ent_points: usize,
    pub branch: BranchMode,
}

impl SweepSpec {
    /// Default sweep grids: γ ∈ [−π, π] with 401 points, 201 points on the
    /// entanglement axis, N = 51, unwrapped.
    pub fn fig1_default(family: SweepFamily) -> Self {
        SweepSpec {
            family,
            n: 51,
            gamma_grid: (-std::f64::consts::PI, std::f64::consts::PI, 401),
            ent_points: 201,
            branch: BranchMode::Unwrapped,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi, pts) = self.gamma_grid;
        if lo >= hi || !lo.is_finite() || !hi.is_finite() || pts < 2 || self.ent_points < 2 {
            return Err(PhaseError::OutOfRange(format!(
                "grids must be strictly increasing with at least 2 points (γ: {lo}..{hi}×{pts}, ent: {})",
                self.ent_points
            )));
        }
        if self.n == 0 {
            return Err(PhaseError::OutOfRange("n must be positive".into()));
        }
        Ok(())
    }

    pub fn gammas(&self) -> Vec<f64> {
        let (lo, hi, pts) = self.gamma_grid;
        (0..pts)
            .map(|j| lo + (hi - lo) * j as f64 / (pts - 1) as f64)
            .collect()
    }
}

/// One grid cell of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct Fig1Row {
    pub gamma: f64,
    pub e_r: f64,
    /// r for the S family, k for the W family.
    pub param: f64,
    pub gamma_composite: f64,
    pub gamma_subsystem_sum: f64,
    pub delta_gamma: f64,
}

/// A generated sweep.
#[derive(Debug, Clone)]
pub struct Fig1Data {
    pub spec: SweepSpec,
    pub rows: Vec<Fig1Row>,
    /// Parameter values whose rows are degenerate (`nan` Δγ).
    pub degenerate_params: Vec<f64>,
}

/// Computes the sweep.
pub fn generate(spec: &SweepSpec) -> Result<Fig1Data> {
    spec.validate()?;
    let gammas = spec.gammas();
    let n = spec.n;
    let mut rows = Vec::with_capacity(spec.ent_points * gammas.len());
    let mut degenerate_params = Vec::new();

    for i in 0..spec.ent_points {
        let frac = i as f64 / (spec.ent_points - 1) as f64;
        let (e_r, param, squash) = match spec.family {
            SweepFamily::S => {
                let e_r = frac;
                let r = inverse_er_s(e_r)?;
                (e_r, r, r)
            }
            SweepFamily::W => {
                let k = n as f64 * frac;
                (er_w_state(n, k)?, k, (n as f64 - 2.0 * k) / n as f64)
            }
        };
        let degenerate = squash.abs() < DEGENERACY_TOL;
        if degenerate {
            degenerate_params.push(param);
        }

        let composite = composite_row(spec, param, &gammas)?;
        for (j, &g) in gammas.iter().enumerate() {
            let (sub_sum, delta) = if degenerate {
                (f64::NAN, f64::NAN)
            } else {
                let sub = n as f64 * subsystem_value(spec.branch, g, squash);
                (sub, composite[j] - sub)
            };
            rows.push(Fig1Row {
                gamma: g,
                e_r,
                param,
                gamma_composite: composite[j],
                gamma_subsystem_sum: sub_sum,
                delta_gamma: delta,
            });
        }
    }

    Ok(Fig1Data {
        spec: spec.clone(),
        rows,
        degenerate_params,
    })
}

/// Composite phase along one γ row. Unwrapped mode walks the principal
/// values along the grid (alias-free by grid-density choice) and anchors the
/// first sample with the analytic lift, which vanishes at γ = 0.
fn composite_row(spec: &SweepSpec, param: f64, gammas: &[f64]) -> Result<Vec<f64>> {
    let n = spec.n;
    match (spec.family, spec.branch) {
        (SweepFamily::W, _) => {
            // exact non-modular line
            let slope = n as f64 - 2.0 * param;
            Ok(gammas
                .iter()
                .map(|&g| match spec.branch {
                    BranchMode::Unwrapped => slope * g,
                    BranchMode::Principal => {
                        w_state_gp(n, param, g, BranchMode::Principal).value()
                    }
                })
                .collect())
        }
        (SweepFamily::S, BranchMode::Principal) => gammas
            .iter()
            .map(|&g| Ok(s_state_gp(param, n, g, BranchMode::Principal)?.value()))
            .collect(),
        (SweepFamily::S, BranchMode::Unwrapped) => {
            let principal: Vec<f64> = gammas
                .iter()
                .map(|&g| {
                    s_state_gp(param, n, g, BranchMode::Principal)
                        .map(|a| a.value())
                        // r = 0 jump points: fall back to the lift value
                        .unwrap_or_else(|_| {
                            wrap_principal(ellipse_arg_unwrapped(n as f64 * g, param))
                        })
                })
                .collect();
            let mut unwrapped = unwrap_sequence(&principal);
            let anchor = ellipse_arg_unwrapped(n as f64 * gammas[0], param);
            let shift = anchor - unwrapped[0];
            for v in &mut unwrapped {
                *v += shift;
            }
            Ok(unwrapped)
        }
    }
}

fn subsystem_value(branch: BranchMode, gamma: f64, squash: f64) -> f64 {
    match branch {
        BranchMode::Unwrapped => ellipse_arg_unwrapped(gamma, squash),
        BranchMode::Principal => {
            wrap_principal(ellipse_arg_unwrapped(gamma, squash))
        }
    }
}

fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Writes the CSV (17 significant digits, `nan` for degenerate fields,
/// footer comment flagging degenerate parameter rows).
pub fn write_csv(data: &Fig1Data, out: &mut impl Write) -> io::Result<()> {
    writeln!(
        out,
        "gamma,e_r,param,gamma_composite,gamma_subsystem_sum,delta_gamma"
    )?;
    for row in &data.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(row.gamma),
            fmt(row.e_r),
            fmt(row.param),
            fmt(row.gamma_composite),
            fmt(row.gamma_subsystem_sum),
            fmt(row.delta_gamma)
        )?;
    }
    if !data.degenerate_params.is_empty() {
        let list: Vec<String> = data.degenerate_params.iter().map(|p| fmt(*p)).collect();
        writeln!(
            out,
            "# degenerate rows (delta_gamma = nan) at param: {}",
            list.join(",")
        )?;
    }
    Ok(())
}

/// Verdict for one family's monotonicity-in-entanglement check.
#[derive(Debug, Clone)]
pub struct MonotonicityCheck {
    /// Columns monotone in E_R (tie tolerance 1e-9).
    pub monotone: usize,
    /// Columns whose total variation is below 0.5% of the surface scale;
    /// excluded from the verdict (the monotonicity claim concerns the
    /// visible structure; Δγ has sub-visual wiggles within a grid step of
    /// its zeros at γ ≡ 0 mod π).
    pub negligible: usize,
    /// Non-negligible, non-monotone columns and their γ values.
    pub violations: Vec<f64>,
    /// For the W family: non-monotone columns inside |γ|/π < 1/2, the band
    /// where non-monotonicity is expected (informational).
    pub expected_nonmonotone: usize,
    pub columns_checked: usize,
}

impl MonotonicityCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Measured γ-shift behavior of Δγ(γ + π) − Δγ(γ) per family. Periodicity in
/// γ is reported against the measured offsets, never asserted: the
/// non-modular W-family surface shifts by −2kπ per π step rather than
/// repeating.
#[derive(Debug, Clone)]
pub struct ShiftCheck {
    /// max |Δγ(γ+π) − Δγ(γ)| for the S family (expected ≈ 0), or
    /// max |Δγ(γ+π) − Δγ(γ) + 2kπ| for the W family (measured offset −2kπ).
    pub max_residual: f64,
    pub pairs_checked: usize,
}

/// Structural diagnostics of one sweep.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub monotonicity: MonotonicityCheck,
    pub shift: ShiftCheck,
    pub max_abs_delta: f64,
}

/// Runs the structural checks on generated sweep data.
pub fn diagnostics(data: &Fig1Data) -> Diagnostics {
    let spec = &data.spec;
    let gammas = spec.gammas();
    let n_g = gammas.len();
    let n_e = spec.ent_points;
    let at = |i: usize, j: usize| &data.rows[i * n_g + j];

    let max_abs_delta = data
        .rows
        .iter()
        .map(|r| if r.delta_gamma.is_nan() { 0.0 } else { r.delta_gamma.abs() })
        .fold(0.0, f64::max);
    let negligible_scale = 5e-3 * max_abs_delta;

    // usable entanglement-axis indices, ordered by increasing E_R
    let mut ent_indices: Vec<usize> = (0..n_e)
        .filter(|&i| !at(i, 0).delta_gamma.is_nan())
        .collect();
    if spec.family == SweepFamily::W {
        // E_R is monotone in k only below N/2; the upper half mirrors it
        ent_indices.retain(|&i| at(i, 0).param < spec.n as f64 / 2.0);
    }
    ent_indices.sort_by(|&a, &b| at(a, 0).e_r.partial_cmp(&at(b, 0).e_r).unwrap());

    let tie = 1e-9;
    let mut monotone = 0;
    let mut negligible = 0;
    let mut violations = Vec::new();
    let mut expected_nonmonotone = 0;
    for (j, &gamma) in gammas.iter().enumerate() {
        let col: Vec<f64> = ent_indices.iter().map(|&i| at(i, j).delta_gamma).collect();
        let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < negligible_scale {
            negligible += 1;
            continue;
        }
        let asc = col.windows(2).all(|w| w[1] >= w[0] - tie);
        let desc = col.windows(2).all(|w| w[1] <= w[0] + tie);
        if asc || desc {
            monotone += 1;
        } else if spec.family == SweepFamily::W && gamma.abs() / std::f64::consts::PI < 0.5 {
            expected_nonmonotone += 1;
        } else {
            violations.push(gamma);
        }
    }

    // π-shift residuals at fixed entanglement parameter
    let (lo, hi, pts) = spec.gamma_grid;
    let step = (hi - lo) / (pts - 1) as f64;
    let per_pi = std::f64::consts::PI / step;
    let shift_stride = per_pi.round() as usize;
    let mut max_residual = 0.0f64;
    let mut pairs = 0;
    if shift_stride >= 1 && (per_pi - shift_stride as f64).abs() < 1e-9 {
        for &i in &ent_indices {
            for j in 0..n_g.saturating_sub(shift_stride) {
                let a = at(i, j).delta_gamma;
                let b = at(i, j + shift_stride).delta_gamma;
                if a.is_nan() || b.is_nan() {
                    continue;
                }
                let expected_offset = match spec.family {
                    SweepFamily::S => 0.0,
                    SweepFamily::W => -2.0 * at(i, 0).param * std::f64::consts::PI,
                };
                max_residual = max_residual.max((b - a - expected_offset).abs());
                pairs += 1;
            }
        }
    }

    Diagnostics {
        monotonicity: MonotonicityCheck {
            monotone,
            negligible,
            violations,
            expected_nonmonotone,
            columns_checked: n_g,
        },
        shift: ShiftCheck {
            max_residual,
            pairs_checked: pairs,
        },
        max_abs_delta,
    }
}

impl std::fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = &self.monotonicity;
        writeln!(
            f,
            "monotonicity vs E_R: {} monotone, {} negligible-scale, {} expected non-monotone (|gamma|/pi < 1/2), {} violations -> {}",
            m.monotone,
            m.negligible,
            m.expected_nonmonotone,
            m.violations.len(),
            if m.passed() { "PASS" } else { "FAIL" }
        )?;
        writeln!(
            f,
            "pi-shift residual vs measured offset: {:.3e} over {} pairs (reported, not asserted)",
            self.shift.max_residual, self.shift.pairs_checked
        )?;
        write!(f, "max |delta_gamma| = {:.6}", self.max_abs_delta)
    }
}

/// max |Δγ| of a family sweep at the given N (default grids otherwise).
pub fn max_delta_magnitude(family: SweepFamily, n: usize) -> Result<f64> {
    let mut spec = SweepSpec::fig1_default(family);
    spec.n = n;
    let data = generate(&spec)?;
    Ok(diagnostics(&data).max_abs_delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shapes() {
        let data = generate(&SweepSpec::fig1_default(SweepFamily::S)).unwrap();
        assert_eq!(data.rows.len(), 401 * 201);
        // param-outer ordering: γ varies fastest
        assert_eq!(data.rows[0].e_r, data.rows[1].e_r);
        assert!(data.rows[0].gamma < data.rows[1].gamma);
        // exactly one degenerate row per family default (r = 0 / k = N/2)
        assert_eq!(data.degenerate_params.len(), 1);
    }

    #[test]
    fn separable_rows_have_zero_mutual_phase() {
        // S family at E_R = 0 (r = 1)
        let data = generate(&SweepSpec::fig1_default(SweepFamily::S)).unwrap();
        for row in data.rows.iter().take(401) {
            assert_eq!(row.e_r, 0.0);
            assert!(row.delta_gamma.abs() < 1e-9, "Δγ = {}", row.delta_gamma);
        }
        // W family at k = 0
        let data = generate(&SweepSpec::fig1_default(SweepFamily::W)).unwrap();
        for row in data.rows.iter().take(401) {
            assert_eq!(row.param, 0.0);
            assert!(row.delta_gamma.abs() < 1e-9);
        }
    }

    #[test]
    fn w_cell_matches_independent_evaluation() {
        // grid chosen to land exactly on γ = 0.4 at k = 10
        let spec = SweepSpec {
            family: SweepFamily::W,
            n: 51,
            gamma_grid: (0.0, 0.4, 401),
            ent_points: 205, // k grid with spacing 0.25 hits k = 10 exactly
            branch: BranchMode::Unwrapped,
        };
        let data = generate(&spec).unwrap();
        let row = data
            .rows
            .iter()
            .find(|r| (r.param - 10.0).abs() < 1e-12 && (r.gamma - 0.4).abs() < 1e-12)
            .expect("cell (k=10, γ=0.4) on grid");
        // frozen: 31·0.4 − 51·arctan((31/51)·tan 0.4)
        let expect = 31.0 * 0.4 - 12.828_969_676_405_93;
        assert!(
            (row.delta_gamma - expect).abs() < 1e-10,
            "Δγ = {} vs {expect}",
            row.delta_gamma
        );
    }

    #[test]
    fn csv_format_and_footer() {
        let spec = SweepSpec {
            family: SweepFamily::W,
            n: 4,
            gamma_grid: (-1.0, 1.0, 3),
            ent_points: 3, // k ∈ {0, 2, 4}: middle row degenerate
            branch: BranchMode::Unwrapped,
        };
        let data = generate(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&data, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "gamma,e_r,param,gamma_composite,gamma_subsystem_sum,delta_gamma"
        );
        assert_eq!(text.lines().count(), 1 + 9 + 1);
        assert!(text.lines().last().unwrap().starts_with("# degenerate rows"));
        assert!(text.contains(",nan"));
        // 17 significant digits
        assert!(text.contains("e0") || text.contains("e-"));
    }

    #[test]
    fn deterministic_output() {
        let spec = SweepSpec::fig1_default(SweepFamily::S);
        let (a, b) = (generate(&spec).unwrap(), generate(&spec).unwrap());
        let mut ba = Vec::new();
        let mut bb = Vec::new();
        write_csv(&a, &mut ba).unwrap();
        write_csv(&b, &mut bb).unwrap();
        assert_eq!(ba, bb);
    }

    #[test]
    fn diagnostics_pass_on_defaults() {
        for family in [SweepFamily::S, SweepFamily::W] {
            let data = generate(&SweepSpec::fig1_default(family)).unwrap();
            let d = diagnostics(&data);
            assert!(d.monotonicity.passed(), "{family:?}: {:?}", d.monotonicity.violations);
            if family == SweepFamily::W {
                assert!(d.monotonicity.expected_nonmonotone > 0);
            }
            // measured shift offsets (0 for S, −2kπ for W) hold to 1e-9
            assert!(d.shift.max_residual < 1e-9, "{family:?}: {}", d.shift.max_residual);
        }
    }
}
