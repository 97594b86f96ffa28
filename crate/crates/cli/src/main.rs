//! `gphase`: geometric-phase sweeps, verification, and point evaluation.
//!
//! Exit codes: 0 on success, 1 when a verification or numeric check fails,
//! 2 on usage or configuration errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gphase_cli::fig1::{self, SweepFamily, SweepSpec};
use gphase_cli::point::{Drive, PointSpec, PointState};
use gphase_cli::scenario;
use gphase_cli::verify::{run_verify, VerifyConfig, VerifyMode};
use gphase_core::entanglement::{er_s_state, er_w_state, inverse_er_s};
use gphase_core::BranchMode;

#[derive(Parser)]
#[command(
    name = "gphase",
    about = "Geometric and dynamical phases of multipartite entangled qubit states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the Δγ(E_R, γ) sweep CSV and run its structural diagnostics
    Fig1(Fig1Args),
    /// Run an oracle-vs-formula verification suite
    Verify(VerifyArgs),
    /// Evaluate one state/loop configuration
    Point(PointArgs),
    /// Entanglement values and inverses for the closed-form families
    Er(ErArgs),
}

#[derive(Args)]
struct Fig1Args {
    /// Family: s | w
    #[arg(long)]
    family: String,
    /// Number of qubits
    #[arg(long, default_value_t = 51)]
    n: usize,
    /// Grid as <gamma-points>x<entanglement-points>
    #[arg(long, default_value = "401x201")]
    grid: String,
    /// Lower end of the γ grid (default −π)
    #[arg(long, allow_hyphen_values = true)]
    gamma_min: Option<f64>,
    /// Upper end of the γ grid (default π)
    #[arg(long)]
    gamma_max: Option<f64>,
    /// Branch mode: principal | unwrapped
    #[arg(long, default_value = "unwrapped")]
    branch: String,
    /// Output CSV path (default fig1_<family>.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compare max |Δγ| across N ∈ {11, 31, 51}
    #[arg(long)]
    n_growth: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: cyclic | generic | additivity | esp
    #[arg(long)]
    mode: String,
    /// Number of qubits (esp: largest N of the scan)
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    /// Tolerance (default per suite)
    #[arg(long)]
    tol: Option<f64>,
    /// Cases per suite (per (N,k) pair for esp)
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Statevector qubit cap
    #[arg(long, default_value_t = gphase_core::oracle::DEFAULT_QUBIT_CAP)]
    cap: usize,
    /// Report file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    /// Family: s | w (alternative to --state/--scenario)
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// S-family Bloch parameter
    #[arg(long)]
    r: Option<f64>,
    /// W-family excitation number
    #[arg(long)]
    k: Option<f64>,
    /// State file (JSON with n and amps)
    #[arg(long)]
    state: Option<PathBuf>,
    /// Scenario file (state + drive + steps + seed)
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Cyclic phase γ: one value for all sites, or a comma-separated
    /// per-site list
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Option<Vec<f64>>,
    /// Per-site tilt angles, comma separated
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Branch mode: principal | unwrapped
    #[arg(long, default_value = "unwrapped")]
    branch: String,
    /// Append dense-oracle values and deviations
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    #[arg(long, default_value_t = gphase_core::oracle::DEFAULT_QUBIT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct ErArgs {
    /// Family: s | w
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    /// S-family parameter r → prints E_R(r)
    #[arg(long)]
    r: Option<f64>,
    /// W-family excitation k (real) → prints E_R(N, k)
    #[arg(long)]
    k: Option<f64>,
    /// Target E_R → prints r with E_R(r) = target (S family only)
    #[arg(long)]
    er: Option<f64>,
}

fn parse_branch(s: &str) -> Result<BranchMode, String> {
    match s {
        "principal" => Ok(BranchMode::Principal),
        "unwrapped" => Ok(BranchMode::Unwrapped),
        other => Err(format!("unknown branch mode '{other}'")),
    }
}

fn parse_family(s: &str) -> Result<SweepFamily, String> {
    match s {
        "s" | "S" => Ok(SweepFamily::S),
        "w" | "W" => Ok(SweepFamily::W),
        other => Err(format!("unknown family '{other}'")),
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('x')
        .ok_or_else(|| format!("grid must look like 401x201, got '{s}'"))?;
    let g = a.parse().map_err(|_| format!("bad grid '{s}'"))?;
    let e = b.parse().map_err(|_| format!("bad grid '{s}'"))?;
    Ok((g, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Fig1(args) => cmd_fig1(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Point(args) => cmd_point(args),
        Command::Er(args) => cmd_er(args),
    }
}

fn cmd_fig1(args: Fig1Args) -> Result<ExitCode, String> {
    let family = parse_family(&args.family)?;
    let (gamma_points, ent_points) = parse_grid(&args.grid)?;
    let spec = SweepSpec {
        family,
        n: args.n,
        gamma_grid: (
            args.gamma_min.unwrap_or(-std::f64::consts::PI),
            args.gamma_max.unwrap_or(std::f64::consts::PI),
            gamma_points,
        ),
        ent_points,
        branch: parse_branch(&args.branch)?,
    };
    let data = fig1::generate(&spec).map_err(|e| e.to_string())?;
    let out_path = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("fig1_{}.csv", family.label())));
    let file = File::create(&out_path).map_err(|e| format!("{}: {e}", out_path.display()))?;
    let mut writer = BufWriter::new(file);
    fig1::write_csv(&data, &mut writer).map_err(|e| e.to_string())?;
    writer.flush().map_err(|e| e.to_string())?;
    println!(
        "wrote {} rows to {}",
        data.rows.len(),
        out_path.display()
    );

    let diag = fig1::diagnostics(&data);
    println!("{diag}");
    let mut ok = diag.monotonicity.passed();

    if args.n_growth {
        let mut prev = 0.0;
        let mut growth_ok = true;
        for n in [11usize, 31, 51] {
            let m = fig1::max_delta_magnitude(family, n).map_err(|e| e.to_string())?;
            println!("max |delta_gamma| at N={n}: {m:.6}");
            growth_ok &= m > prev;
            prev = m;
        }
        println!(
            "magnitude grows with N: {}",
            if growth_ok { "PASS" } else { "FAIL" }
        );
        ok &= growth_ok;
    }

    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let mode = VerifyMode::parse(&args.mode)
        .ok_or_else(|| format!("unknown verify mode '{}'", args.mode))?;
    let mut config = VerifyConfig::new(mode, args.n);
    config.seed = args.seed;
    config.steps = args.steps;
    config.cases = args.cases;
    config.cap = args.cap;
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    let outcome = run_verify(&config).map_err(|e| e.to_string())?;
    let text = outcome.report_text();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("{}", outcome.summary_line());
        }
        None => print!("{text}"),
    }
    Ok(if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_point(args: PointArgs) -> Result<ExitCode, String> {
    if let Some(path) = &args.scenario {
        let sc = scenario::load_scenario(path).map_err(|e| e.to_string())?;
        let base = path.parent().unwrap_or_else(|| std::path::Path::new("."));
        let text = scenario::run_scenario(&sc, base).map_err(|e| e.to_string())?;
        print!("{text}");
        return Ok(ExitCode::SUCCESS);
    }

    let state = if let Some(path) = &args.state {
        PointState::Custom(gphase_core::io::load_state(path).map_err(|e| e.to_string())?)
    } else {
        let family = args
            .family
            .as_deref()
            .ok_or("point needs --family, --state, or --scenario")?;
        let n = args.n.ok_or("point needs --n with --family")?;
        match parse_family(family)? {
            SweepFamily::S => PointState::SFamily {
                r: args.r.ok_or("S family needs --r")?,
                n,
            },
            SweepFamily::W => PointState::WFamily {
                k: args.k.ok_or("W family needs --k")?,
                n,
            },
        }
    };

    let drive = match (&args.gamma, &args.alpha) {
        (Some(gs), None) if !gs.is_empty() => Drive::Gammas(gs.clone()),
        (None, Some(alphas)) => Drive::Alphas(alphas.clone()),
        (None, None) | (Some(_), None) => return Err("point needs --gamma or --alpha".into()),
        (Some(_), Some(_)) => return Err("give either --gamma or --alpha, not both".into()),
    };

    let mut spec = PointSpec::new(state, drive);
    spec.branch = parse_branch(&args.branch)?;
    spec.oracle = args.oracle;
    spec.steps = args.steps;
    spec.cap = args.cap;
    match gphase_cli::point::run_point(&spec) {
        Ok(text) => {
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_er(args: ErArgs) -> Result<ExitCode, String> {
    match parse_family(&args.family)? {
        SweepFamily::S => {
            if let Some(r) = args.r {
                let e = er_s_state(r).map_err(|e| e.to_string())?;
                println!("E_R: {e:.16e}");
            } else if let Some(target) = args.er {
                let r = inverse_er_s(target).map_err(|e| e.to_string())?;
                println!("r: {r:.16e}");
            } else {
                return Err("er --family s needs --r or --er".into());
            }
        }
        SweepFamily::W => {
            let n = args.n.ok_or("er --family w needs --n")?;
            let k = args.k.ok_or("er --family w needs --k")?;
            let e = er_w_state(n, k).map_err(|e| e.to_string())?;
            println!("E_R: {e:.16e}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
