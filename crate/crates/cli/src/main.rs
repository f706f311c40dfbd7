//! Command line front end for the geometric entanglement toolkit.
//!
//! Four subcommands cover the library surface:
//!
//! * `compute` runs the alternating power iteration on a pure state and
//!   reports the entanglement eigenvalue `lambda_max`, its square, the
//!   geometric measure `E_sin2 = 1 - lambda_max^2`, and the closest product
//!   state.
//! * `witness` builds the witness `W = lambda2 * I - |psi><psi|` for a state,
//!   prints the admissible window `[lambda2_max, 1)`, and optionally writes
//!   the witness to a JSON file.
//! * `scan` evaluates the two-witness detector over a mixing grid and writes
//!   it as CSV.
//! * `verify` checks a witness file against sampled product states and a
//!   target state or mixture.
//!
//! Exit codes: 0 success, 1 bad input or I/O failure, 2 solver did not
//! converge (values are still printed), 3 requested witness parameter falls
//! outside the admissible window, 4 the witness fails positivity on product
//! states, 5 the witness does not detect the requested target.
//!
//! All randomness is seeded, so a command repeated with the same arguments
//! produces byte-identical output.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use gme_core::mixed::scan_grid;
use gme_core::solver::{
    entanglement_eigenvalue, SolverConfig, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS, DEFAULT_SEED,
    DEFAULT_TOL,
};
use gme_core::state::{
    bell, dicke, ghz, read_state_file, w, DensityMatrix, PartyShape, ProductState, PureState,
};
use gme_core::witness::{
    make_witness, read_witness_file, verify_conditions, write_witness_file, Verdict, Witness,
};

const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Parser)]
#[command(name = "gme", version, about = "Geometric measure of entanglement toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the entanglement eigenvalue and geometric measure of a state
    Compute(ComputeArgs),
    /// Build an entanglement witness from a state
    Witness(WitnessArgs),
    /// Scan the two-witness detector over the W / flipped-W mixing grid
    Scan(ScanArgs),
    /// Check a witness file against sampled product states and a target
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolverOpts {
    /// Convergence tolerance on the eigenvalue and stationarity residual
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Maximum sweeps per start
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Number of random restarts besides the deterministic basis start
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Seed for the restart generator
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl SolverOpts {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iters: self.max_iters,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// State to analyze: ghz:<n>, w:<n>, dicke:<n>:<k>, bell, or a JSON file
    #[arg(long)]
    state: String,
    #[command(flatten)]
    solver: SolverOpts,
    /// Write a machine-readable run manifest to this path
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    /// State the witness is built from: builtin name or a JSON file
    #[arg(long)]
    state: String,
    /// Witness parameter lambda2; defaults to the solved lambda2_max
    #[arg(long)]
    lambda2: Option<f64>,
    /// Write the witness to this JSON file
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverOpts,
    /// Write a machine-readable run manifest to this path
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Number of grid points along the mixing parameter x
    #[arg(long, default_value_t = 101)]
    nx: usize,
    /// Number of grid points along the witness combination weight y
    #[arg(long, default_value_t = 101)]
    ny: usize,
    /// CSV output path
    #[arg(long)]
    out: PathBuf,
    /// Write a machine-readable run manifest to this path
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Witness JSON file to check
    #[arg(long)]
    witness: PathBuf,
    /// Target: builtin name, maxmixed:<n>, or a state JSON file
    #[arg(long)]
    state: String,
    /// Number of random product states sampled for the positivity check
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Seed for the product state sampler
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write a machine-readable run manifest to this path
    #[arg(long)]
    manifest: Option<PathBuf>,
}

/// Errors surfaced by the command layer: library errors plus argument
/// strings that never reach the library.
enum CliError {
    Core(gme_core::Error),
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(err) => err.fmt(f),
            CliError::Input(msg) => msg.fmt(f),
        }
    }
}

impl From<gme_core::Error> for CliError {
    fn from(err: gme_core::Error) -> Self {
        CliError::Core(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Core(err.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Core(err.into())
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Input(_) => 1,
        CliError::Core(core) => match core {
            gme_core::Error::DidNotConverge { .. } => 2,
            gme_core::Error::WindowBelow { .. } | gme_core::Error::WindowAbove { .. } => 3,
            _ => 1,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Compute(args) => run_compute(args),
        Command::Witness(args) => run_witness(args),
        Command::Scan(args) => run_scan(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Formats a real with twelve fixed decimals, folding negative zero into
/// plain zero so repeated runs stay byte-identical.
fn f12(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.12}")
}

fn c12(value: Complex64) -> String {
    let re = if value.re == 0.0 { 0.0 } else { value.re };
    let im = if value.im == 0.0 { 0.0 } else { value.im };
    format!("{re:.12}{im:+.12}i")
}

fn print_factors(product: &ProductState) {
    println!("closest product state:");
    for (party, factor) in product.factors().iter().enumerate() {
        let entries: Vec<String> = factor.iter().map(|&c| c12(c)).collect();
        println!("  party {party}: {}", entries.join("  "));
    }
}

/// Parses a pure state argument: a builtin family name or a path to a state
/// JSON file. Anything that starts like a builtin but fails to parse is
/// rejected rather than treated as a filename.
fn parse_state_arg(arg: &str) -> Result<PureState, CliError> {
    fn count(text: &str, what: &str) -> Result<usize, CliError> {
        text.parse::<usize>()
            .map_err(|_| CliError::Input(format!("invalid {what} in state name: {text:?}")))
    }
    if arg == "bell" {
        return Ok(bell());
    }
    if let Some(rest) = arg.strip_prefix("ghz:") {
        return Ok(ghz(count(rest, "party count")?)?);
    }
    if let Some(rest) = arg.strip_prefix("w:") {
        return Ok(w(count(rest, "party count")?)?);
    }
    if let Some(rest) = arg.strip_prefix("dicke:") {
        let (n, k) = rest.split_once(':').ok_or_else(|| {
            CliError::Input(format!("dicke states need two parameters, got {arg:?}"))
        })?;
        return Ok(dicke(count(n, "party count")?, count(k, "excitation count")?)?);
    }
    read_state_file(arg)
        .map_err(|err| CliError::Input(format!("cannot load state file {arg:?}: {err}")))
}

/// Parses a verify target: any pure state argument, or `maxmixed:<n>` for
/// the maximally mixed state on `n` qubits.
fn parse_target_arg(arg: &str) -> Result<DensityMatrix, CliError> {
    if let Some(rest) = arg.strip_prefix("maxmixed:") {
        let n = rest.parse::<usize>().map_err(|_| {
            CliError::Input(format!("invalid party count in target name: {rest:?}"))
        })?;
        return Ok(DensityMatrix::maximally_mixed(PartyShape::qubits(n)?)?);
    }
    let psi = parse_state_arg(arg)?;
    Ok(DensityMatrix::from_pure(&psi)?)
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    seed: u64,
    tool_version: String,
    results: BTreeMap<String, f64>,
}

impl RunManifest {
    fn new(command: &str, seed: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            results: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    fn result(&mut self, key: &str, value: f64) {
        self.results.insert(key.to_string(), value);
    }

    fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

fn run_compute(args: ComputeArgs) -> Result<u8, CliError> {
    let psi = parse_state_arg(&args.state)?;
    let config = args.solver.config();
    let result = entanglement_eigenvalue(&psi, &config)?;

    println!("state: {}", args.state);
    println!("parties: {}  dims: {:?}", psi.shape().party_count(), psi.shape().dims());
    println!("lambda_max: {}", f12(result.lambda_max));
    println!("lambda2_max: {}", f12(result.lambda_max.powi(2)));
    println!("e_sin2: {}", f12(result.e_sin2));
    println!("converged: {}", result.converged);
    println!("iterations: {}", result.iterations);
    println!("starts_agreeing: {}", result.starts_agreeing);
    print_factors(&result.closest);

    if let Some(path) = &args.manifest {
        let mut manifest = RunManifest::new("compute", config.seed);
        manifest.param("state", &args.state);
        manifest.param("tol", config.tol);
        manifest.param("max_iters", config.max_iters);
        manifest.param("restarts", config.restarts);
        manifest.param("converged", result.converged);
        manifest.result("lambda_max", result.lambda_max);
        manifest.result("lambda2_max", result.lambda_max.powi(2));
        manifest.result("e_sin2", result.e_sin2);
        manifest.result("iterations", result.iterations as f64);
        manifest.result("starts_agreeing", result.starts_agreeing as f64);
        manifest.write(path)?;
        println!("manifest: {}", path.display());
    }

    Ok(if result.converged { 0 } else { 2 })
}

fn run_witness(args: WitnessArgs) -> Result<u8, CliError> {
    let psi = parse_state_arg(&args.state)?;
    let config = args.solver.config();
    let solved = entanglement_eigenvalue(&psi, &config)?;
    let lambda2_max = solved.lambda_max.powi(2);

    println!("state: {}", args.state);
    println!("lambda2_max: {}", f12(lambda2_max));
    println!("window: [{}, 1)", f12(lambda2_max));
    if !solved.converged {
        println!("converged: false");
        println!("witness not written: the solver did not converge");
        return Ok(2);
    }

    let lambda2 = args.lambda2.unwrap_or(lambda2_max);
    let witness = make_witness(&psi, lambda2, lambda2_max)?;
    let detector = witness.detector_pure(&psi)?;
    println!("lambda2: {}", f12(lambda2));
    println!("detector on state: {}", f12(detector));
    if let Some(out) = &args.out {
        write_witness_file(out, &witness)?;
        println!("witness file: {}", out.display());
    }

    if let Some(path) = &args.manifest {
        let mut manifest = RunManifest::new("witness", config.seed);
        manifest.param("state", &args.state);
        manifest.param("tol", config.tol);
        manifest.param("max_iters", config.max_iters);
        manifest.param("restarts", config.restarts);
        if let Some(out) = &args.out {
            manifest.param("out", out.display());
        }
        manifest.result("lambda2_max", lambda2_max);
        manifest.result("lambda2", lambda2);
        manifest.result("detector", detector);
        manifest.write(path)?;
        println!("manifest: {}", path.display());
    }

    Ok(0)
}

fn run_scan(args: ScanArgs) -> Result<u8, CliError> {
    let grid = scan_grid(args.nx, args.ny)?;
    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    fs::write(&args.out, &csv)?;

    let (ix, iy, min) = grid.min_cell();
    println!("grid: {}x{}", args.nx, args.ny);
    println!("csv: {}", args.out.display());
    println!("min={} at x={} y={}", f12(min), f12(grid.x(ix)), f12(grid.y(iy)));

    if let Some(path) = &args.manifest {
        let mut manifest = RunManifest::new("scan", 0);
        manifest.param("nx", args.nx);
        manifest.param("ny", args.ny);
        manifest.param("out", args.out.display());
        manifest.result("min_detector", min);
        manifest.result("min_x", grid.x(ix));
        manifest.result("min_y", grid.y(iy));
        manifest.write(path)?;
        println!("manifest: {}", path.display());
    }

    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let witness: Witness = read_witness_file(&args.witness).map_err(|err| {
        CliError::Input(format!("cannot load witness file {:?}: {err}", args.witness))
    })?;
    let target = parse_target_arg(&args.state)?;
    let report = verify_conditions(&witness, &target, args.samples, args.seed)?;

    println!("witness: {}", args.witness.display());
    if let Some(lambda2) = witness.lambda2() {
        println!("lambda2: {}", f12(lambda2));
    }
    println!("target: {}", args.state);
    println!("samples: {}", report.samples);
    println!("min sampled detector: {}", f12(report.min_detector));
    println!("target detector: {}", f12(report.target_detector));
    println!("verdict: {}", report.verdict);

    if let Some(path) = &args.manifest {
        let mut manifest = RunManifest::new("verify", args.seed);
        manifest.param("witness", args.witness.display());
        manifest.param("state", &args.state);
        manifest.param("samples", args.samples);
        manifest.param("verdict", report.verdict);
        manifest.result("min_detector", report.min_detector);
        manifest.result("target_detector", report.target_detector);
        manifest.write(path)?;
        println!("manifest: {}", path.display());
    }

    Ok(match report.verdict {
        Verdict::Consistent => 0,
        Verdict::ViolatesConditionI => 4,
        Verdict::FailsConditionII => 5,
    })
}
