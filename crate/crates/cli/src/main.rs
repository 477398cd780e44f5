//! steerkit command line: ingest states and measurements from JSON, run
//! steering analyses, emit machine-readable reports, generate fixture
//! states, and run the acceptance selftest.
//!
//! Exit codes: 0 success, 1 malformed input (JSON or schema violation),
//! 2 analysis precondition failure.

mod json_api;

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use steerkit::error::SteerError;
use steerkit::schema::{self, JsonComplex};
use steerkit::selftest::{run_all, DEFAULT_SEED};
use steerkit::tol::Tolerances;

use json_api::{build_fixture, run_analysis, AnalysisReport, AnalysisRequest, FixtureSpec};

const EXIT_MALFORMED: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "steerkit",
    version,
    about = "Quantum steering analysis: assemblages, pure steered states, LHS witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an analysis described by a JSON request document.
    Analyze(AnalyzeArgs),
    /// Emit a fixture state document.
    Fixture(FixtureArgs),
    /// Run the acceptance suite and print one pass/fail line per criterion.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Request file; `-` reads standard input.
    #[arg(long)]
    input: String,
    /// Report file; standard output when omitted.
    #[arg(long)]
    output: Option<String>,
    /// Seed override for randomised analyses.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override KEY=VAL (repeatable); keys match the tolerance
    /// field names, e.g. purity, offdiag, kernel.
    #[arg(long = "tol", value_name = "KEY=VAL")]
    tol: Vec<String>,
}

#[derive(Args)]
struct FixtureArgs {
    /// two_qubit_family | qutrit_family | pure_random | product_random
    name: String,
    #[arg(long)]
    eta: Option<f64>,
    /// Real part of z.
    #[arg(long, default_value_t = 0.0)]
    z_re: f64,
    /// Imaginary part of z.
    #[arg(long, default_value_t = 0.0)]
    z_im: f64,
    /// Bob ket for the first branch, as JSON pairs, e.g. [[1,0],[0,0]].
    #[arg(long)]
    beta1: Option<String>,
    /// Bob ket for the second branch.
    #[arg(long)]
    beta2: Option<String>,
    #[arg(long)]
    d_a: Option<usize>,
    #[arg(long)]
    d_b: Option<usize>,
    /// Required for the random fixtures.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the randomised criteria.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer)?;
        Ok(buffer)
    } else {
        fs::read_to_string(path)
    }
}

fn write_output(path: Option<&str>, content: &str) -> std::io::Result<()> {
    match path {
        Some(path) => fs::write(path, content),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn steer_error_exit(e: &SteerError) -> u8 {
    if e.is_schema_violation() {
        EXIT_MALFORMED
    } else {
        EXIT_PRECONDITION
    }
}

fn parse_tol_overrides(base: Tolerances, flags: &[String]) -> Result<Tolerances, String> {
    let mut tol = base;
    for flag in flags {
        let (key, value) = flag
            .split_once('=')
            .ok_or_else(|| format!("--tol expects KEY=VAL, got `{flag}`"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| format!("--tol {key}: `{value}` is not a number"))?;
        if !tol.set(key, value) {
            return Err(format!("--tol: unknown key `{key}`"));
        }
    }
    Ok(tol)
}

fn cmd_analyze(args: &AnalyzeArgs) -> u8 {
    let raw = match read_input(&args.input) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input);
            return EXIT_MALFORMED;
        }
    };
    let request: AnalysisRequest = match serde_json::from_str(&raw) {
        Ok(request) => request,
        Err(e) => {
            eprintln!("error: malformed request: {e}");
            return EXIT_MALFORMED;
        }
    };
    let tol = match parse_tol_overrides(request.tolerances.unwrap_or_default(), &args.tol) {
        Ok(tol) => tol,
        Err(message) => {
            eprintln!("error: {message}");
            return EXIT_MALFORMED;
        }
    };
    let seed = args.seed.or(request.seed).unwrap_or(0);
    let result: Value = match run_analysis(&request, seed, &tol) {
        Ok(result) => result,
        Err(e) => {
            eprintln!("error: {e}");
            return steer_error_exit(&e);
        }
    };
    let report = AnalysisReport {
        schema_version: schema::SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION"),
        request,
        seed,
        tolerances: tol,
        result,
    };
    let rendered = serde_json::to_string_pretty(&report).expect("report serialises");
    match write_output(args.output.as_deref(), &rendered) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_MALFORMED
        }
    }
}

fn parse_vector_arg(raw: &Option<String>, name: &str) -> Result<Option<Vec<JsonComplex>>, String> {
    match raw {
        None => Ok(None),
        Some(raw) => serde_json::from_str(raw)
            .map(Some)
            .map_err(|e| format!("--{name}: not a JSON vector of [re, im] pairs: {e}")),
    }
}

fn cmd_fixture(args: &FixtureArgs) -> u8 {
    let beta1 = match parse_vector_arg(&args.beta1, "beta1") {
        Ok(v) => v,
        Err(message) => {
            eprintln!("error: {message}");
            return EXIT_MALFORMED;
        }
    };
    let beta2 = match parse_vector_arg(&args.beta2, "beta2") {
        Ok(v) => v,
        Err(message) => {
            eprintln!("error: {message}");
            return EXIT_MALFORMED;
        }
    };
    let spec = FixtureSpec {
        name: args.name.clone(),
        eta: args.eta,
        z: Some([args.z_re, args.z_im]),
        beta1,
        beta2,
        d_a: args.d_a,
        d_b: args.d_b,
        seed: args.seed,
    };
    let rho = match build_fixture(&spec) {
        Ok(rho) => rho,
        Err(e) => {
            eprintln!("error: {e}");
            return steer_error_exit(&e);
        }
    };
    let doc = schema::density_to_doc(&rho);
    let rendered = serde_json::to_string_pretty(&doc).expect("document serialises");
    match write_output(args.output.as_deref(), &rendered) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_MALFORMED
        }
    }
}

fn cmd_selftest(args: &SelftestArgs) -> u8 {
    let results = run_all(args.seed);
    let mut all_passed = true;
    for result in &results {
        println!("{}", result.summary_line());
        all_passed &= result.passed;
    }
    if all_passed {
        println!("selftest: all {} criteria passed", results.len());
        0
    } else {
        println!("selftest: FAILURES present");
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Fixture(args) => cmd_fixture(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    ExitCode::from(code)
}
