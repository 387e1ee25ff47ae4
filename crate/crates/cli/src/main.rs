//! `cfcomm`: command-line front end for the counterfactual communication
//! simulator.
//!
//! Exit codes: 0 success (or counterfactual verdict), 1 domain/runtime
//! error, 2 usage error, 3 counterfactuality verdict false.

mod record;
mod values;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cfcomm::chip::{
    canonical_layout, compile_with, mesh_unitary, simulate_tomography, verify, CompileOptions,
    EquivalenceReport, MeshProgram,
};
use cfcomm::histories::{counterfactuality_report, CounterfactualityReport};
use cfcomm::protocol::{run, sweep};
use cfcomm::{BobAction, ProtocolConfig};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use record::{csv_document, RunRecord};
use values::{AngleValues, KValues};

#[derive(Parser, Debug)]
#[command(name = "cfcomm", version, about = "Chained-Zeno counterfactual communication simulator")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (csv only for `run` and `sweep`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one configuration and print its outcome distribution.
    Run(ProtocolArgs),
    /// Run every (K, delta) pair; K outer, delta inner.
    Sweep(SweepArgs),
    /// Path-history counterfactuality report for one outcome mode.
    Trace(TraceArgs),
    /// Compile onto the MZI mesh and check equivalence with the modal evolution.
    Chip(ChipArgs),
    /// Simulate tomography of Alice's output qubit.
    Tomo(TomoArgs),
}

#[derive(Args, Debug)]
struct ProtocolArgs {
    /// Number of inner cycles.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,

    /// Outer rotation offset delta, radians (phi = pi/2 - delta).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,

    /// Bob's action: block, pass, or split:<beta radians>.
    #[arg(long, value_parser = values::parse_bob)]
    bob: BobAction,

    /// Let Bob act after the last inner rotation as well.
    #[arg(long)]
    final_block: bool,
}

impl ProtocolArgs {
    fn config(&self) -> cfcomm::Result<ProtocolConfig> {
        Ok(ProtocolConfig::new(self.k as usize, self.delta, self.bob)?
            .with_final_block(self.final_block))
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// K values: `n`, `a:b`, `a:b:step`, or a comma list.
    #[arg(long, value_parser = values::parse_k_values)]
    k: KValues,

    /// Delta values, radians: `x`, `a:b:step`, or a comma list.
    #[arg(long, value_parser = values::parse_f64_values, default_value = "0")]
    delta: AngleValues,

    #[arg(long, value_parser = values::parse_bob)]
    bob: BobAction,

    #[arg(long)]
    final_block: bool,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Outcome mode: A, B, C or L<n>.
    #[arg(long)]
    outcome: String,
}

#[derive(Args, Debug)]
struct ChipArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Equivalence tolerance on the max entrywise residual.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Print the program only, without verification.
    #[arg(long)]
    emit_only: bool,

    /// With `--bob pass`, still emit router chains and zero-angle blockers.
    #[arg(long)]
    force_routers: bool,
}

#[derive(Args, Debug)]
struct TomoArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Shots per basis; 0 uses exact expectation values.
    #[arg(long, default_value_t = 100_000)]
    shots: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct Failure(String);

impl From<cfcomm::Error> for Failure {
    fn from(e: cfcomm::Error) -> Self {
        Failure(e.to_string())
    }
}

#[derive(Serialize)]
struct TraceOutput {
    config: ProtocolConfig,
    #[serde(flatten)]
    report: CounterfactualityReport,
}

#[derive(Serialize)]
struct ChipOutput {
    config: ProtocolConfig,
    program: MeshProgram,
    verification: EquivalenceReport,
}

#[derive(Serialize)]
struct TomoOutput {
    config: ProtocolConfig,
    seed: u64,
    #[serde(flatten)]
    result: cfcomm::chip::TomographyResult,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn require_json(format: Option<Format>, command: &str) {
    if format == Some(Format::Csv) {
        Cli::command()
            .error(ErrorKind::InvalidValue, format!("`{command}` only supports --format json"))
            .exit();
    }
}

/// Output text plus whether the command's verdict/check passed.
fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    match &cli.command {
        Command::Run(args) => {
            let config = args.config()?;
            let (_, dist) = run(&config);
            let rec = RunRecord::new(&config, &dist);
            Ok(match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => (csv_document(&[rec]), true),
                Format::Json => (json(&rec), true),
            })
        }
        Command::Sweep(args) => {
            let rows = sweep(&args.k.0, &args.delta.0, args.bob, args.final_block)?;
            let recs: Vec<RunRecord> =
                rows.iter().map(|r| RunRecord::new(&r.config, &r.distribution)).collect();
            Ok(match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => (csv_document(&recs), true),
                Format::Json => (json(&recs), true),
            })
        }
        Command::Trace(args) => {
            require_json(cli.format, "trace");
            let config = args.protocol.config()?;
            let outcome = config.basis().parse_mode(&args.outcome)?;
            let report = counterfactuality_report(&config, outcome)?;
            let ok = report.verdict;
            Ok((json(&TraceOutput { config, report }), ok))
        }
        Command::Chip(args) => {
            require_json(cli.format, "chip");
            let config = args.protocol.config()?;
            let options = CompileOptions { force_bob_stage: args.force_routers };
            let program = compile_with(&config, &canonical_layout(config.k())?, options)?;
            if args.emit_only {
                return Ok((json(&program), true));
            }
            let verification = verify(&mesh_unitary(&program)?, &config, args.tol)?;
            let ok = verification.equivalent;
            Ok((json(&ChipOutput { config, program, verification }), ok))
        }
        Command::Tomo(args) => {
            require_json(cli.format, "tomo");
            let config = args.protocol.config()?;
            let result = simulate_tomography(&config, args.shots, args.seed)?;
            Ok((json(&TomoOutput { config, seed: args.seed, result }), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, ok) = match execute(&cli) {
        Ok(v) => v,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        return ExitCode::SUCCESS;
    }
    match cli.command {
        Command::Trace(_) => ExitCode::from(3),
        _ => {
            eprintln!("error: mesh program is not equivalent within tolerance");
            ExitCode::from(1)
        }
    }
}
