use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dicrit::error::exit;
use dicrit::verify::{verify, Fault, VerifyConfig};
use dicrit::{commands, Options, Report, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    FlipIntersectionSign,
}

#[derive(Debug, Parser)]
#[command(name = "dicrit", version, about = "Exact invariants of dicritical foliations and pencils of plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for coordinate changes and random sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest residue field degree allowed while resolving.
    #[arg(long, global = true)]
    max_ext_degree: Option<usize>,
    /// Cross-check derived intersection numbers against the resultant oracle.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute every invariant the scene supports.
    Invariants {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Check the bifurcation formula and its corollaries.
    Pencil {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Also check the intersection oracle on this many random germ pairs.
        #[arg(long, default_value_t = 0)]
        oracle_pairs: usize,
        /// Largest total degree of the random germs.
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Derive the combinatorial scene of a polynomial scene.
    Resolve {
        #[arg(long)]
        scene: PathBuf,
    },
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options { seed: cli.seed, max_ext_degree: cli.max_ext_degree, oracle: cli.oracle };
    let result = match &cli.command {
        Command::Verify { count, max_n, oracle_pairs, max_degree, inject_fault } => {
            let cfg = VerifyConfig {
                count: *count,
                seed: cli.seed.unwrap_or(1),
                max_n: *max_n,
                fault: inject_fault.map(|FaultArg::FlipIntersectionSign| Fault::FlipIntersectionSign),
                oracle_pairs: *oracle_pairs,
                max_degree: *max_degree,
            };
            Ok(verify(&cfg))
        }
        Command::Invariants { scene } => Scene::load(scene).and_then(|s| commands::invariants(&s, &opts)),
        Command::Pencil { scene } => Scene::load(scene).and_then(|s| commands::pencil(&s, &opts)),
        Command::Resolve { scene } => Scene::load(scene).and_then(|s| commands::resolve(&s, &opts)),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match (&cli.command, cli.format, &report.replay) {
        (Command::Resolve { .. }, Format::Json, Some(replay)) => println!("{}", replay.to_json()),
        _ => emit(&report, cli.format),
    }
    ExitCode::from(if report.passed { exit::OK } else { exit::VIOLATION } as u8)
}
