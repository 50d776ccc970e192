//! `g5`: command-line front end for the verification kernels. Every
//! subcommand writes one JSON run manifest to `--out` (default stdout).

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use g5_core::ErrorKind;

#[derive(Parser, Debug)]
#[command(name = "g5", version, about = "Verification toolkit for maximal genus-5 curves of discriminant -19")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the JSON manifest here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Threads {
    /// Worker threads (default: $G5_THREADS, else all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fast,
    Naive,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prime powers q <= q-max with discriminant d.
    ScanDisc {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        q_max: u64,
        #[command(flatten)]
        threads: Threads,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive trigonal quintic search over all (a3, a4).
    Trigonal {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
        #[command(flatten)]
        threads: Threads,
        /// Directory for resumable JSON-lines checkpoints.
        #[arg(long, value_name = "DIR")]
        checkpoint: Option<PathBuf>,
        /// Stop after this many new chunks (leaves a resumable checkpoint).
        #[arg(long, hide = true)]
        stop_after: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Points of one three-quadric system in P^4(F_q).
    QuadricCount {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        case: u8,
        /// Nine comma-separated coefficient codes a1..a9.
        #[arg(long, value_delimiter = ',')]
        coeffs: Vec<u64>,
        #[command(flatten)]
        threads: Threads,
        #[command(flatten)]
        output: Output,
    },
    /// Random search for systems attaining the genus-5 bound.
    QuadricSearch {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        case: u8,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Invariant quadric triple at [1:zeta:..:zeta^4].
    SingularTriple {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        output: Output,
    },
    /// 5 does not divide #PGL_3(F_q) for q = 2, 3 mod 5.
    Pgl3 {
        #[arg(long)]
        q_max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Indices with u_n = 1 and u_n = -1.
    Recurrence {
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Strassmann certificates for g_1 and g_2.
    Strassmann {
        #[arg(long, default_value_t = 10)]
        precision: u32,
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Solutions of x^2 + 19 = 4 * 5^n.
    Diophantine {
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check the lattice data H_1, R, S.
    HermitianVerify {
        #[command(flatten)]
        output: Output,
    },
    /// Reduce R and S modulo a split prime q.
    Reduce {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::ScanDisc { output, .. }
            | Command::Trigonal { output, .. }
            | Command::QuadricCount { output, .. }
            | Command::QuadricSearch { output, .. }
            | Command::SingularTriple { output, .. }
            | Command::Pgl3 { output, .. }
            | Command::Recurrence { output, .. }
            | Command::Strassmann { output, .. }
            | Command::Diophantine { output, .. }
            | Command::HermitianVerify { output }
            | Command::Reduce { output, .. } => output,
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<g5_core::Error>().map(g5_core::Error::kind) {
        Some(ErrorKind::InvalidInput) | None => 2,
        Some(ErrorKind::Resource) => 3,
        Some(ErrorKind::Indeterminate) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.command.output().out.clone();
    match commands::run(&cli.command) {
        Ok(manifest) => {
            if let Err(e) = manifest::write_json(&manifest, out.as_deref()) {
                eprintln!("error: cannot write manifest: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(manifest.verdict.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
