#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod fmt;
mod input;

/// Ricci pinching on left-invariant metrics of solvable Lie groups.
///
/// Inputs (`--matrix`, `--bracket`, `--config`, `--type`, `--direction`) are
/// file paths or inline JSON starting with '[' or '{'. SOLVPINCH_TOL
/// overrides the default tolerance 1e-9.
#[derive(Parser, Debug)]
#[command(name = "solvpinch", version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Validate the input and report structural properties
    Check(Subject),
    /// Ricci operator, scalar curvature and F
    Ricci {
        #[command(flatten)]
        subject: Subject,
        #[command(flatten)]
        out: Output,
    },
    /// F = scal^2 / |Ric|^2
    Pinch(Subject),
    /// Gradient of F at an almost-abelian matrix
    Grad {
        #[command(flatten)]
        subject: Subject,
        #[command(flatten)]
        out: Output,
    },
    /// Orbit and global criticality
    Critical(Subject),
    /// Second variation at an orbit-critical matrix
    Hessian {
        #[command(flatten)]
        subject: Subject,
        /// Symmetric direction B (default: normalized [A, A^t])
        #[arg(long)]
        direction: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random directions tried by the classifier
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Orbit flows (matrix) or the nilsoliton search (bracket)
    Flow {
        #[command(flatten)]
        subject: Subject,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[command(flatten)]
        flow: FlowArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Solvsoliton test and decomposition
    Soliton(Subject),
    /// Beta operator of a nilpotent bracket, or invariants of a given type
    Beta {
        #[command(flatten)]
        subject: Subject,
        /// Type eigenvalues as a JSON list
        #[arg(long = "type")]
        beta_type: Option<String>,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Pinching bound n - m + q for unimodular groups
    Bound {
        /// Bracket whose last m coordinates span the nilradical
        #[arg(long)]
        bracket: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: usize,
        /// Type eigenvalues as a JSON list (omit for an abelian nilradical)
        #[arg(long = "type")]
        beta_type: Option<String>,
    },
    /// Recompute the types of the eight 5-dimensional nilsolitons
    Table1 {
        /// 1-based rows to run, comma separated (default: all)
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<usize>>,
        #[command(flatten)]
        flow: FlowArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Sweep a named family against its closed form
    Family {
        #[arg(long)]
        family: String,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "t_range")]
        t: Option<f64>,
        /// "t_min,t_max"
        #[arg(long, allow_hyphen_values = true)]
        t_range: Option<String>,
        /// Number of sample points, endpoints included
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Ambient dimension (pads A with zeros)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: Output,
    },
}

/// At most one of --matrix, --bracket, --family.
#[derive(Args, Debug, Clone)]
pub struct Subject {
    /// Almost-abelian matrix: {"n": n, "A": [[...]]} or a bare array
    #[arg(long, conflicts_with_all = ["bracket", "family"])]
    pub matrix: Option<String>,
    /// Bracket: {"dim": n, "entries": [[i, j, k, v], ...]}, 1-based
    #[arg(long, conflicts_with = "family")]
    pub bracket: Option<String>,
    /// Named family: a_t, b_t, c_t, d_t, e_t, jordan_t
    #[arg(long, requires = "t")]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true, requires = "family")]
    pub t: Option<f64>,
    /// Ambient dimension for a family member
    #[arg(long, requires = "family")]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct FlowArgs {
    /// FlowConfig as JSON; unspecified fields keep their defaults
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iteration cap, overriding the config
    #[arg(long)]
    pub steps: Option<usize>,
    /// Exit 4 on non-convergence or mismatch
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Table,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ascent,
    DoubleBracket,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.verb) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
