//! `agmon`: lattice inequality toolkit.
//!
//! Four subcommands: `constants` prints the exact inequality constants,
//! `verify` certifies inequalities on files or random sequences, `trace`
//! replays the proof bookkeeping that assembles the constant, and `search`
//! hunts for near-extremal sequences.
//!
//! Exit status contract: 0 all checks passed, 1 an inequality check or
//! bookkeeping verdict failed, 2 usage or parse error. JSON output is
//! deterministic byte-for-byte for identical invocations; table output is
//! for humans and carries no stability promise.

mod cmd_constants;
mod cmd_search;
mod cmd_trace;
mod cmd_verify;
mod emit;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

use emit::Format;

#[derive(Parser)]
#[command(
    name = "agmon",
    version,
    about = "Discrete interpolation inequalities on integer lattices",
    max_term_width = 100
)]
struct Cli {
    /// Output format; json is the stable machine interface.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Relative tolerance for inequality verdicts.
    #[arg(long, global = true, default_value_t = agmon_core::DEFAULT_TOLERANCE, allow_negative_numbers = true)]
    tolerance: f64,

    /// Base RNG seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact constants: kappa, mu, the branch products, and the
    /// per-order term counts.
    Constants {
        /// Lattice dimension d >= 1.
        #[arg(long)]
        d: u32,
        /// Interpolation parameter, 1 <= p <= 2^(d-1).
        #[arg(long, value_parser = parse_u128, conflicts_with = "all_p", required_unless_present = "all_p")]
        p: Option<u128>,
        /// Emit every admissible p (d <= 16).
        #[arg(long)]
        all_p: bool,
    },

    /// Check one inequality on a sequence file or on random sequences.
    Verify {
        /// Sequence file to check (see README for the format).
        #[arg(long, conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Run a randomized suite instead of reading a file.
        #[arg(long)]
        random: bool,
        /// Inequality to check.
        #[arg(long, value_parser = cmd_verify::parse_inequality)]
        inequality: agmon_core::InequalityKind,
        /// Dimension for --random.
        #[arg(long)]
        d: Option<usize>,
        /// Interpolation parameter for the main inequality.
        #[arg(long, value_parser = parse_u128)]
        p: Option<u128>,
        /// Number of random trials.
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Box extent per axis for random sequences.
        #[arg(long = "box", default_value_t = 12)]
        box_extent: usize,
        /// Random value distribution.
        #[arg(long, value_parser = cmd_verify::parse_distribution, default_value = "gaussian")]
        distribution: agmon_core::Distribution,
    },

    /// Replay the proof bookkeeping: expand the norm terms, cost the
    /// reductions, and compare the total against the closed form.
    Trace {
        /// Lattice dimension, 1..=20 (the expansion has 2^d terms).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
        d: u32,
        /// Interpolation parameter, 1 <= p <= 2^(d-1).
        #[arg(long, value_parser = parse_u128)]
        p: u128,
        /// Additionally check this many randomly sampled reduction plans.
        #[arg(long)]
        plans: Option<u64>,
    },

    /// Maximize the main-inequality ratio over sequences on a box.
    Search {
        /// Lattice dimension d >= 1.
        #[arg(long)]
        d: usize,
        /// Interpolation parameter, 1 <= p <= 2^(d-1).
        #[arg(long, value_parser = parse_u128)]
        p: u128,
        /// Box extent per axis.
        #[arg(long = "box", default_value_t = 21)]
        box_extent: usize,
        /// Independent restarts (restart 0 is a centered impulse, restart 1
        /// a centered bump).
        #[arg(long, default_value_t = 8)]
        restarts: u64,
        /// Ascent iterations per restart.
        #[arg(long, default_value_t = 5000)]
        iters: u64,
        /// Initial perturbation step.
        #[arg(long, default_value_t = 0.25)]
        step_init: f64,
        /// Write the best sequence to this file in the sequence format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A usage or parse problem detected after clap: reported on stderr, exit 2.
pub struct UsageError(pub String);

impl From<agmon_core::Error> for UsageError {
    fn from(e: agmon_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// `u128` argument parser; the built-in ranged parsers stop at 64 bits.
fn parse_u128(s: &str) -> Result<u128, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() {
    let cli = Cli::parse();
    if cli.format == Format::Table {
        eprintln!("note: table output is informational; use --format json for a stable interface");
    }
    let outcome = match &cli.command {
        Command::Constants { d, p, all_p } => cmd_constants::run(cli.format, *d, *p, *all_p),
        Command::Verify {
            input,
            random,
            inequality,
            d,
            p,
            count,
            box_extent,
            distribution,
        } => cmd_verify::run(cmd_verify::Args {
            format: cli.format,
            tolerance: cli.tolerance,
            seed: cli.seed,
            input: input.clone(),
            random: *random,
            inequality: *inequality,
            d: *d,
            p: *p,
            count: *count,
            box_extent: *box_extent,
            distribution: *distribution,
        }),
        Command::Trace { d, p, plans } => cmd_trace::run(cli.format, cli.seed, *d, *p, *plans),
        Command::Search {
            d,
            p,
            box_extent,
            restarts,
            iters,
            step_init,
            out,
        } => cmd_search::run(cmd_search::Args {
            format: cli.format,
            tolerance: cli.tolerance,
            seed: cli.seed,
            d: *d,
            p: *p,
            box_extent: *box_extent,
            restarts: *restarts,
            iters: *iters,
            step_init: *step_init,
            out: out.clone(),
        }),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
