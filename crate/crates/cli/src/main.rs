//! `uc` — command-line front end for the utility-configuration solver.
//!
//! Subcommands: `solve` (scheme or brute force), `eval` (exact evaluation of
//! one configuration), `align` (alignment profile as CSV plus a verdict),
//! `reduce` (source problems to the canonical instance schema), `gen`
//! (seeded instance generators and gadgets), `grid` (multiplicative price
//! grid), and `preprocess` (mass splitting with an optional provenance
//! sidecar).
//!
//! Exit codes: 0 success, 2 validation failure, 3 capability limits,
//! 4 internal invariant breach.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

mod run;

#[derive(Parser)]
#[command(name = "uc", version, about = "Utility-configuration solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Ptas,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    Delegation,
    Pricing,
    Assortment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlignMethod {
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write a JSON report.
    Solve {
        /// Path to an instance in the canonical JSON schema.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMethod::Ptas)]
        method: SolveMethod,
        /// Bin count M of the scheme (>= 6).
        #[arg(long, default_value_t = 6)]
        bins: u32,
        /// Truncate the bin-profile stream (benchmarking mode; the
        /// approximation guarantee needs the full stream).
        #[arg(long)]
        profile_cap: Option<u64>,
        /// Worker threads for the profile loop; 1 = serial.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exactly evaluate one configuration.
    Eval {
        input: PathBuf,
        /// Comma-separated configuration indices, one per action.
        #[arg(long)]
        config: String,
    },
    /// Alignment profile (CSV) and verdict for a configuration or the
    /// brute-force optimum.
    Align {
        input: PathBuf,
        /// Comma-separated configuration indices; omit to solve by brute
        /// force first.
        #[arg(long)]
        config: Option<String>,
        /// Explicit request to solve by brute force (the default when
        /// --config is omitted).
        #[arg(long, value_enum, conflicts_with = "config")]
        method: Option<AlignMethod>,
        /// Alignment bound: "2", "sqrt" (max(4, 4/sqrt(q))), or a path to a
        /// JSON list of [q, f] breakpoints (step function, non-increasing).
        #[arg(long, default_value = "2")]
        f: String,
        /// Write the CSV here; verdict JSON then goes to stdout. Without
        /// this the CSV goes to stdout and the verdict to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a source problem into the canonical instance schema.
    Reduce {
        #[arg(long, value_enum)]
        from: SourceKind,
        input: PathBuf,
        /// For pricing: replace every item's price set with a multiplicative
        /// grid at this accuracy.
        #[arg(long)]
        eps: Option<f64>,
        /// Grid range override; defaults to the positive support range.
        #[arg(long)]
        umin: Option<f64>,
        #[arg(long)]
        umax: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance or gadget.
    Gen {
        /// generic-uc | delegation | delegation-random-bias |
        /// delegation-outside | pricing | assortment | tightness |
        /// partition | partition-delegation
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Agent-utility range "lo,hi".
        #[arg(long, default_value = "0,8")]
        range: String,
        /// Probability denominator: probabilities are multiples of 1/D.
        #[arg(long, default_value_t = 12)]
        grid: u32,
        /// Scale parameter of the tightness gadget.
        #[arg(long, default_value_t = 4)]
        t: u32,
        /// Comma-separated positive integers for the partition gadget.
        #[arg(long)]
        integers: Option<String>,
        /// Tie-breaking offset for the partition gadget.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the multiplicative price grid covering [umin, umax].
    Grid {
        #[arg(long)]
        umin: f64,
        #[arg(long)]
        umax: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split masses and perturb utilities; optionally record provenance.
    Preprocess {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        bins: u32,
        /// Explicit perturbation; omitted = derived automatically.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write {delta, provenance} JSON here for debugging.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
