mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gpdef::biserial::Membership;
use gpdef::deform::DEFAULT_LEVEL_BOUND;

/// Exact homological algebra and deformation rings for quiver algebras.
///
/// Exit codes: 0 success, 1 other failure, 2 unreadable or invalid input,
/// 3 non-admissible relations or search cap exceeded, 4 algebra not gentle.
#[derive(Parser, Debug)]
#[command(name = "gpdef", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Working field (Q, F101, ...); overrides the algebra file.
    #[arg(long, global = true, env = "TOOL_FIELD")]
    pub field: Option<String>,
    /// How "βα ∈ ρ" is read in the biserial conditions.
    #[arg(long, global = true, value_enum, default_value_t = MembershipArg::Ideal)]
    pub membership: MembershipArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipArg {
    Ideal,
    Literal,
}

impl From<MembershipArg> for Membership {
    fn from(m: MembershipArg) -> Membership {
        match m {
            MembershipArg::Ideal => Membership::Ideal,
            MembershipArg::Literal => Membership::Literal,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension, biserial/gentle conditions and Gorenstein data of an algebra.
    Check { algebra: PathBuf },
    /// Indecomposable Gorenstein-projectives of a gentle algebra.
    Classify { algebra: PathBuf },
    /// Dimension of Hom(m, n).
    Hom {
        algebra: PathBuf,
        m: String,
        n: String,
        /// Also print a basis.
        #[arg(long)]
        basis: bool,
    },
    /// Dimension of Ext^i(m, n).
    Ext {
        algebra: PathBuf,
        m: String,
        n: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Ω^n m, optionally identified against a list of candidates.
    Syzygy {
        algebra: PathBuf,
        m: String,
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// JSON list of {"label", "module"} candidates.
        #[arg(long)]
        identify: Option<PathBuf>,
        /// Keep projective summands of the syzygy.
        #[arg(long)]
        no_strip: bool,
    },
    /// Versal deformation report.
    Deform {
        algebra: PathBuf,
        m: String,
        #[arg(long, default_value_t = DEFAULT_LEVEL_BOUND)]
        level_bound: usize,
        /// Compare with the report for Ω m.
        #[arg(long)]
        compare_syzygy: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
