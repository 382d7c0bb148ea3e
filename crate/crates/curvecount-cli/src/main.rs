//! Command-line front end: surface validation, morphism counts, identity
//! certification, the leading constant and cone coverage tables.

mod commands;

use clap::{Args, Parser, Subcommand};
use curvecount::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "curvecount", version, about = "Counting rational curves on surfaces with a linear Cox relation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a surface and report its invariants and the face hypothesis.
    Validate(Common),
    /// Morphism counts for every degree vector up to an anticanonical bound.
    Count(CountArgs),
    /// Certify the generating-series identities and local closed forms.
    Certify(CertifyArgs),
    /// Dual-cone volume and coverage ratios over a λ grid.
    Cones(ConesArgs),
    /// Partial Euler products of the leading constant with tail bounds.
    Gamma(GammaArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Catalog name or path to a TOML/JSON surface document.
    #[arg(long, default_value = "sextic_a1")]
    pub surface: String,
    /// Directory searched for catalog names.
    #[arg(long, env = "CURVECOUNT_CATALOG")]
    pub catalog: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Largest ⟨y, −K⟩.
    #[arg(long, default_value_t = 4)]
    pub bound: i64,
    /// Add the brute-force torsor count and fail on any mismatch.
    #[arg(long)]
    pub oracle: bool,
    /// Maximum number of enumerated terms per degree vector.
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Truncation cap of the local series.
    #[arg(long, default_value_t = 6)]
    pub cap: u32,
    /// Skip the numerator grid, which dominates the running time.
    #[arg(long)]
    pub skip_grid: bool,
    /// Add one to a coefficient of the closed form H_{1,0} before comparing.
    #[arg(long, hide = true)]
    pub perturb: bool,
}

#[derive(Args, Debug)]
pub struct ConesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated λ values, as integers, fractions or decimals.
    #[arg(long, default_value = "0,1/10,1/5,3/10,2/5,1/2,3/5,7/10,4/5,9/10,1")]
    pub lambda_grid: String,
    /// Restrict the union to one J-position j₀ instead of all labelings.
    #[arg(long)]
    pub j0: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Truncation degree B of the Euler product.
    #[arg(long, default_value_t = 8)]
    pub bound: u32,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Check(_) => 1,
        Error::Input { .. } | Error::Io(_) => 2,
        Error::Budget(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = match &cli.command {
        Command::Validate(c) => c.jobs,
        Command::Count(a) => a.common.jobs,
        Command::Certify(a) => a.common.jobs,
        Command::Cones(a) => a.common.jobs,
        Command::Gamma(a) => a.common.jobs,
    };
    if jobs > 0 {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let result = match cli.command {
        Command::Validate(c) => commands::validate(&c),
        Command::Count(a) => commands::count(&a),
        Command::Certify(a) => commands::certify(&a),
        Command::Cones(a) => commands::cones(&a),
        Command::Gamma(a) => commands::gamma(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
