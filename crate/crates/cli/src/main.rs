mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Picard lattices, Galois cohomology and Brauer–Manin certificates for
/// K3 surfaces w² = Ax⁶ + By⁶ + Cz⁶.
#[derive(Parser, Debug)]
#[command(name = "k3bm", version)]
pub struct Cli {
    /// Print machine-readable JSON instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximal p-adic depth of residue-class covers.
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision_cap: u32,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory for cached Gram and action matrices.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Also write the JSON output to this file.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gram matrix of d1..d20 (or of M′) and its discriminant group.
    Gram(GramArgs),
    /// Saturation candidates, the pairing with D′ over F25 and the fiber check.
    Saturation,
    /// H¹ of the Picard lattice for a surface or a named subgroup.
    Cohomology(CohomologyArgs),
    /// Full Brauer–Manin verdict with a certificate.
    Verify(VerifyArgs),
    /// Search the quaternion or the cubic family.
    Search(SearchArgs),
    /// Sieved search for rational points of bounded height.
    Points(PointsArgs),
    /// Randomized Hilbert-symbol identities, driven by --seed.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct GramArgs {
    /// Use the basis d1..d19, d′20 of M′.
    #[arg(long)]
    pub alternate: bool,
    /// Write the Gram matrix as JSON and check that it reads back identically.
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Read the Gram matrix from JSON instead of computing it.
    #[arg(long, conflicts_with = "export")]
    pub import: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct CohomologyArgs {
    /// Coefficients A B C.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
    pub surface: Option<Vec<i64>>,
    /// One of generic, 3abc, -3a, -3b, -3c, k, cube.
    #[arg(long, allow_hyphen_values = true)]
    pub subgroup: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct VerifyArgs {
    /// Quaternion family parameters a b c.
    #[arg(long, num_args = 3, value_names = ["a", "b", "c"], allow_negative_numbers = true)]
    pub quat: Option<Vec<String>>,
    /// Prime p for w² = −3x⁶ + p y⁶ + 224p z⁶.
    #[arg(long)]
    pub cubic: Option<String>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Odd triples with |a|, |b|, |c| ≤ bound.
    #[arg(long, requires = "bound", conflicts_with = "cubic")]
    pub quat: bool,
    #[arg(long)]
    pub bound: Option<i64>,
    /// Primes p = 97 + kM until `count` certify.
    #[arg(long, requires = "count")]
    pub cubic: bool,
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true, required = true)]
    pub surface: Vec<String>,
    #[arg(long)]
    pub bound: u64,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Number of random pairs.
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            log::warn!("could not size the worker pool: {}", e);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let body = serde_json::json!({ "status": "error", "error": e.to_string() });
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&body).unwrap());
            }
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
