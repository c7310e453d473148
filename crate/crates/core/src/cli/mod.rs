//! The `covercraft` command-line front-end.
//!
//! Every command that writes files also writes a [`RunManifest`] next to its
//! outputs; `covercraft replay <manifest>` re-runs the recorded command and
//! checks that the outputs hash to the recorded values.
//!
//! Exit codes: 0 success, 1 replay mismatch, 2 usage or input error,
//! 3 capacity guard, 4 numerical failure.

mod commands;
mod manifest;

pub use manifest::{sha256_file, sha256_hex, write_atomic, FileRecord, OutputRecord, RunManifest};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "COVERCRAFT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "covercraft", version, about = "Learn fuzzy covers of point clouds and study their nerves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Sample a synthetic point cloud to CSV.
    Gen(GenArgs),
    /// Learn a fuzzy cover of a point cloud.
    Cover(CoverArgs),
    /// Threshold a cover and export its nerve.
    Nerve(NerveArgs),
    /// Persistence barcode of a fuzzy nerve, Rips or witness filtration.
    Barcode(BarcodeArgs),
    /// Homology recovery quotient of a barcode.
    Hrq(HrqArgs),
    /// Run a benchmark suite and write the comparison table.
    Bench(BenchArgs),
    /// Re-run the command recorded in a manifest and compare outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Sphere2,
    Sphere3,
    Circle,
    Blobs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Number of points.
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphArg {
    /// Unit-weight k-nearest-neighbor graph.
    Unit,
    Umap,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CoverArgs {
    /// Point cloud CSV (one point per row, no header).
    pub input: PathBuf,
    #[arg(long)]
    pub n_cov: usize,
    #[arg(long, default_value_t = 15)]
    pub n_neigh: usize,
    #[arg(long, default_value_t = 10.0)]
    pub reg: f64,
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    #[arg(long, default_value_t = 500)]
    pub n_epoch: usize,
    #[arg(long, default_value_t = 5.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = GraphArg::Umap)]
    pub graph: GraphArg,
    /// Recompute the H0 pairing only every this many epochs.
    #[arg(long, default_value_t = 1)]
    pub persistence_refresh: usize,
    /// Run all epochs even after the loss has converged.
    #[arg(long)]
    pub no_early_stop: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NerveFormat {
    Dot,
    Graphml,
    Json,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NerveArgs {
    /// Fuzzy cover CSV, or a cover as JSON (`.json`).
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    #[arg(long, value_enum, default_value_t = NerveFormat::Dot)]
    pub format: NerveFormat,
    /// One label per point, one per line; adds label histograms to vertices.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarcodeSource {
    /// Filtered nerve of a fuzzy cover CSV.
    FuzzyNerve,
    /// Vietoris–Rips on a point cloud CSV.
    Rips,
    /// Witness complex (v = 0) on a point cloud CSV.
    Witness,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BarcodeArgs {
    pub source: BarcodeSource,
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub max_hom_dim: usize,
    /// Largest simplex dimension built (default: max-hom-dim + 1).
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Rips: largest simplex diameter kept.
    #[arg(long)]
    pub max_radius: Option<f64>,
    /// Witness: landmarks form an eps-net.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Witness: number of furthest-point landmarks (when no --eps).
    #[arg(long)]
    pub landmarks: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Witness with --eps: check that the Ball Mapper nerve at eps equals the
    /// eps-sublevel complex.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HrqArgs {
    /// Barcode CSV with header `dim,birth,death`.
    pub input: PathBuf,
    /// Target Betti numbers, e.g. `1,0,1`.
    #[arg(long)]
    pub betti: String,
    /// Also write the result as a one-row CSV.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BenchArgs {
    /// Suite description (TOML).
    pub suite: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Numeric(_) => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    // A global pool may already exist when called from a test process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn absolute(path: &Path) -> PathBuf {
    std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Messages go to stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let result = match cli.command {
        Command::Replay(args) => commands::replay(&absolute(&args.manifest)),
        command => commands::run_recorded(command.absolutized()).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

impl Command {
    /// The same command with every path made absolute, so that a manifest
    /// replays from any working directory.
    fn absolutized(self) -> Command {
        match self {
            Command::Gen(a) => Command::Gen(GenArgs { out: absolute(&a.out), ..a }),
            Command::Cover(a) => {
                Command::Cover(CoverArgs { input: absolute(&a.input), out_dir: absolute(&a.out_dir), ..a })
            }
            Command::Nerve(a) => Command::Nerve(NerveArgs {
                input: absolute(&a.input),
                labels: a.labels.as_deref().map(absolute),
                out: absolute(&a.out),
                ..a
            }),
            Command::Barcode(a) => {
                Command::Barcode(BarcodeArgs { input: absolute(&a.input), out: absolute(&a.out), ..a })
            }
            Command::Hrq(a) => {
                Command::Hrq(HrqArgs { input: absolute(&a.input), out: a.out.as_deref().map(absolute), ..a })
            }
            Command::Bench(a) => {
                Command::Bench(BenchArgs { suite: absolute(&a.suite), out_dir: absolute(&a.out_dir) })
            }
            Command::Replay(a) => Command::Replay(ReplayArgs { manifest: absolute(&a.manifest) }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_defaults() {
        let cli = Cli::try_parse_from(["covercraft", "cover", "x.csv", "--n-cov", "4", "--out-dir", "o"]).unwrap();
        let Command::Cover(a) = cli.command else { panic!() };
        assert_eq!((a.n_neigh, a.reg, a.lr, a.n_epoch, a.p), (15, 10.0, 0.1, 500, 5.0));
        assert_eq!(a.graph, GraphArg::Umap);
    }

    #[test]
    fn command_round_trips_through_json() {
        let cli = Cli::try_parse_from(["covercraft", "gen", "sphere2", "100", "--seed", "3", "-o", "a.csv"]).unwrap();
        let json = serde_json::to_string(&cli.command).unwrap();
        let back: Command = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cli.command);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["covercraft", "cover"]), EXIT_USAGE);
        assert_eq!(run(["covercraft", "frobnicate"]), EXIT_USAGE);
    }
}
