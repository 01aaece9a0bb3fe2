//! Command-line grammar. Every value flag is optional here; defaults and the
//! optional key=value config file are folded in at resolution time so the
//! summary can record the fully resolved configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "signdrift",
    version,
    about = "Simulation and density analysis for dx = -k sign(x) dt + dB"
)]
pub struct Cli {
    /// Plain key=value file supplying defaults; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Monte-Carlo Euler-Maruyama ensemble; writes paths.csv and hist.csv.
    Simulate(SimulateArgs),
    /// Propagate the density recursion; writes density_<n>.csv snapshots.
    EvolveDensity(EvolveArgs),
    /// Closed-form stationary density; writes density.csv and stationary.json.
    Stationary(StationaryArgs),
    /// Compare two density files or a histogram against a stationary density.
    Compare(CompareArgs),
    /// Finite-h generator estimate against the closed-form limit.
    GeneratorCheck(GeneratorArgs),
    /// Transform identity residuals of the shifted density.
    FourierCheck(FourierArgs),
    /// Terminal-variance sweep over a list of gains.
    VarianceSweep(VarianceSweepArgs),
    /// Smoothed stationary densities for a list of sharpness values.
    SmoothSweep(SmoothSweepArgs),
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Drift law: "sign" or "smooth".
    #[arg(long)]
    pub drift: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    /// Sharpness of the smoothed drift (only with --drift smooth).
    #[arg(long = "N")]
    pub sharpness: Option<u32>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Histogram range; both or neither of --hist-lo/--hist-hi.
    #[arg(long, allow_hyphen_values = true)]
    pub hist_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hist_hi: Option<f64>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated snapshot indices, e.g. 158,398,1000.
    #[arg(long)]
    pub snapshots: Option<String>,
    #[arg(long)]
    pub half_span: Option<f64>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub mass_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StationaryArgs {
    /// "laplace" or "smooth".
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long = "N")]
    pub sharpness: Option<u32>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub half_span: Option<f64>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// First density.csv (grid mode).
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Second density.csv (grid mode).
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// hist.csv to compare against a stationary density (histogram mode).
    #[arg(long)]
    pub hist: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long = "N")]
    pub sharpness: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub log_floor: Option<f64>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GeneratorArgs {
    /// Test density: "gaussian" or "laplace".
    #[arg(long)]
    pub density: Option<String>,
    /// Variance of the Gaussian test density.
    #[arg(long)]
    pub var: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub half_span: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Variance of the even Gaussian test density.
    #[arg(long)]
    pub var: Option<f64>,
    /// Comma-separated frequencies.
    #[arg(long)]
    pub omegas: Option<String>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub half_span: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VarianceSweepArgs {
    /// Comma-separated gains, e.g. 1,2,3,4.
    #[arg(long)]
    pub ks: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SmoothSweepArgs {
    /// Comma-separated sharpness values, e.g. 1,10,100.
    #[arg(long = "Ns")]
    pub sharpnesses: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub half_span: Option<f64>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
