use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use landau_kratzer::spectrum::{Branch, BranchSelection};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "landau-kratzer", version)]
#[command(about = "Quasi-exact Landau-Kratzer spectra in a rotating frame")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Allowed cyclotron frequencies and energies over an (n, l) grid
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Sampled radial profile of one level
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Finite-difference check of every positive-branch level in a grid
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Frobenius coefficients a_0..a_K of the Heun series
    #[command(allow_negative_numbers = true)]
    Coeffs(CoeffsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
    Both,
}

impl From<BranchArg> for BranchSelection {
    fn from(value: BranchArg) -> Self {
        match value {
            BranchArg::Plus => BranchSelection::Plus,
            BranchArg::Minus => BranchSelection::Minus,
            BranchArg::Both => BranchSelection::Both,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SingleBranch {
    Plus,
    Minus,
}

impl From<SingleBranch> for Branch {
    fn from(value: SingleBranch) -> Self {
        match value {
            SingleBranch::Plus => Branch::Plus,
            SingleBranch::Minus => Branch::Minus,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Ranges {
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, default_value_t = -2)]
    pub l_min: i64,
    #[arg(long, default_value_t = 2)]
    pub l_max: i64,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Flat JSON configuration
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub ranges: Ranges,
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    pub branch: BranchArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct WavefunctionArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub l: i64,
    #[arg(long, value_enum, default_value_t = SingleBranch::Plus)]
    pub branch: SingleBranch,
    /// Index into the positive theta roots, ascending
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Upper end of the sampled range in the dimensionless r
    #[arg(long, default_value_t = landau_kratzer::wavefunction::DEFAULT_R_MAX)]
    pub r_max: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub ranges: Ranges,
    /// Interior grid points of the base grid; the check also runs at twice this
    #[arg(long, default_value_t = landau_kratzer::oracle::DEFAULT_GRID_POINTS)]
    pub grid_n: usize,
    #[arg(long, default_value_t = landau_kratzer::oracle::DEFAULT_R_MAX)]
    pub r_max: f64,
    /// Build the operator at this cyclotron frequency instead (negative control)
    #[arg(long)]
    pub omega_override: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub nu: f64,
    /// Highest coefficient index
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
