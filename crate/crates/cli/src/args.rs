use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Bloch bands of the two-gap Lamé equation -ψ'' + 6κ²sn²(x)ψ = εψ.
#[derive(Debug, Parser)]
#[command(name = "lame", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The five band edges with widths and gaps.
    Edges(EdgesArgs),
    /// Sampled ε(k) along the bands.
    Dispersion(DispersionArgs),
    /// The Bloch wavefunction at one trajectory point.
    Wavefunction(WavefunctionArgs),
    /// Cross-checks against the Floquet oracle, the Weierstrass form, the
    /// sech² decomposition and the reality conditions.
    Validate(ValidateArgs),
    /// The potential as a lattice of sech² wells, compared with κ²sn²x.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum BandSel {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[value(name = "3")]
    #[serde(rename = "3")]
    Three,
    #[value(name = "all")]
    #[serde(rename = "all")]
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingArg {
    /// Uniform in the trajectory parameter.
    T,
    /// Uniform in crystal momentum.
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckName {
    All,
    Dispersion,
    Weierstrass,
    Decomposition,
    Reality,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Modulus parameter m = κ².
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EdgesArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = BandSel::All)]
    pub band: BandSel,
    /// Points per band.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Momentum cap of band 3 (default 4π/K).
    #[arg(long, allow_negative_numbers = true)]
    pub k_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = SpacingArg::T)]
    pub spacing: SpacingArg,
    /// Also write a gnuplot script next to the --out file.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub band: BandSel,
    /// Trajectory parameter (band 3: t < 1).
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub x_min: f64,
    /// Default 4K.
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = CheckName::All)]
    pub check: CheckName,
    /// Override the tolerance of every selected check.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Wells kept: |ℓ| ≤ L.
    #[arg(long, default_value_t = lame_core::decomposition::DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long, default_value_t = lame_core::decomposition::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub x_min: f64,
    /// Default 2K.
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    /// Threshold on the sup-norm difference.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}
