use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "padic-spectra", version, about = "Spectra, heat kernels and point hearing on p-adic manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weighted nerve complex of the model.
    Nerve(ModelCommand),
    /// Wavelet eigenvalue classes with multiplicities.
    Spectrum(ModelCommand),
    /// Heat kernel row `H(t, x, ·)`.
    Heat(ModelCommand),
    /// Green function row `G(x, ·)`.
    Green(ModelCommand),
    /// Jump-process paths started at a cell.
    Simulate(ModelCommand),
    /// Recover `|Ē(k)|` from the bottom of the spectrum and compare with brute force.
    Hear(ModelCommand),
    /// Brute-force point count of the reduction curve.
    Count(ModelCommand),
    /// Equalise a bi-analytic map read from a JSON file.
    Equalise(EqualiseCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSelector {
    Projective,
    Y,
    Elliptic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisArg {
    Wavelet,
    Complete,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelCommand {
    #[arg(long, value_enum, default_value = "projective")]
    pub model: ModelSelector,
    /// Dimension of `P^n` or `Y`.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Residue degree of the elliptic base field.
    #[arg(long, default_value_t = 1)]
    pub f: u32,
    /// Level of the cell model.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Coefficient `A` of `y² = x³ + Ax + B`; an integer or comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub a4: Option<String>,
    /// Coefficient `B` of `y² = x³ + Ax + B`.
    #[arg(long, allow_hyphen_values = true)]
    pub a6: Option<String>,
    /// Exponent of the operator.
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    /// Times; repeat for several.
    #[arg(long = "t", default_values_t = [1.0])]
    pub t: Vec<f64>,
    /// Base cell for heat, green and simulate.
    #[arg(long, default_value_t = 0)]
    pub x: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    /// Paths whose jump events are written out.
    #[arg(long, default_value_t = 0)]
    pub logged_paths: usize,
    #[arg(long, value_enum, default_value = "wavelet")]
    pub basis: BasisArg,
    /// Use 1 instead of `1/μ(X)` for the constant eigenfunction.
    #[arg(long)]
    pub paper_constant_term: bool,
    /// Emit exact rationals; needs an integer exponent.
    #[arg(long)]
    pub exact: bool,
    /// Exit with status 4 when the printed inversion formulas disagree with the result.
    #[arg(long)]
    pub strict: bool,
    /// Include per-cell records in `nerve` output.
    #[arg(long)]
    pub cells: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EqualiseCommand {
    /// JSON polynomial map: `{p, precision, domain, components}`.
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub max_radius: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

/// Echoed into every output so a run can be reproduced from its header.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, T: Serialize> {
    pub command: &'a str,
    #[serde(flatten)]
    pub args: &'a T,
    pub version: &'static str,
}

impl<'a, T: Serialize> RunConfig<'a, T> {
    pub fn new(command: &'a str, args: &'a T) -> Self {
        Self { command, args, version: env!("CARGO_PKG_VERSION") }
    }
}
