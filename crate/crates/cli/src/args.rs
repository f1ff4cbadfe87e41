use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dstau",
    version,
    about = "Generalized Schur polynomials, Drinfeld-Sokolov tau functions and Hirota bilinear equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a realized simple Lie algebra.
    Algebra(AlgebraCmd),
    /// Generalized Schur polynomials.
    Schur(SchurCmd),
    /// Tau function of a Grassmannian point.
    Tau(TauCmd),
    /// Fit Hirota bilinear equations to a corpus of tau functions.
    Fit(FitCmd),
    /// Check a bilinear equation on tau functions.
    Verify(VerifyCmd),
    /// Adler-Moser polynomials and their match with KdV tau functions.
    AdlerMoser(AdlerMoserCmd),
    /// Regenerate the low-rank Schur table and compare it with the bundled copy.
    Table1(Table1Cmd),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct AlgebraSpec {
    /// Family letter (A, B, C, D), optionally with the rank (`B2`).
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Realization descriptor (JSON).
    #[arg(long, conflicts_with_all = ["algebra", "rank"])]
    pub realization: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlgebraCmd {
    #[command(flatten)]
    pub spec: AlgebraSpec,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SchurCmd {
    #[command(flatten)]
    pub spec: AlgebraSpec,
    /// `[3,1]` or Frobenius `(2|1)`; repeatable.
    #[arg(long, required = true)]
    pub partition: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Sato-Zhou sum over the Plucker support.
    #[default]
    Sz,
    /// Stabilized block Toeplitz determinants.
    Toeplitz,
}

#[derive(Debug, Args)]
pub struct TauCmd {
    #[command(flatten)]
    pub spec: AlgebraSpec,
    /// A bundled point (`a1-f1`, `b2-lower`, `d4-theta`, ...).
    #[arg(long, conflicts_with_all = ["x_file", "gamma_file", "algebra", "rank", "realization"])]
    pub example: Option<String>,
    /// `X` as a list of `{lambda, matrix}` terms.
    #[arg(long, conflicts_with = "gamma_file")]
    pub x_file: Option<PathBuf>,
    /// The factor `e^X` given directly.
    #[arg(long)]
    pub gamma_file: Option<PathBuf>,
    #[arg(long, default_value_t = 18)]
    pub weight_cut: u32,
    /// Times set to zero, e.g. `t11` or `t5,t7`.
    #[arg(long, value_delimiter = ',')]
    pub zero_times: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    pub method: Method,
    /// Largest Toeplitz window for `--method toeplitz`.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Skip the full-weight evaluation that decides exactness.
    #[arg(long)]
    pub no_certify: bool,
    /// Fail unless the root is an exact polynomial.
    #[arg(long)]
    pub require_exact: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FitCmd {
    /// Polynomial files; `path@W` marks a member valid through weight `W`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub corpus: Vec<String>,
    #[arg(long)]
    pub degree_bound: u32,
    /// Derivative symbols, e.g. `1,3,3p,5`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub times: Vec<String>,
    #[arg(long)]
    pub include_constant: bool,
    /// Keep monomials with an odd number of factors.
    #[arg(long)]
    pub include_odd: bool,
    /// Use only monomials of degree exactly the bound.
    #[arg(long)]
    pub homogeneous: bool,
    #[arg(long, value_enum, default_value_t)]
    pub report: Format,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    /// A bundled name (`kdv1`, `bsq4`, `d4-a`, ...) or an equation such as `D1^4 - 4*D1*D3`.
    #[arg(long)]
    pub equation: String,
    /// Polynomial files; `path@W` checks only weights that are exact through `W`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub tau: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    #[default]
    Theta,
    Substitution,
    Match,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// `theta_(k+1)' theta_(k-1) - theta_(k+1) theta_(k-1)' = (2k-1) theta_k^2`.
    #[default]
    Wronskian,
    /// `theta_(k+1)' theta_(k-1) + theta_(k+1) theta_(k-1)' = (2k-1) theta_k^2`.
    Sum,
}

#[derive(Debug, Args)]
pub struct AdlerMoserCmd {
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t)]
    pub emit: Emit,
    #[arg(long, value_enum, default_value_t)]
    pub form: Form,
    /// Tau polynomial for `--emit match`; defaults to the bundled KdV point for `k <= 4`.
    #[arg(long)]
    pub tau: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Table1Cmd {
    /// Reference table to compare with instead of the bundled one.
    #[arg(long)]
    pub golden: Option<PathBuf>,
}
