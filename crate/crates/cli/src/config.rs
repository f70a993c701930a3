//! Command-line surface. The parsed [`RunConfig`] is embedded verbatim in
//! every JSON output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Everything that determines a run. `--threads` is deliberately not
/// serialised: output must not depend on it.
#[derive(Parser, Serialize, Debug, Clone, PartialEq)]
#[command(name = "bianchi", version, about = "Eisenstein series and horosphere measures on Bianchi orbifolds")]
pub struct RunConfig {
    /// Field Q(√−D); one of 1, 2, 3, 7, 11, 19, 43, 67, 163.
    #[arg(long = "D", global = true, default_value_t = 1, allow_negative_numbers = true)]
    #[serde(rename = "D")]
    pub d: i64,
    /// How [Γ_∞ : Γ'_∞] is counted.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Sl)]
    pub index_convention: Convention,
    /// Jitters the bump center of `equidist` reproducibly.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exit with status 4 when a tolerance warning is raised.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Write the JSON here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

/// Index convention flag.
#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Index inside SL(2, O_D).
    Sl,
    /// Index inside PSL(2, O_D).
    Psl,
}

/// Subcommands.
#[derive(Subcommand, Serialize, Debug, Clone, PartialEq)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Ring data: ω, discriminant, units, covolume, dual basis, indices.
    Ring,
    /// Coprime bottom rows with Ω(c, d; P) ≤ bound.
    Cosets(CosetArgs),
    /// One Eisenstein series value.
    Eisenstein(EisensteinArgs),
    /// A Fourier coefficient along the horosphere at height λ.
    Fourier(FourierArgs),
    /// Dedekind zeta, φ(s) and the orbifold volume.
    Zeta(ZetaArgs),
    /// Horosphere measures of a Poincaré bump against the Liouville measure.
    Equidist(EquidistArgs),
}

/// `cosets` flags.
#[derive(Args, Serialize, Debug, Clone, PartialEq)]
pub struct CosetArgs {
    /// Evaluation point "x,y,lambda".
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    pub point: String,
    /// Ω bound X.
    #[arg(long, default_value_t = 100.0)]
    pub bound: f64,
    /// Rows listed in the output (all are counted).
    #[arg(long, default_value_t = 20)]
    pub limit: usize,
    /// Binary coset-list cache file.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

/// Which series `eisenstein` evaluates.
#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// E^l_km(P, s).
    E,
    /// H^l_km(P, s).
    H,
    /// Classical E(P, s) = index·E^0_00.
    Classical,
    /// Classical series with the constant term removed above `--truncation`.
    Truncated,
}

/// `eisenstein` flags.
#[derive(Args, Serialize, Debug, Clone, PartialEq)]
pub struct EisensteinArgs {
    /// Degree l.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Row index k.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k: i32,
    /// Column index m.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
    /// Re s.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub s_re: f64,
    /// Im s.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_im: f64,
    /// Evaluation point "x,y,lambda".
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    pub point: String,
    /// Ω bound X.
    #[arg(long, default_value_t = 50.0)]
    pub bound: f64,
    /// Series to evaluate.
    #[arg(long, value_enum, default_value_t = SeriesKind::E)]
    pub series: SeriesKind,
    /// Also evaluate the other of E and H and report H / E against e^{−i(k+m)π}.
    #[arg(long)]
    pub he_check: bool,
    /// Height T for `--series truncated`.
    #[arg(long, default_value_t = 1.0)]
    pub truncation: f64,
    /// Binary coset-list cache file.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

/// `fourier` flags.
#[derive(Args, Serialize, Debug, Clone, PartialEq)]
pub struct FourierArgs {
    /// Degree l.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Row index k.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k: i32,
    /// Column index m.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
    /// Height λ of the horosphere.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Re s.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub s_re: f64,
    /// Im s.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_im: f64,
    /// Frequency w = n1·b1* + n2·b2* as "n1,n2" in the dual basis.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub w: String,
    /// Ω bound X.
    #[arg(long, default_value_t = 40.0)]
    pub bound: f64,
    /// Trapezoid nodes per direction.
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    /// Also tabulate |b_w| for w = (j, 0), j = 0..=decay.
    #[arg(long)]
    pub decay: Option<u32>,
}

/// `zeta` flags.
#[derive(Args, Serialize, Debug, Clone, PartialEq)]
pub struct ZetaArgs {
    /// Re s.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub s_re: f64,
    /// Im s.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_im: f64,
    /// Norm cutoff of the Dirichlet sum.
    #[arg(long, default_value_t = 100_000)]
    pub cutoff: i64,
}

/// `equidist` flags.
#[derive(Args, Serialize, Debug, Clone, PartialEq)]
pub struct EquidistArgs {
    /// Bump center "x,y,lambda".
    #[arg(long, default_value = "0.2,0.1,1.3", allow_hyphen_values = true)]
    pub point: String,
    /// Spatial radius r_s.
    #[arg(long, default_value_t = 0.6)]
    pub rs: f64,
    /// Directional radius r_d.
    #[arg(long, default_value_t = 1.5)]
    pub rd: f64,
    /// Re of the amplitude.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp_re: f64,
    /// Im of the amplitude.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub amp_im: f64,
    /// Decreasing heights, comma separated.
    #[arg(long, default_value = "1,0.5,0.25,0.125,0.0625")]
    pub grid: String,
    /// Trapezoid order at λ = 1.
    #[arg(long, default_value_t = 48)]
    pub order: usize,
    /// Gauss–Legendre nodes per spatial direction of the Liouville integral.
    #[arg(long, default_value_t = 96)]
    pub liouville_order: usize,
    /// Gauss–Legendre nodes in the polar angle of the Liouville integral.
    #[arg(long, default_value_t = 64)]
    pub directional_order: usize,
    /// Cap on coset rows per probed point.
    #[arg(long, default_value_t = bianchi_core::equidist::DEFAULT_MAX_ROWS)]
    pub max_rows: usize,
    /// CSV mirror: lambda, value_re, value_im, delta_abs.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
