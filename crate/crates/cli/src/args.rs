//! Command-line surface: one subcommand per experiment, shared output and
//! cache flags, machine-readable JSON or CSV payloads.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "erdos",
    version,
    about = "Alternating prime series, damped Stieltjes integrals against the \
             Chebyshev function, remainder regularity and tuple-count scans"
)]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub(crate) command: Command,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Partial sums and acceleration of sum_(n<=N) (-1)^n n / p_n.
    Sum(SumArgs),
    /// Alternating reciprocal gap series sum (-1)^n / (n^theta (p_{n+1} - p_n)).
    GapSeries(GapSeriesArgs),
    /// One damped integral against psi, split into main and error terms.
    Integral(IntegralArgs),
    /// Error-term magnitudes over a lambda grid and their growth exponent.
    AsymptoticFit(AsymptoticFitArgs),
    /// Holder constant and increment profile of psi(x) - x.
    Holder(HolderArgs),
    /// Prime tuple counts against the singular-series main term.
    Tuples(TuplesArgs),
    /// Full desk-scale experiment suite as a single JSON document.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum AccelArg {
    /// Raw partial sum only.
    None,
    /// One pair-averaging pass over the trailing window.
    Pair,
    /// Repeated pair averaging.
    Iterated,
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum DampingArg {
    Exponential,
    PowerLaw,
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum PsiVariantArg {
    /// Full prime-power sum (psi).
    PrimePower,
    /// Primes only (theta).
    PrimeOnly,
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum FormArg {
    /// (1 - nu(p)/p) / (1 - 1/p)^k over primes up to the cutoff.
    Standard,
    /// (1 - nu(p)/p)^k variant, kept for comparison.
    Unnormalized,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum SectionArg {
    Series,
    IntegralIdentity,
    ExponentFit,
    HolderProfile,
    Tuples,
}

/// Flags shared by every subcommand.
#[derive(Args)]
pub(crate) struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub(crate) format: FormatArg,
    /// Write the payload to this file instead of stdout.
    #[arg(long)]
    pub(crate) output: Option<PathBuf>,
    /// Prime-table cache file; defaults to $ERDOS_CACHE_DIR/primes.txt when
    /// that variable is set.
    #[arg(long)]
    pub(crate) cache: Option<PathBuf>,
    /// Worker threads for parallel reductions; results are identical for
    /// any value.
    #[arg(long)]
    pub(crate) threads: Option<usize>,
}

#[derive(Args)]
pub(crate) struct SumArgs {
    /// Number of terms N.
    #[arg(long, visible_alias = "N")]
    pub(crate) terms: usize,
    #[arg(long, value_enum, default_value_t = AccelArg::Iterated)]
    pub(crate) accelerate: AccelArg,
    /// Averaging rounds for iterated acceleration.
    #[arg(long, default_value_t = 10)]
    pub(crate) rounds: usize,
    /// Trailing partial sums retained for averaging.
    #[arg(long, default_value_t = 4096)]
    pub(crate) window: usize,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

#[derive(Args)]
pub(crate) struct GapSeriesArgs {
    /// Number of terms N.
    #[arg(long, visible_alias = "N")]
    pub(crate) terms: usize,
    /// Weight exponent theta > 0 in n^theta.
    #[arg(long, default_value_t = 0.5)]
    pub(crate) theta: f64,
    #[arg(long, value_enum, default_value_t = AccelArg::Iterated)]
    pub(crate) accelerate: AccelArg,
    #[arg(long, default_value_t = 10)]
    pub(crate) rounds: usize,
    #[arg(long, default_value_t = 4096)]
    pub(crate) window: usize,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

#[derive(Args)]
pub(crate) struct IntegralArgs {
    /// Damping rate lambda > 0.
    #[arg(long)]
    pub(crate) lambda: f64,
    /// Truncation height X >= 1.
    #[arg(long = "X")]
    pub(crate) x_upper: f64,
    #[arg(long, value_enum, default_value_t = DampingArg::Exponential)]
    pub(crate) damping: DampingArg,
    #[arg(long, value_enum, default_value_t = PsiVariantArg::PrimePower)]
    pub(crate) psi_variant: PsiVariantArg,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

#[derive(Args)]
pub(crate) struct AsymptoticFitArgs {
    /// Truncation height X.
    #[arg(long = "X", default_value_t = 1_000_000.0)]
    pub(crate) x_upper: f64,
    /// Explicit strictly decreasing lambda grid; overrides the uniform
    /// grid flags.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub(crate) grid: Option<Vec<f64>>,
    /// Largest lambda of the generated uniform grid.
    #[arg(long, default_value_t = 1.0)]
    pub(crate) grid_max: f64,
    /// Smallest lambda of the generated uniform grid.
    #[arg(long, default_value_t = 0.05)]
    pub(crate) grid_min: f64,
    /// Point count of the generated uniform grid.
    #[arg(long, default_value_t = 12)]
    pub(crate) grid_points: usize,
    /// Also probe the power-law comparison integral at this theta.
    #[arg(long)]
    pub(crate) probe_theta: Option<f64>,
    #[arg(long, value_enum, default_value_t = PsiVariantArg::PrimePower)]
    pub(crate) psi_variant: PsiVariantArg,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

#[derive(Args)]
pub(crate) struct HolderArgs {
    /// Holder exponent beta in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub(crate) beta: f64,
    /// Sampling range lo:hi.
    #[arg(long, value_parser = parse_range, default_value = "100:1000000")]
    pub(crate) range: (f64, f64),
    /// Grid spacing of the sample points.
    #[arg(long, default_value_t = 1.0)]
    pub(crate) grid_step: f64,
    /// Smallest |x - y| admitted into the constant.
    #[arg(long, default_value_t = 1.0)]
    pub(crate) min_separation: f64,
    /// Increment-profile height; defaults to the top of the range.
    #[arg(long)]
    pub(crate) x_max: Option<u64>,
    #[arg(long, value_enum, default_value_t = PsiVariantArg::PrimePower)]
    pub(crate) psi_variant: PsiVariantArg,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

#[derive(Args)]
pub(crate) struct TuplesArgs {
    /// Tuple offsets, comma separated, strictly increasing.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub(crate) offsets: Vec<u64>,
    /// Threshold grid, comma separated, strictly increasing, entries >= 3.
    #[arg(long = "x", value_delimiter = ',', num_args = 1..)]
    pub(crate) x_grid: Vec<u64>,
    /// Prime cutoff of the singular-series product.
    #[arg(long, default_value_t = 1_000_000)]
    pub(crate) cutoff: u64,
    /// Product form reported in the summary field (scan records always use
    /// the standard form).
    #[arg(long, value_enum, default_value_t = FormArg::Standard)]
    pub(crate) form: FormArg,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

#[derive(Args)]
pub(crate) struct ReportArgs {
    /// Sections to leave out of the document.
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1..)]
    pub(crate) skip: Vec<SectionArg>,
    #[command(flatten)]
    pub(crate) common: CommonArgs,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}
