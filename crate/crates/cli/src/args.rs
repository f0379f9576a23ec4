use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hookamp", version, about = "Worst-case amplitudes of linear recurrences via hook Schur polynomials")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Worst-case amplitude over a polydisc of roots and initial values.
    Compute(ComputeArgs),
    /// Compare the closed form with a brute-force search over root phases.
    Verify(VerifyArgs),
    /// Solve a log-affine Reinhardt-domain problem read from a JSON file.
    Reinhardt(ReinhardtArgs),
    /// Random scans of the interpolation-error conjectures.
    Scan(ScanArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Debug, Args)]
pub struct PolydiscArgs {
    /// Order of the recurrence (defaults to the number of radii).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: usize,
    /// Root radii, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
    /// Initial-value bounds, comma separated (default: all ones).
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub polydisc: PolydiscArgs,
    /// Also report the peak amplitude over n..=t_max.
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Common phase of the extremal roots.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Allow n > 16 or t > 64.
    #[arg(long)]
    pub unsafe_range: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub polydisc: PolydiscArgs,
    #[arg(long, default_value_t = 64)]
    pub phase_grid: usize,
    #[arg(long, default_value_t = 2)]
    pub radial_grid: usize,
    /// Random root samples on top of the grid.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct ReinhardtArgs {
    /// Domain file: {"n", "t", "vertices", "init_oracle": {"kind", ...}}.
    #[arg(long)]
    pub domain: PathBuf,
    /// Drop dominated vertices before solving.
    #[arg(long)]
    pub filter: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Conjecture {
    PointwiseZ1,
    PointwiseZ0,
    TEqualsN,
    SpecialNp1,
    Kallioniemi,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    UnitDisc,
    RightHalfDisc,
    UnitCircle,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub conjecture: Conjecture,
    #[arg(long)]
    pub n: usize,
    /// Largest t for pointwise scans; defaults to n + 6 (n for t-equals-n).
    #[arg(long)]
    pub t: Option<usize>,
    /// Largest t for the uniform scan.
    #[arg(long, default_value_t = 40)]
    pub t_max: usize,
    /// Derivative order; all 0..n when absent.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = RegionArg::UnitDisc)]
    pub region: RegionArg,
    /// Probability that a sampled conjugate pair is a doubled real point.
    #[arg(long, default_value_t = 0.2)]
    pub p_real: f64,
    /// Explicit nodes as re:im pairs, comma separated (Kallioniemi and uniform).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nodes: Vec<String>,
    /// Points of the grid on [-1, 1].
    #[arg(long, default_value_t = hookamp::conjectures::DEFAULT_Z_POINTS)]
    pub z_points: usize,
    /// Largest monomial degree for the Kallioniemi estimator (default 4n + 40).
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Append counterexample records to this newline-delimited JSON file.
    #[arg(long)]
    pub log: Option<PathBuf>,
}
