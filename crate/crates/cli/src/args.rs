use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "entloc",
    version,
    about = "Scans and fits for region-restricted entanglement"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// JSON object of flag values; explicit flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads (also read from ENTLOC_THREADS).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Entropy surfaces of the four-spin state over (theta1, theta2).
    SpinScan(SpinScanArgs),
    /// Negativity surfaces of the mixed four-spin state.
    SpinNegativityScan(SpinNegativityArgs),
    /// Fidelity at which the negativity vanishes, optionally with N(F) curves.
    SpinVanishPoint(SpinVanishArgs),
    /// Closed-form ground-state constants.
    GaussConstants(ModelOnly),
    /// Alice-only restriction over region width and centre.
    GaussOneRestricted(OneRestrictedArgs),
    /// Both parties restricted: a centre map or a case comparison.
    GaussBothRestricted(BothRestrictedArgs),
    /// Small-region analytic limits.
    GaussLimits(LimitsArgs),
    /// Classical joint or conditional probability map.
    GaussClassicalMap(ClassicalMapArgs),
    /// Fit a Gaussian surface to a CSV produced by this tool.
    GaussFit(FitArgs),
    /// Fitted or analytic widths against the coupling.
    GaussSigmaScan(SigmaScanArgs),
    /// Partition inequality, non-discarding and precise-measurement checks.
    GaussInequality(InequalityArgs),
    /// Grid and basis convergence table for the one-restricted entropy.
    GaussConverge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelOnly {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Grid,
    Basis,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiscretizationArgs {
    #[arg(long, value_enum, default_value_t = Method::Grid)]
    pub method: Method,
    /// Grid bins; the subcommand default applies when absent.
    #[arg(long)]
    pub n_bins: Option<usize>,
    #[arg(long, default_value_t = 40)]
    pub n_basis: usize,
    /// Gauss-Legendre panels per region segment for the basis method.
    #[arg(long, default_value_t = 16)]
    pub quad_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Unrestricted,
    Restricted,
    Difference,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThetaAxes {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 64)]
    pub theta_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpinScanArgs {
    #[command(flatten)]
    pub axes: ThetaAxes,
    /// Surface written in CSV output; JSON carries all three.
    #[arg(long, value_enum, default_value_t = Surface::Restricted)]
    pub surface: Surface,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpinNegativityArgs {
    #[command(flatten)]
    pub axes: ThetaAxes,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub fidelity: f64,
    #[arg(long, value_enum, default_value_t = Surface::Restricted)]
    pub surface: Surface,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpinVanishArgs {
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub theta1: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub theta2: f64,
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1e-7, allow_negative_numbers = true)]
    pub tolerance: f64,
    /// Also tabulate N(F) at this many fidelities on [1/16, 1].
    #[arg(long)]
    pub curve_steps: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// CSV carries only the N(F) curve.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CentreAxis {
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    pub q_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub q_max: f64,
    #[arg(long, default_value_t = 33)]
    pub q_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OneRestrictedArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Region widths 2a.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0, 4.0], allow_negative_numbers = true)]
    pub widths: Vec<f64>,
    #[command(flatten)]
    pub centres: CentreAxis,
    /// Rescale every width to the common peak.
    #[arg(long)]
    pub rescaled: bool,
    #[command(flatten)]
    pub disc: DiscretizationArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BothCase {
    /// Map over both centres.
    Map,
    SameCentre,
    BobFixed,
    AliceOnly,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BothRestrictedArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = BothCase::Map)]
    pub case: BothCase,
    /// Region width 2a for the map (Alice).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub width: f64,
    /// Bob's width 2b for the map; equal to Alice's when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub width_b: Option<f64>,
    /// Widths for the case comparisons.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5], allow_negative_numbers = true)]
    pub widths: Vec<f64>,
    #[command(flatten)]
    pub centres: CentreAxis,
    #[command(flatten)]
    pub disc: DiscretizationArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Alice's half-width.
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    /// Bob's half-width.
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbabilityArg {
    Joint,
    Conditional,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassicalMapArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = ProbabilityArg::Joint)]
    pub kind: ProbabilityArg,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub width: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub width_b: Option<f64>,
    #[command(flatten)]
    pub centres: CentreAxis,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormArg {
    SymmetricPm,
    Conditional,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// CSV written by a map subcommand.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormArg::SymmetricPm)]
    pub form: FormArg,
    /// Cells below this fraction of the peak are ignored.
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Relative multiplicative noise for repeated diagnostic fits.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0)]
    pub jitter_trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceArg {
    Quantum,
    Classical,
    SmallA,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SigmaScanArgs {
    #[arg(long, value_enum, default_value_t = SourceArg::Classical)]
    pub source: SourceArg,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 4.0, 6.0, 8.0, 10.0], allow_negative_numbers = true)]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub width: f64,
    #[command(flatten)]
    pub centres: CentreAxis,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub threshold: f64,
    #[command(flatten)]
    pub disc: DiscretizationArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InequalityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Cells per axis of the uniform partition.
    #[arg(long, default_value_t = 4)]
    pub cells: usize,
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub hi: f64,
    /// Fold the tails beyond [lo, hi] into the outer cells.
    #[arg(long)]
    pub merge_tails: bool,
    /// Region for the non-discarding and precise-measurement checks.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub region_centre: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub region_half_width: f64,
    #[command(flatten)]
    pub disc: DiscretizationArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 4.0], allow_negative_numbers = true)]
    pub widths: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub centre: f64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![50, 100, 200, 400])]
    pub grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 40, 80])]
    pub basis: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub quad_order: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}
