use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use crate::config::{Complex, Range};

/// Energy Green functions and Feynman propagators of 1D Hamiltonians.
///
/// Complex numbers are written `RE,IM`. Exit codes: 0 ok, 1 validation-suite
/// failure, 2 argument error, 3 numerical failure (pole, caustic, Wronskian
/// drift), 4 convergence failure. GREENPROP_TOL overrides the default
/// inversion tolerance.
#[derive(Debug, Parser)]
#[command(name = "greenprop", version, about, long_about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate G(x, x', E).
    Greens(GreensArgs),
    /// Evaluate K(x, x', t).
    Propagator(PropagatorArgs),
    /// Tabulate G or K over one or two axes as a dense matrix.
    Sweep(SweepArgs),
    /// Run property suites and print a JSON report.
    Validate(ValidateArgs),
    /// Evaluate a single special function (diagnostics).
    #[command(hide = true)]
    SpecfunProbe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Free,
    Delta,
    Harmonic,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Background {
    Free,
    Harmonic,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpArg {
    Linear,
    Cubic,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    /// Potential family; overrides the config file.
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    /// Point-interaction strength b > 0 (delta).
    #[arg(long)]
    pub b: Option<f64>,
    /// Oscillator frequency (harmonic, or the delta background).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Regular potential under the point interaction.
    #[arg(long, value_enum)]
    pub background: Option<Background>,
    /// Two-column CSV (x, V) for custom potentials.
    #[arg(long)]
    pub potential_file: Option<PathBuf>,
    /// Interpolation of custom samples.
    #[arg(long, value_enum)]
    pub interp: Option<InterpArg>,
    /// TOML file with [units] and [potential] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn tag(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GreenMethodArg {
    /// Closed forms for catalog potentials, numerical modes otherwise.
    Auto,
    /// Numerical modes even when a closed form exists.
    Numerical,
}

#[derive(Debug, Clone, Args)]
pub struct GreensArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xprime: f64,
    /// Energy as RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Complex,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: GreenMethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropMethodArg {
    Closed,
    Spectral,
    InverseLaplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    TrapezoidLine,
    Talbot,
    KLine,
}

#[derive(Debug, Clone, Args)]
pub struct PropagatorOptions {
    #[arg(long, value_enum, default_value = "closed")]
    pub method: PropMethodArg,
    /// Number of oscillator levels in the spectral sum.
    #[arg(long, default_value_t = 60)]
    pub nmax: usize,
    /// Extra damping added to t in the spectral sum; defaults to 0.05/omega
    /// for real t and 0 when t is already damped.
    #[arg(long)]
    pub damping: Option<f64>,
    /// Inversion scheme for --method inverse-laplace.
    #[arg(long, value_enum, default_value = "trapezoid-line")]
    pub scheme: SchemeArg,
    /// Green-function route used inside the inversion.
    #[arg(long, value_enum, default_value = "auto")]
    pub green_method: GreenMethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct PropagatorArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xprime: f64,
    /// Time as RE,IM (Im <= 0).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Complex,
    #[command(flatten)]
    pub options: PropagatorOptions,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Propagator,
    Greens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Component {
    Abs,
    Re,
    Im,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, value_enum, default_value = "propagator")]
    pub quantity: Quantity,
    /// Axis A:B:N over x.
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Option<Range>,
    /// Axis A:B:N over x'.
    #[arg(long, allow_hyphen_values = true)]
    pub xprime_range: Option<Range>,
    /// Axis A:B:N over Re t (Im t taken from --t).
    #[arg(long, allow_hyphen_values = true)]
    pub t_range: Option<Range>,
    /// Axis A:B:N over Re E (Im E taken from --energy).
    #[arg(long, allow_hyphen_values = true)]
    pub energy_range: Option<Range>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub xprime: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<Complex>,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<Complex>,
    #[arg(long, value_enum, default_value = "abs")]
    pub component: Component,
    #[command(flatten)]
    pub options: PropagatorOptions,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Jump,
    Symmetry,
    Wronskian,
    Mehler,
    Spectral,
    Oracle,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecialFn {
    Gamma,
    LnGamma,
    Erfc,
    Erfcx,
    Pcf,
    Hermite,
    Kummer,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[arg(long = "fn", value_enum)]
    pub function: SpecialFn,
    /// Argument z as RE,IM (real part only for pcf and hermite).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Complex,
    /// Order p (pcf) or parameter a (kummer), as RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<Complex>,
    /// Parameter b (kummer), as RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<Complex>,
    /// Degree (hermite).
    #[arg(long)]
    pub n: Option<usize>,
}
