use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "statebound", version, about = "State-transfer bounds, experiment designs and pseudopure-state protocols")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// Preset name (chcl3, alanine) or path to a TOML system file.
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Number of spins when no system is given.
    #[arg(long, global = true)]
    pub spins: Option<usize>,
    /// Comma-separated T1 override, seconds.
    #[arg(long, global = true, value_delimiter = ',')]
    pub t1: Option<Vec<f64>>,
    /// Comma-separated T2 override, seconds.
    #[arg(long, global = true, value_delimiter = ',')]
    pub t2: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Seed for Monte-Carlo sampling.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Report efficiencies with ε = 1e-5 instead of in units of ε.
    #[arg(long, global = true)]
    pub physical: bool,
    /// Directory for trajectory and spectrum files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unitary and mixed-unitary transfer bounds.
    Bound(BoundArgs),
    /// Minimal mixed-unitary design reaching the exact bound.
    Design(DesignArgs),
    /// Simulate a preparation protocol.
    Protocol(ProtocolArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, default_value = "thermal")]
    pub rho: String,
    #[arg(long, default_value = "pps")]
    pub sigma: String,
    /// Random unitaries used to check the bounds empirically.
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long, default_value = "thermal")]
    pub rho: String,
    #[arg(long, default_value = "pps")]
    pub sigma: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ta,
    Sa,
    Ls,
    Ctg,
    Pc,
    Lss,
    LppsConventional,
    LppsOptimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    #[value(name = "-x")]
    MinusX,
    #[value(name = "-y")]
    MinusY,
}

#[derive(Debug, Args, Clone)]
pub struct ProtocolArgs {
    #[arg(value_enum)]
    pub method: Method,
    /// Spin count for lpps-optimal.
    #[arg(long)]
    pub n: Option<usize>,
    /// Skip the gradient pulses of the sa sequence.
    #[arg(long)]
    pub no_gradients: bool,
    /// First ls rotation angle in degrees; solved when omitted.
    #[arg(long, requires = "x2")]
    pub x1: Option<f64>,
    /// Second ls rotation angle in degrees.
    #[arg(long, requires = "x1")]
    pub x2: Option<f64>,
    /// First ctg rotation angle in degrees.
    #[arg(long, default_value_t = 99.59)]
    pub theta1: f64,
    /// Second ctg rotation angle in degrees.
    #[arg(long, default_value_t = 90.0)]
    pub theta2: f64,
    /// Number of ctg repetitions.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long, value_enum, default_value_t = AxisArg::X)]
    pub axis: AxisArg,
    /// Free relaxation between ctg repetitions, seconds.
    #[arg(long)]
    pub relax_interval: Option<f64>,
    /// Relaxation delay per pc loop, seconds.
    #[arg(long, default_value_t = 0.3)]
    pub tau: f64,
    /// Number of pc loops.
    #[arg(long, default_value_t = 60)]
    pub loops: usize,
    /// Saturation field strength in Hz.
    #[arg(long, default_value_t = 20.0)]
    pub amplitude_hz: f64,
    /// Saturation time, seconds.
    #[arg(long, default_value_t = 3.0)]
    pub duration: f64,
    /// Time slices per drive period for lss.
    #[arg(long, default_value_t = 96)]
    pub slices: usize,
    /// Cross-relaxation rate in 1/s for pc and lss.
    #[arg(long, default_value_t = 0.0)]
    pub cross_relaxation: f64,
    /// `param=start:stop:steps`.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Write the readout spectrum of every spin to the output directory.
    #[arg(long)]
    pub spectrum: bool,
}
