use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ibdd", version, about = "Density evolution and Monte-Carlo for iBDD-SR decoding of product and staircase codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bisect the DE decoding threshold of a GLDPC or SC-GLDPC ensemble.
    DeThreshold(DeThresholdArgs),
    /// Run DE at one Eb/N0 and export the scaling-factor schedule as JSON.
    DeSchedule(DeScheduleArgs),
    /// Monte-Carlo BER/FER curves for the selected decoders.
    Sim(SimArgs),
    /// Turn a sim CSV into plot columns plus interpolated SNR gains.
    Plotdata(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    Gldpc,
    Sc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    /// w = ln(f_c / f_e), the erasure-channel LLR.
    ErasureLlr,
    /// w minimising the next message error probability.
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Frozen,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    /// Field degree: the component code has length 2^m - 1 - shorten.
    #[arg(long, default_value_t = 8)]
    pub m: u32,
    /// Designed error-correcting capability.
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub shorten: usize,
    /// Primitive polynomial in hex; the default table entry when omitted.
    #[arg(long)]
    pub poly: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DeArgs {
    #[arg(long, value_enum, default_value_t = EnsembleArg::Gldpc)]
    pub ensemble: EnsembleArg,
    #[command(flatten)]
    pub code: CodeArgs,
    /// Coupled positions inside the SC window.
    #[arg(long, default_value_t = 6)]
    pub window: usize,
    /// Full iterations (GLDPC) or iterations per window slide (SC).
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    /// Window slides for SC; three window lengths when omitted.
    #[arg(long)]
    pub slides: Option<usize>,
    #[arg(long, value_enum, default_value_t = RuleArg::ErasureLlr)]
    pub rule: RuleArg,
    /// Check node just past the newest SC position: open (channel only) or frozen.
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    /// Start the middle-range table sums at one instead of zero.
    #[arg(long)]
    pub literal_sums: bool,
    /// Success when the message error probability falls below this.
    #[arg(long, default_value_t = 1e-9)]
    pub target: f64,
    /// Code rate used for the noise variance; 1 - 2(n-k)/n when omitted.
    #[arg(long)]
    pub rate: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DeThresholdArgs {
    #[command(flatten)]
    pub de: DeArgs,
    #[arg(long, default_value_t = 0.002)]
    pub tol_db: f64,
    /// Lower end of the bisection bracket (dB); must fail.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub lo: f64,
    /// Upper end of the bisection bracket (dB); must succeed.
    #[arg(long, default_value_t = 8.0)]
    pub hi: f64,
    /// Write the DE profile at the threshold here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DeScheduleArgs {
    #[command(flatten)]
    pub de: DeArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub ebn0_db: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SimArgs {
    /// JSON SimConfig; flags given on the command line override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// pc or staircase.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub shorten: Option<usize>,
    #[arg(long)]
    pub poly: Option<String>,
    /// Comma-separated subset of ibdd, ibdd_sr, ideal.
    #[arg(long)]
    pub modes: Option<String>,
    /// Eb/N0 points in dB: `4.0,4.5` or `start:step:stop`.
    #[arg(long, allow_hyphen_values = true)]
    pub ebn0: Option<String>,
    /// Frame errors to collect per point.
    #[arg(long)]
    pub min_errors: Option<u64>,
    #[arg(long)]
    pub max_frames: Option<u64>,
    /// Only this mode has to reach the error target.
    #[arg(long)]
    pub stop_mode: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads, 0 for all cores. Default from IBDD_WORKERS.
    #[arg(long)]
    pub workers: Option<usize>,
    /// `de` (DE at each simulated Eb/N0) or `fixed:W`.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub sr_iters: Option<usize>,
    #[arg(long)]
    pub plain_iters: Option<usize>,
    /// Staircase window size in blocks.
    #[arg(long)]
    pub window_blocks: Option<usize>,
    /// Counted staircase blocks per frame.
    #[arg(long)]
    pub stream_blocks: Option<usize>,
    #[arg(long)]
    pub batch: Option<u64>,
    /// Transmit random information instead of the all-zero codeword.
    #[arg(long)]
    pub random_info: bool,
    /// Stop simulating a mode once its BER drops below this.
    #[arg(long)]
    pub ber_floor: Option<f64>,
    /// CSV output; a `.json` extension selects the JSON report instead.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Additionally write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Do not echo CSV rows to stdout.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// CSV written by `ibdd sim`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    pub target_ber: f64,
    /// Mode the gains are measured against.
    #[arg(long, default_value = "ibdd")]
    pub reference: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
