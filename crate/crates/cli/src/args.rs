use std::f64::consts::PI;
use std::path::PathBuf;

use bellmatch::scan::{AxisRange, Fig2Source, DEFAULT_SEED};
use bellmatch::Mode;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bellmatch",
    version,
    about = "Bell-inequality list identities and run matching"
)]
pub struct Cli {
    /// Read every angle flag in degrees instead of radians.
    #[arg(long, global = true)]
    pub degrees: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one run of (A, B) singlet pairs and write a run record.
    Generate(GenerateArgs),
    /// Align an (A', B) run to an (A, B) run on their shared B values.
    Match3(Match3Args),
    /// Align (A', B) on B and (A, B') on A against an (A, B) run.
    Match4(Match4Args),
    /// Angle-grid scans written as CSV.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Evaluate the three-list (3 files) or four-list (4 files) inequality.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub theta_a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_b: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Match3Args {
    pub file_ab: PathBuf,
    pub file_apb: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Match4Args {
    pub file_ab: PathBuf,
    pub file_apb: PathBuf,
    pub file_abp: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(num_args = 3..=4, required = true)]
    pub paths: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ScanCommand {
    /// Conditional-correlation estimate of <AA'> against the matched formula.
    Fig2(Fig2Args),
    /// Three-correlation left-hand side over (alpha, alpha').
    Bell3(Bell3Args),
    /// CHSH left-hand side over (theta_ap, theta_b, theta_bp).
    Chsh4(Chsh4Args),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Matched,
    #[value(alias = "unmatched-stationary")]
    Unmatched,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Matched => Mode::Matched,
            ModeArg::Unmatched => Mode::UnmatchedStationary,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SourceArg {
    Gedanken,
    Matched,
}

impl From<SourceArg> for Fig2Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Gedanken => Fig2Source::Gedanken,
            SourceArg::Matched => Fig2Source::MatchedRuns,
        }
    }
}

/// One grid axis; unset bounds fall back to the subcommand's defaults
/// (given in radians).
#[derive(Debug, Clone, Copy, Default)]
pub struct AxisArgs {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
}

impl AxisArgs {
    pub fn resolve(&self, default: AxisRange, to_radians: impl Fn(f64) -> f64) -> AxisRange {
        AxisRange {
            start: self.start.map(&to_radians).unwrap_or(default.start),
            stop: self.stop.map(&to_radians).unwrap_or(default.stop),
            steps: self.steps.unwrap_or(default.steps),
        }
    }
}

macro_rules! axis_flags {
    ($name:ident, $start:ident, $stop:ident, $steps:ident) => {
        #[derive(Debug, Args)]
        pub struct $name {
            #[arg(long, allow_negative_numbers = true)]
            pub $start: Option<f64>,
            #[arg(long, allow_negative_numbers = true)]
            pub $stop: Option<f64>,
            #[arg(long)]
            pub $steps: Option<usize>,
        }

        impl $name {
            pub fn axis(&self) -> AxisArgs {
                AxisArgs {
                    start: self.$start,
                    stop: self.$stop,
                    steps: self.$steps,
                }
            }
        }
    };
}

axis_flags!(AlphaAxis, alpha_start, alpha_stop, alpha_steps);
axis_flags!(
    AlphaPrimeAxis,
    alpha_prime_start,
    alpha_prime_stop,
    alpha_prime_steps
);
axis_flags!(ThetaApAxis, theta_ap_start, theta_ap_stop, theta_ap_steps);
axis_flags!(ThetaBAxis, theta_b_start, theta_b_stop, theta_b_steps);
axis_flags!(ThetaBpAxis, theta_bp_start, theta_bp_stop, theta_bp_steps);

#[derive(Debug, Args)]
pub struct Fig2Args {
    /// Fixed theta_B.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub beta: f64,
    #[command(flatten)]
    pub alpha: AlphaAxis,
    #[command(flatten)]
    pub alpha_prime: AlphaPrimeAxis,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SourceArg::Gedanken)]
    pub source: SourceArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Bell3Args {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub theta_b: f64,
    #[command(flatten)]
    pub alpha: AlphaAxis,
    #[command(flatten)]
    pub alpha_prime: AlphaPrimeAxis,
    #[arg(long, value_enum, default_value_t = ModeArg::Matched)]
    pub mode: ModeArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Chsh4Args {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub theta_a: f64,
    #[command(flatten)]
    pub theta_ap: ThetaApAxis,
    #[command(flatten)]
    pub theta_b: ThetaBAxis,
    #[command(flatten)]
    pub theta_bp: ThetaBpAxis,
    #[arg(long, value_enum, default_value_t = ModeArg::Matched)]
    pub mode: ModeArg,
    #[arg(long)]
    pub out: PathBuf,
}

/// Default axis for the conditional-estimator surface: `[0, π]` with 17 points.
pub fn fig2_axis() -> AxisRange {
    AxisRange::new(0.0, PI, 17)
}

/// Default axis for inequality scans: `[−π, π]` in steps of π/60.
pub fn full_turn_axis() -> AxisRange {
    AxisRange::new(-PI, PI, 121)
}
