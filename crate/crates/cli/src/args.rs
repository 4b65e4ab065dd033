use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ajscc_core::link::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "ajscc",
    version,
    about = "Rectangular analog joint source-channel coding: encoders, circuit models, link Monte-Carlo and cost reports",
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed for Monte-Carlo subcommands (decimal 64-bit).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file of default flags; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Encoder {
    /// Multi-stage analog divider circuit.
    Adb,
    /// Circuit-free reference mapping.
    Ideal,
    /// Parallel switched-VCVS circuit.
    Vcvs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignArg {
    Adb,
    Vcvs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LibArg {
    Standard,
    Efficient,
    Nano,
}

impl LibArg {
    pub fn name(self) -> &'static str {
        match self {
            LibArg::Standard => "standard",
            LibArg::Efficient => "efficient",
            LibArg::Nano => "nano",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdbMode {
    /// Encoded output over the full v_h range at fixed v_t.
    Staircase,
    /// One divider stage over v_in in [-v_ref, v_ref].
    Stage,
}

/// Divider-chain parameters.
#[derive(Debug, Clone, Args)]
pub struct AdbArgs {
    /// Number of divider stages.
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 3.0)]
    pub vref: f64,
    #[arg(long, default_value_t = 5.0)]
    pub vdd: f64,
    /// Largest accepted v_h [default: vref].
    #[arg(long)]
    pub vin_max: Option<f64>,
    /// Full scale of v_t [default: vdd].
    #[arg(long)]
    pub vt_max: Option<f64>,
}

/// Parameters of a level stack (ideal mapping or VCVS circuit).
#[derive(Debug, Clone, Args)]
pub struct StackArgs {
    #[arg(long, default_value_t = 0.1875)]
    pub delta_h: f64,
    #[arg(long, default_value_t = 0.3125)]
    pub vr: f64,
    #[arg(long = "levels", default_value_t = 16)]
    pub levels: u32,
    /// Full scale of v_t.
    #[arg(long = "vt-max", default_value_t = 5.0)]
    pub vt_max: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode one (v_h, v_t) sample; prints the encoded voltage.
    Encode(EncodeArgs),
    /// Invert the ideal mapping for one encoded voltage.
    Decode(DecodeArgs),
    /// Divider-chain encoder sweep: output staircase, or one stage's residue and bit.
    AdbSim(AdbSimArgs),
    /// Switched-VCVS encoder surface (v_h, v_t, v_d), optionally one two-level stage.
    VcvsSim(VcvsSimArgs),
    /// Divider-chain tuning table: min/max V_REF, Delta_H, level counts and V_R per stage count.
    ConfigTable(ConfigTableArgs),
    /// Link Monte-Carlo: MSE of both sources versus the number of levels.
    Sweep(SweepArgs),
    /// Link Monte-Carlo: SDR versus channel SNR for 1..3 FDM sensors with receiver diversity.
    Sdr(SdrArgs),
    /// Component counts (op-amps, comparators, multiplexers, resistors) per design and stage count.
    Bom(BomArgs),
    /// Per-subcircuit power breakdown of one design.
    Power(PowerArgs),
    /// Power and power-per-level of both designs across stage counts.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub vh: f64,
    #[arg(long)]
    pub vt: f64,
    #[arg(long, value_enum, default_value_t = Encoder::Adb)]
    pub design: Encoder,
    #[command(flatten)]
    pub adb: AdbArgs,
    /// Level spacing for `ideal` and `vcvs`.
    #[arg(long, default_value_t = 0.1875)]
    pub delta_h: f64,
    /// Per-level span for `ideal` and `vcvs`.
    #[arg(long, default_value_t = 0.3125)]
    pub vr: f64,
    /// Level count for `ideal` and `vcvs`.
    #[arg(long, default_value_t = 16)]
    pub levels: u32,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub vd: f64,
    #[command(flatten)]
    pub stack: StackArgs,
    /// Reconstruct v_h at the level base instead of the level midpoint.
    #[arg(long)]
    pub no_half_offset: bool,
    /// Clamp out-of-range voltages instead of rejecting them.
    #[arg(long)]
    pub clip: bool,
}

#[derive(Debug, Args)]
pub struct AdbSimArgs {
    #[arg(long, value_enum, default_value_t = AdbMode::Staircase)]
    pub mode: AdbMode,
    #[command(flatten)]
    pub adb: AdbArgs,
    /// Fixed v_t for the staircase.
    #[arg(long, default_value_t = 2.5)]
    pub vt: f64,
    /// Sweep step in volts.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct VcvsSimArgs {
    #[command(flatten)]
    pub stack: StackArgs,
    /// Activation voltage of the lowest level.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub base: f64,
    /// Emit only the two-level sum of this stage (0-based).
    #[arg(long)]
    pub stage: Option<u32>,
    #[arg(long, default_value_t = 0.01)]
    pub vh_step: f64,
    #[arg(long, default_value_t = 0.5)]
    pub vt_step: f64,
}

#[derive(Debug, Args)]
pub struct ConfigTableArgs {
    /// Stage count(s) [default: 1..8].
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    #[arg(long, default_value_t = 5.0)]
    pub vdd: f64,
    #[arg(long, default_value_t = 3.0)]
    pub vin_max: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Level counts to evaluate.
    #[arg(long, value_delimiter = ',', default_value = "11,20,40,64,73,90,110")]
    pub levels: Vec<u32>,
    /// Channel SNR in dB (`inf` disables noise).
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Amplitude limit of the encoded voltage.
    #[arg(long, default_value_t = 5.0)]
    pub dmax: f64,
}

#[derive(Debug, Args)]
pub struct SdrArgs {
    /// Sensor counts to compare.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub sensors: Vec<u32>,
    /// Channel SNR points in dB.
    #[arg(
        long,
        visible_alias = "snr-db",
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-35,-33,-31"
    )]
    pub csnr_db: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 73)]
    pub levels: u32,
    #[arg(long, default_value_t = 5.0)]
    pub dmax: f64,
}

#[derive(Debug, Args)]
pub struct BomArgs {
    /// Restrict to one design [default: both].
    #[arg(long, value_enum)]
    pub design: Option<DesignArg>,
    /// Stage count(s) [default: 1..7].
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    /// Allow VCVS counts beyond the reference data (not authoritative).
    #[arg(long)]
    pub extrapolate: bool,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long, value_enum, default_value_t = DesignArg::Adb)]
    pub design: DesignArg,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    /// Report a VCVS design with this many levels instead of 2^k.
    #[arg(long, conflicts_with = "k")]
    pub levels: Option<u32>,
    #[arg(long, value_enum, default_value_t = LibArg::Standard)]
    pub lib: LibArg,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Stage count(s) [default: 1..7].
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    #[arg(long, value_enum, default_value_t = LibArg::Standard)]
    pub lib: LibArg,
}
