//! `qshannon` — scriptable front end for the qshannon library: detection
//! error probabilities, capacities, reliability/cutoff curves, estimation
//! bounds, Y-00 stream-cipher security reports, and quasi-Bell reading
//! tables, as CSV or JSON.

mod config;
mod run;
mod sweep;
mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags/config — exit 2.
    Usage(String),
    /// The math rejected the inputs or a check failed — exit 1.
    Compute(String),
}

impl From<qshannon::Error> for CliError {
    fn from(e: qshannon::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

#[derive(Parser)]
#[command(
    name = "qshannon",
    version,
    about = "Design quantities for coherent-state quantum communication",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output format (default: csv for tables, json for reports)
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,

    /// Units for information/rate columns
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,

    /// Write to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Evaluate sweep points on N threads; row order is unchanged
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Geometric spacing for start:stop:steps sweeps
    #[arg(long, global = true)]
    log: bool,

    /// JSON config file; explicit flags win over its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Re-validate emitted values against the Fock-space oracle
    #[arg(long, global = true, hide = true)]
    oracle_check: bool,

    /// Keystream seed (falls back to $QSHANNON_SEED)
    #[arg(long, global = true)]
    seed: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Detection error probabilities for PSK constellations
    Detect {
        #[command(subcommand)]
        which: DetectCmd,
    },
    /// Channel capacities and quantum-advantage gaps
    Capacity {
        #[command(subcommand)]
        which: CapacityCmd,
    },
    /// Error-exponent curves, cutoff rates, code-length planning
    Reliability(ReliabilityArgs),
    /// Quadrature estimation bounds and squeezed-probe SNR
    Estimate(EstimateArgs),
    /// Y-00 quantum stream cipher
    Cipher {
        #[command(subcommand)]
        which: CipherCmd,
    },
    /// Quasi-Bell quantum reading of a binary phase memory
    Reading(ReadingArgs),
}

#[derive(Subcommand)]
enum DetectCmd {
    /// M-ary PSK detection with a chosen receiver
    Psk(DetectPskArgs),
}

#[derive(Args)]
struct DetectPskArgs {
    /// Number of signals (≥ 2)
    #[arg(long)]
    m: Option<String>,
    /// Photon number |α|² per signal
    #[arg(long)]
    ns: Option<String>,
    /// srm | optimal | homodyne
    #[arg(long)]
    receiver: Option<String>,
    /// Comma-separated priors (default uniform)
    #[arg(long)]
    priors: Option<String>,
}

#[derive(Subcommand)]
enum CapacityCmd {
    /// Holevo vs Shannon capacity of the thermal-noise Gaussian channel
    Gaussian(CapacityGaussianArgs),
    /// SRM mutual information vs Holevo information for M-PSK
    Psk(CapacityPskArgs),
}

#[derive(Args)]
struct CapacityGaussianArgs {
    /// Signal photon number (value or start:stop:steps)
    #[arg(long)]
    ns: Option<String>,
    /// Thermal photon number (value or sweep)
    #[arg(long)]
    nth: Option<String>,
}

#[derive(Args)]
struct CapacityPskArgs {
    #[arg(long)]
    m: Option<String>,
    /// Photon number (value or sweep)
    #[arg(long)]
    ns: Option<String>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ReliabilityArgs {
    #[command(subcommand)]
    sub: Option<ReliabilityCmd>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    ns: Option<String>,
    /// Rate grid in nats (value or start:stop:steps)
    #[arg(long)]
    rate: Option<String>,
    /// Block-error target for the code-length columns
    #[arg(long)]
    target_pe: Option<String>,
}

#[derive(Subcommand)]
enum ReliabilityCmd {
    /// Cutoff rates with optimized priors
    Cutoff(CutoffArgs),
    /// Cutoff rate of the Gaussian coherent-state ensemble
    Gaussian(GaussianCutoffArgs),
}

#[derive(Args)]
struct CutoffArgs {
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    ns: Option<String>,
}

#[derive(Args)]
struct GaussianCutoffArgs {
    /// Codeword energy (value or sweep)
    #[arg(long)]
    nsc: Option<String>,
    /// Thermal parameter λ ≥ 1/2
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Probe photon number (value or sweep)
    #[arg(long)]
    ns: Option<String>,
    /// Transmissivity ε (value or sweep)
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Subcommand)]
enum CipherCmd {
    /// Security metrics of the keyed 2M-PSK stream cipher
    Report(CipherReportArgs),
    /// Monte-Carlo transmission with Bob's homodyne and Eve's heterodyne
    Simulate(CipherSimulateArgs),
}

#[derive(Args)]
struct CipherReportArgs {
    /// Number of bases (power of two)
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    key_bits: Option<String>,
    /// direct | keyed-polarity
    #[arg(long)]
    mapper: Option<String>,
    /// Comma-separated LFSR taps (default 16,14,13,11)
    #[arg(long)]
    taps: Option<String>,
}

#[derive(Args)]
struct CipherSimulateArgs {
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    key_bits: Option<String>,
    #[arg(long)]
    mapper: Option<String>,
    #[arg(long)]
    taps: Option<String>,
    /// Number of transmitted bits
    #[arg(long)]
    slots: Option<String>,
    /// Seed for the receiver noise streams
    #[arg(long)]
    noise_seed: Option<String>,
    /// Seed for the plaintext bits
    #[arg(long)]
    data_seed: Option<String>,
}

#[derive(Args)]
struct ReadingArgs {
    /// Probe energy |α|² (value or start:stop:steps)
    #[arg(long)]
    alpha2: Option<String>,
    /// Prior of the unshifted memory cell
    #[arg(long)]
    xi0: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run::dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            1
        }
    };
    std::process::exit(code);
}
