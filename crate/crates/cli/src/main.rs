//! `mistylink` command-line tool.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a vector or reproduction check failed |
//! | 2 | malformed frame |
//! | 3 | bad MAC |
//! | 4 | replayed frame |
//! | 5 | usage, configuration or parse error |
//! | 6 | frame counter exhausted |
//! | 7 | I/O error |

mod commands;
mod state;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mistylink::linklayer::SecurityMode;
use mistylink::Error;

#[derive(Parser)]
#[command(
    name = "mistylink",
    version,
    about = "MISTY1/OFB link-layer security toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a fresh encryption/MAC key pair.
    Keygen {
        /// Derive the keys from this seed instead of system entropy.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Seal a payload into a wire frame.
    Seal(SealArgs),
    /// Authenticate, replay-check and decrypt a wire frame.
    Open(OpenArgs),
    /// Compute the 4-byte CBC-MAC tag of some data.
    Mac(MacArgs),
    /// Check cipher and frame test vectors.
    Vectors(VectorArgs),
    /// Run a scenario file through the channel simulator.
    Simulate(SimulateArgs),
    /// Measure ciphers and modes, or replay the published tables.
    Bench(BenchArgs),
}

#[derive(Args)]
struct KeyArgs {
    #[arg(long, value_name = "HEX")]
    key_enc: String,
    #[arg(long, value_name = "HEX")]
    key_mac: String,
}

#[derive(Args)]
struct SealArgs {
    #[command(flatten)]
    keys: KeyArgs,
    #[arg(long, default_value = "ae", value_parser = parse_mode)]
    mode: SecurityMode,
    #[arg(long)]
    dst: u16,
    #[arg(long)]
    src: u16,
    /// Counter to use for this frame.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    ctr: Option<u32>,
    /// Counter state file (`next_ctr=<n>`); created if missing, advanced on success.
    #[arg(long, value_name = "PATH")]
    state: Option<PathBuf>,
    #[arg(
        long,
        value_name = "HEX",
        conflicts_with = "payload_file",
        required_unless_present = "payload_file"
    )]
    payload: Option<String>,
    #[arg(long, value_name = "PATH")]
    payload_file: Option<PathBuf>,
    /// Write the raw frame here instead of printing hex.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OpenArgs {
    #[command(flatten)]
    keys: KeyArgs,
    #[arg(
        long,
        value_name = "HEX",
        conflicts_with = "frame_file",
        required_unless_present = "frame_file"
    )]
    frame: Option<String>,
    #[arg(long, value_name = "PATH")]
    frame_file: Option<PathBuf>,
    /// Replay state file (`src.<addr>=<ctr>` lines); created if missing.
    #[arg(long, value_name = "PATH")]
    state: Option<PathBuf>,
    /// Write the raw payload here instead of printing hex.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MacArgs {
    #[arg(long, value_name = "HEX")]
    key_mac: String,
    #[arg(
        long,
        value_name = "HEX",
        conflicts_with = "data_file",
        required_unless_present = "data_file"
    )]
    data: Option<String>,
    #[arg(long, value_name = "PATH")]
    data_file: Option<PathBuf>,
}

#[derive(Args)]
struct VectorArgs {
    /// Cipher vector file; defaults to the built-in set.
    #[arg(long, value_name = "PATH")]
    cipher_file: Option<PathBuf>,
    /// Frame vector file; defaults to the built-in set.
    #[arg(long, value_name = "PATH")]
    frame_file: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    scenario: PathBuf,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Rank the published memory and cycle tables and check the result.
    #[arg(long)]
    paper_tables: bool,
    /// Memory table to use with --paper-tables instead of the built-in one.
    #[arg(long, value_name = "PATH", requires = "paper_tables")]
    memory_table: Option<PathBuf>,
    /// Cycle table to use with --paper-tables instead of the built-in one.
    #[arg(long, value_name = "PATH", requires = "paper_tables")]
    cycles_table: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    payload: usize,
    #[arg(long, default_value_t = 15)]
    iterations: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<SecurityMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failed command: what to print and how to exit.
pub(crate) struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 5,
            msg: msg.into(),
        }
    }

    pub(crate) fn check(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MalformedFrame(_) => 2,
            Error::BadMac => 3,
            Error::ReplayRejected { .. } => 4,
            Error::CounterWrap => 6,
            Error::Io(_) => 7,
            _ => 5,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 5 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Keygen { seed } => commands::keygen(seed),
        Command::Seal(a) => commands::seal(a),
        Command::Open(a) => commands::open(a),
        Command::Mac(a) => commands::mac(a),
        Command::Vectors(a) => commands::vectors(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
