use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

use manifest::{Failure, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "geproci", version, about = "Exact construction and certification of half-grid configurations in P³")]
pub struct Cli {
    /// Seed for center sampling
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Number of projection trials
    #[arg(long, global = true, default_value_t = 5)]
    pub trials: usize,
    /// Work over Q(ζ_N) instead of the default field
    #[arg(long, global = true)]
    pub conductor: Option<u32>,
    /// Directory for output files and the run manifest
    #[arg(long, global = true)]
    pub emit: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute table 1, 2 or 3 and compare with the embedded reference values
    Tables { which: u8 },
    /// Run the line construction for one row (1-6) or all rows
    Construct {
        #[arg(long, default_value = "all")]
        mu: String,
    },
    /// Classify a configuration and certify it as geproci of type (a, b)
    Verify {
        config: PathBuf,
        #[arg(short, long)]
        a: usize,
        #[arg(short, long)]
        b: usize,
    },
    /// Re-check a certificate, optionally against the configuration it claims to describe
    CheckCert {
        cert: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Count concurrency points for every m in a range
    Concurrency { m_min: u32, m_max: u32 },
    /// List admissible permutation sets for a rational q or "anharmonic"
    Admissible {
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Write a standard configuration: grid, y1, y2, full (with m) or f4
    Standard { kind: String, m: Option<u32> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(dir) = &cli.emit {
                let manifest = RunManifest::new(&cli, &out, start.elapsed());
                if let Err(e) = manifest::write_outputs(dir, &out, &manifest) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

impl From<geproci_core::Error> for Failure {
    fn from(e: geproci_core::Error) -> Failure {
        use geproci_core::Error;
        let code = match &e {
            Error::Input(_) | Error::DegenerateParameter(_) => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}
