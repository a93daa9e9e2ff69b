use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Cli;

/// What a command produced: text for stdout plus named files for `--emit`.
pub struct Output {
    pub command: &'static str,
    pub parameters: serde_json::Value,
    pub conductor: Option<u32>,
    pub stdout: String,
    pub files: Vec<(String, String)>,
    /// false on a mathematical mismatch or refutation
    pub ok: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub conductor: Option<u32>,
    pub version: String,
    pub wall_time_seconds: f64,
    /// SHA-256 of stdout and of every emitted file
    pub output_digests: BTreeMap<String, String>,
    pub ok: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(cli: &Cli, out: &Output, elapsed: Duration) -> RunManifest {
        let mut output_digests = BTreeMap::new();
        output_digests.insert("stdout".to_string(), sha256_hex(out.stdout.as_bytes()));
        for (name, body) in &out.files {
            output_digests.insert(name.clone(), sha256_hex(body.as_bytes()));
        }
        RunManifest {
            command: out.command.to_string(),
            parameters: out.parameters.clone(),
            seed: cli.seed,
            conductor: out.conductor,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: elapsed.as_secs_f64(),
            output_digests,
            ok: out.ok,
        }
    }
}

pub fn write_outputs(dir: &Path, out: &Output, manifest: &RunManifest) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, body) in &out.files {
        fs::write(dir.join(name), body)?;
    }
    let m = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), m + "\n")
}
