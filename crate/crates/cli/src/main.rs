// Copyright 2026 The cvcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `cvcat`: reproduces the truncation, teleportation and amplification
//! numbers and writes them as CSV or JSON.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// A mistake in the invocation (bad flag value, unreadable config, ...).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(
    name = "cvcat",
    version,
    about = "Squeezed cat-state teleportation and amplification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also evaluate by brute-force quadrature.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fidelity of the best state on Fock levels {0, 2} with an even cat.
    Truncation(commands::TruncationArgs),
    /// Teleportation fidelity over a = cos θ, b = e^{iφ} sin θ.
    FidelityMap(commands::MapArgs),
    /// Teleportation fidelity averaged over the Bloch sphere.
    AvgFidelity(commands::AvgArgs),
    /// Heralded amplification, optionally iterated.
    Amplify(commands::AmplifyArgs),
    /// Engine-vs-oracle regression corpus and reference numbers.
    Validate(commands::ValidateArgs),
    /// A single teleportation run.
    Teleport(commands::TeleportArgs),
    /// Squeezed cat closest to the approximate state of order n.
    Fit(commands::FitArgs),
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("CVCAT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("CVCAT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| anyhow::anyhow!("cannot size the thread pool: {e}"))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() || err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<cvcat::Error>() {
        Some(cvcat::Error::Usage(_)) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Truncation(a) => commands::truncation(a),
        Command::FidelityMap(a) => commands::fidelity_map(a),
        Command::AvgFidelity(a) => commands::avg_fidelity(a),
        Command::Amplify(a) => commands::amplify(a),
        Command::Validate(a) => commands::validate(a),
        Command::Teleport(a) => commands::teleport(a),
        Command::Fit(a) => commands::fit(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
