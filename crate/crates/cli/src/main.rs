use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use silting_core::harness::{HarnessConfig, DEFAULT_BOUND, DEFAULT_ITERS, DEFAULT_SEED};
use silting_core::report::{run, Command, JobSpec};

/// Decide silting for two-term complexes over catalog rings and check base change.
#[derive(Parser, Debug)]
#[command(name = "silting", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON input file
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// RNG seed, decimal or 0x-prefixed hex
    #[arg(long, global = true, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Trials per property
    #[arg(long, global = true, default_value_t = DEFAULT_ITERS)]
    iters: usize,

    /// Oracle enumeration bound
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: usize,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Silting verdict, witness, Thomason set and filter
    Check,
    /// Thomason set only
    Spectrum,
    /// Gabriel filter only
    Filter,
    /// Push the complex along the input hom and check ascent and descent
    Basechange,
    /// Seeded property checks
    Proptest,
    /// Compare the engine with brute-force enumeration
    Oracle,
    /// Validate the stored counterexamples
    Exhibit,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Filter => Command::Filter,
        Cmd::Basechange => Command::Basechange,
        Cmd::Proptest => Command::Proptest,
        Cmd::Oracle => Command::Oracle,
        Cmd::Exhibit => Command::Exhibit,
    };
    let job = JobSpec {
        command,
        input: cli.input,
        config: HarnessConfig {
            seed: cli.seed,
            iters: cli.iters,
            bound: cli.bound,
        },
        json: cli.json,
    };
    let out = run(&job);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.status as u8)
}
