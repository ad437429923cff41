//! `slopes`: computes heights, successive minima and slope measures for cusp
//! forms and integer polynomials, with a persistent result cache.

mod cache;
mod cheby;
mod config;
mod exit;
mod measure;
mod modular;
mod poly;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use cache::{Cache, Lookup};
use config::RunConfig;
use exit::{CliError, Output, Status};

#[derive(Parser, Debug)]
#[command(name = "slopes", version, about = "Heights and successive minima of lattices of sections")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral cusp forms of weight 12k under the Petersson metric.
    Modular {
        #[command(subcommand)]
        cmd: modular::ModularCmd,
    },
    /// Integer polynomials on discs.
    Poly {
        #[command(subcommand)]
        cmd: poly::PolyCmd,
    },
    /// Local and global Chebyshev transforms.
    Cheby {
        #[command(subcommand)]
        cmd: cheby::ChebyCmd,
    },
    /// Measures, atomic decompositions and discrepancies.
    Measure {
        #[command(subcommand)]
        cmd: measure::MeasureCmd,
    },
}

/// Operation name and parameters for the cache, or `None` when the command
/// must always run.
fn cache_request(cmd: &Command) -> Result<Option<(String, serde_json::Value)>, CliError> {
    let (op, params) = match cmd {
        Command::Modular { cmd } => (format!("modular.{}", cmd.name()), serde_json::to_value(cmd)?),
        Command::Poly { cmd } => {
            if !cmd.cacheable() {
                return Ok(None);
            }
            (format!("poly.{}", cmd.name()), serde_json::to_value(cmd)?)
        }
        Command::Cheby { cmd } => (format!("cheby.{}", cmd.name()), serde_json::to_value(cmd)?),
        Command::Measure { cmd } => {
            let mut v = serde_json::to_value(cmd)?;
            let inputs: Vec<String> = cmd
                .input_files()
                .iter()
                .map(|p| std::fs::read(p).map(|b| hex::encode(Sha256::digest(&b))))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("cannot read input: {e}")))?;
            v["input_sha256"] = inputs.into();
            (format!("measure.{}", cmd.name()), v)
        }
    };
    Ok(Some((op, params)))
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let cfg = &cli.cfg;
    match &cli.cmd {
        Command::Modular { cmd } => modular::run(cmd, cfg),
        Command::Poly { cmd } => poly::run(cmd, cfg),
        Command::Cheby { cmd } => cheby::run(cmd, cfg),
        Command::Measure { cmd } => measure::run(cmd, cfg),
    }
}

fn run(cli: &Cli) -> Result<Status, CliError> {
    cli.cfg.validate()?;
    let cache = if cli.cfg.no_cache {
        None
    } else {
        Cache::locate(cli.cfg.cache_dir.as_deref())
    };
    let request = cache_request(&cli.cmd)?;
    let key = request.map(|(op, mut params)| {
        params["config"] = cli.cfg.key_params();
        cache::key(&op, &params)
    });
    let mut cached = None;
    if let (Some(c), Some(k)) = (&cache, &key) {
        match c.get(k) {
            Lookup::Hit(p) => cached = Some(p),
            Lookup::Corrupt => eprintln!("cache entry {k} failed its checksum; recomputing"),
            Lookup::Miss => {}
        }
    }
    let out = match cached {
        Some(payload) => Output::complete(payload),
        None => {
            let out = execute(cli)?;
            if out.status == Status::Complete {
                if let (Some(c), Some(k)) = (&cache, &key) {
                    if let Err(e) = c.put(k, &out.payload) {
                        eprintln!("could not write cache entry: {e}");
                    }
                }
            }
            out
        }
    };
    if let Some(path) = &cli.cfg.out {
        std::fs::write(path, &out.payload)?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.payload.as_bytes())?;
    stdout.flush()?;
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Status::Complete) => ExitCode::SUCCESS,
        Ok(Status::Partial) => {
            eprintln!("budget exhausted; output is partial");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
