//! Run configuration shared by all subcommands, and parsers for exact inputs.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use rug::{Integer, Rational};
use serde::Serialize;
use slopes_core::lattice::SearchOptions;
use slopes_core::petersson::{GramSettings, Scheme};

use crate::exit::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    /// Closed-form strip integrals above y = 2 plus 2-D quadrature below.
    Strip,
    /// 2-D quadrature with a bounded tail.
    Direct,
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 256)]
    pub prec: u32,
    /// Petersson quadrature scheme.
    #[arg(long, global = true, value_enum, default_value_t = SchemeArg::Strip)]
    pub scheme: SchemeArg,
    /// Number of q-coefficients in strip sums: "auto" or a fixed count.
    #[arg(long, global = true, default_value = "auto")]
    pub q_precision: String,
    /// Largest dimension for certified enumeration.
    #[arg(long, global = true, default_value_t = 64)]
    pub dim_cap: usize,
    /// Wall-clock budget in seconds for sweeps.
    #[arg(long, global = true, default_value_t = 7200.0)]
    pub time_budget: f64,
    /// BKZ block size used for preprocessing large lattices.
    #[arg(long, global = true, default_value_t = 20)]
    pub bkz_block: usize,
    /// Enumeration node budget.
    #[arg(long, global = true, default_value_t = 2_000_000_000)]
    pub node_budget: u64,
    /// Cache directory (overrides SLOPES_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Skip reading and writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.prec < 64 {
            return Err(CliError::Usage(format!("--prec must be at least 64, got {}", self.prec)));
        }
        if !(self.time_budget > 0.0) {
            return Err(CliError::Usage("--time-budget must be positive".into()));
        }
        if self.node_budget == 0 || self.dim_cap == 0 || self.bkz_block < 2 {
            return Err(CliError::Usage("budgets must be positive and --bkz-block at least 2".into()));
        }
        self.strip_terms()?;
        Ok(())
    }

    pub fn strip_terms(&self) -> Result<Option<usize>, CliError> {
        if self.q_precision == "auto" {
            return Ok(None);
        }
        match self.q_precision.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "--q-precision must be \"auto\" or a positive integer, got {:?}",
                self.q_precision
            ))),
        }
    }

    pub fn gram_settings(&self) -> Result<GramSettings, CliError> {
        let scheme = match self.scheme {
            SchemeArg::Strip => Scheme::StripUnfolding,
            SchemeArg::Direct => Scheme::Direct,
        };
        let mut s = GramSettings::new(self.prec, scheme);
        s.strip_terms = self.strip_terms()?;
        Ok(s)
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            enum_limit: self.dim_cap,
            bkz_block: self.bkz_block,
            node_budget: self.node_budget,
            ..SearchOptions::default()
        }
    }

    /// Parameters that change numeric results, for cache keys.
    pub fn key_params(&self) -> serde_json::Value {
        serde_json::json!({
            "prec": self.prec,
            "scheme": self.scheme,
            "q_precision": self.q_precision,
            "dim_cap": self.dim_cap,
            "bkz_block": self.bkz_block,
            "node_budget": self.node_budget,
            "format": self.format,
        })
    }
}

/// Exact rational from "p/q" or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|_| format!("expected a rational \"p/q\", got {s:?}"))
}

pub fn parse_positive_rational(s: &str) -> Result<Rational, String> {
    let q = parse_rational(s)?;
    if q <= 0 {
        return Err(format!("{s} must be positive"));
    }
    Ok(q)
}

/// `a:b:s` (inclusive), `a:b` (step 1) or a single value.
pub fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range {s:?}"));
    let (a, b, step) = match parts.len() {
        1 => {
            let a = num(parts[0])?;
            (a, a, 1)
        }
        2 => (num(parts[0])?, num(parts[1])?, 1),
        3 => (num(parts[0])?, num(parts[1])?, num(parts[2])?),
        _ => return Err(format!("bad range {s:?}")),
    };
    if step == 0 || b < a {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a..=b).step_by(step).collect())
}

/// Comma-separated integers.
pub fn parse_integers(s: &str) -> Result<Vec<Integer>, String> {
    s.split(',')
        .map(|t| Integer::from_str(t.trim()).map_err(|_| format!("bad integer {t:?} in {s:?}")))
        .collect()
}
