use std::path::PathBuf;
use std::time::Instant;

use clap::{Subcommand, ValueEnum};
use rug::Integer;
use serde::{Deserialize, Serialize};
use slopes_core::poly::{
    disc_gram, disc_spectrum, factorize, min_poly, m_sequence, DiscMetric, FactoredDivisor, IntPoly, Irreducibility,
    NormKind, SearchMode,
};

use crate::config::{parse_integers, parse_positive_rational, parse_range, parse_rational, Format, RunConfig};
use crate::exit::{CliError, Output, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    /// Uniform boundary L² norm.
    L2,
    /// Maximum modulus on the disc.
    Sup,
}

#[derive(clap::Args, Debug, Serialize)]
pub struct Disc {
    /// Center as "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub center: String,
    /// Radius as "p/q".
    #[arg(long)]
    pub radius: String,
}

impl Disc {
    fn metric(&self, norm: NormKind) -> Result<DiscMetric, CliError> {
        let c = parse_rational(&self.center).map_err(CliError::Usage)?;
        let r = parse_positive_rational(&self.radius).map_err(CliError::Usage)?;
        Ok(DiscMetric::with_radius(c, r, norm)?)
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyCmd {
    /// Exact L² Gram matrix of 1, z, ..., z^n.
    Gram {
        #[command(flatten)]
        disc: Disc,
        #[arg(long)]
        n: usize,
    },
    /// All n + 1 slopes with witnesses.
    Minima {
        #[command(flatten)]
        disc: Disc,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = NormArg::L2)]
        norm: NormArg,
    },
    /// Table of m(n, E) and m(n, E)^(1/n).
    Sweep {
        #[command(flatten)]
        disc: Disc,
        /// Degrees as a:b:step.
        #[arg(long)]
        degrees: String,
        #[arg(long, value_enum, default_value_t = NormArg::Sup)]
        norm: NormArg,
    },
    /// Factorization of a polynomial given by coefficients, or of the
    /// minimal polynomial of degree n on a disc.
    Factor {
        /// Comma-separated coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "n")]
        coeffs: Option<String>,
        #[arg(long, requires_all = ["center", "radius"])]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long)]
        radius: Option<String>,
        /// Force pruned enumeration (default above degree 30).
        #[arg(long)]
        heuristic: bool,
        /// JSON file of known irreducible factors; updated with new certified ones.
        #[arg(long)]
        pool: Option<PathBuf>,
    },
}

impl PolyCmd {
    pub fn name(&self) -> &'static str {
        match self {
            PolyCmd::Gram { .. } => "gram",
            PolyCmd::Minima { .. } => "minima",
            PolyCmd::Sweep { .. } => "sweep",
            PolyCmd::Factor { .. } => "factor",
        }
    }

    /// Factoring with a pool reads and writes the pool file.
    pub fn cacheable(&self) -> bool {
        !matches!(self, PolyCmd::Factor { pool: Some(_), .. })
    }
}

fn norm_kind(n: NormArg) -> NormKind {
    match n {
        NormArg::L2 => NormKind::L2Boundary,
        NormArg::Sup => NormKind::Sup,
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    ln_m: f64,
    root: f64,
    certified: bool,
}

#[derive(Serialize)]
struct SweepReport {
    schema: &'static str,
    norm: NormArg,
    complete: bool,
    rows: Vec<SweepRow>,
    roots_nonincreasing: bool,
}

/// A list of these is accepted by `measure serre`.
#[derive(Serialize, Deserialize)]
pub struct FactorReport {
    pub schema: String,
    pub degree: usize,
    pub poly: IntPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    pub divisor: FactoredDivisor,
}

fn load_pool(path: &PathBuf) -> Result<Vec<IntPoly>, CliError> {
    match std::fs::read_to_string(path) {
        Ok(t) => serde_json::from_str(&t).map_err(|e| CliError::Usage(format!("bad pool file: {e}"))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

pub fn run(cmd: &PolyCmd, cfg: &RunConfig) -> Result<Output, CliError> {
    let opts = cfg.search_options();
    match cmd {
        PolyCmd::Gram { disc, n } => {
            let g = disc_gram(&disc.metric(NormKind::L2Boundary)?, *n);
            let payload = match cfg.format {
                Format::Json => json(&g.to_json())?,
                Format::Csv => {
                    let mut s = String::from("i,j,value\n");
                    let e = g.to_json().exact.unwrap_or_default();
                    for (i, row) in e.iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            s.push_str(&format!("{i},{j},{v}\n"));
                        }
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
        PolyCmd::Minima { disc, n, norm } => {
            let s = disc_spectrum(&disc.metric(norm_kind(*norm))?, *n, &opts)?;
            let payload = match cfg.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&s)?;
                    v["schema"] = "slopes.poly_minima.v1".into();
                    json(&v)?
                }
                Format::Csv => {
                    let mut out = String::from("i,lambda,lambda_over_n,witness\n");
                    for (i, (l, w)) in s.spectrum.values.iter().zip(&s.witnesses).enumerate() {
                        let c: Vec<String> = w.coeffs().iter().map(Integer::to_string).collect();
                        out.push_str(&format!("{},{},{},{}\n", i + 1, l, l / *n as f64, c.join(";")));
                    }
                    out
                }
            };
            let status = if s.certified || *n > opts.enum_limit { Status::Complete } else { Status::Partial };
            Ok(Output { payload, status })
        }
        PolyCmd::Sweep { disc, degrees, norm } => {
            let metric = disc.metric(norm_kind(*norm))?;
            let degs = parse_range(degrees).map_err(CliError::Usage)?;
            if degs.contains(&0) {
                return Err(CliError::Usage("degrees must be positive".into()));
            }
            let start = Instant::now();
            let mut rows = Vec::new();
            let mut complete = true;
            for &n in &degs {
                if start.elapsed().as_secs_f64() > cfg.time_budget {
                    complete = false;
                    break;
                }
                let e = &m_sequence(&metric, &[n], &opts)?.entries[0];
                rows.push(SweepRow {
                    n,
                    ln_m: e.ln_m,
                    root: e.root,
                    certified: e.certified,
                });
            }
            let report = SweepReport {
                schema: "slopes.sweep.v1",
                norm: *norm,
                complete,
                roots_nonincreasing: rows.windows(2).all(|w| w[1].root <= w[0].root * (1.0 + 1e-12)),
                rows,
            };
            let payload = match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("n,ln_m,certified,root\n");
                    for r in &report.rows {
                        s.push_str(&format!("{},{},{},{}\n", r.n, r.ln_m, r.certified, r.root));
                    }
                    s
                }
            };
            let status = if complete { Status::Complete } else { Status::Partial };
            Ok(Output { payload, status })
        }
        PolyCmd::Factor {
            coeffs,
            n,
            center,
            radius,
            heuristic,
            pool,
        } => {
            let (p, norm_sq, certified) = match (coeffs, n) {
                (Some(c), None) => {
                    let p = IntPoly::new(parse_integers(c).map_err(CliError::Usage)?);
                    if p.degree().unwrap_or(0) == 0 {
                        return Err(CliError::Usage("need a nonconstant polynomial".into()));
                    }
                    (p, None, None)
                }
                (None, Some(n)) => {
                    let disc = Disc {
                        center: center.clone().unwrap_or_default(),
                        radius: radius.clone().unwrap_or_default(),
                    };
                    let mode = if *heuristic || *n > 30 { SearchMode::Heuristic } else { SearchMode::Exact };
                    let mp = min_poly(&disc.metric(NormKind::L2Boundary)?, *n, mode, &opts)?;
                    (mp.poly, Some(mp.norm_sq), Some(mp.certified))
                }
                _ => return Err(CliError::Usage("give either --coeffs or --n with --center/--radius".into())),
            };
            let known = match pool {
                Some(path) => load_pool(path)?,
                None => Vec::new(),
            };
            let fd = factorize(&p, &known)?;
            if let Some(path) = pool {
                let mut all = known.clone();
                for f in &fd.factors {
                    if f.irreducibility == Irreducibility::Certified && !all.contains(&f.poly) {
                        all.push(f.poly.clone());
                    }
                }
                all.sort();
                std::fs::write(path, serde_json::to_string_pretty(&all)? + "\n")?;
            }
            let report = FactorReport {
                schema: "slopes.factor.v1".into(),
                degree: p.degree().unwrap_or(0),
                poly: p,
                norm_sq,
                certified,
                divisor: fd,
            };
            let payload = match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("factor,degree,multiplicity,irreducibility\n");
                    for f in &report.divisor.factors {
                        s.push_str(&format!(
                            "{},{},{},{:?}\n",
                            f.poly,
                            f.poly.degree().unwrap_or(0),
                            f.multiplicity,
                            f.irreducibility
                        ));
                    }
                    for (c, m) in &report.divisor.cofactors {
                        s.push_str(&format!("{},{},{},Unknown\n", c, c.degree().unwrap_or(0), m));
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
    }
}
