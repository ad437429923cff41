use clap::{Subcommand, ValueEnum};
use serde::Serialize;
use slopes_core::chebyshev::{
    cheb_boundary, cheb_centered, f_finite, f_finite_sq_exact, f_oracle_sq_exact, verify_jacobi_formulas,
    BoundaryWeight, GlobalTransform, LocalTransform,
};
use slopes_core::Error;

use crate::config::{parse_positive_rational, Format, RunConfig};
use crate::exit::{CliError, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `-alpha ln r`.
    Centered,
    /// L² boundary metric seen from a boundary point.
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightArg {
    AbsSin,
    Uniform,
}

impl From<WeightArg> for BoundaryWeight {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::AbsSin => BoundaryWeight::AbsSin,
            WeightArg::Uniform => BoundaryWeight::Uniform,
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebyCmd {
    /// Tabulate a closed-form transform on [0, 1].
    Eval {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        r: f64,
        /// Number of grid intervals.
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Compare the closed form of F with the normal-equation oracle for all
    /// n <= nmax and orders a <= n, and check the Jacobi construction.
    Verify {
        #[arg(long, default_value_t = 20)]
        nmax: u32,
        /// Radius as "p/q".
        #[arg(long)]
        r: String,
        /// Boundary measure of the oracle.
        #[arg(long, value_enum, default_value_t = WeightArg::AbsSin)]
        weight: WeightArg,
    },
    /// Height bound n * sup c for a weighted sum of local transforms.
    Bound {
        /// `zero[:w]`, `centered:r[:w]`, `boundary:r[:w]` or
        /// `fs:g0,g1,...[:w]`; repeatable.
        #[arg(long = "local", required = true)]
        locals: Vec<String>,
        #[arg(long)]
        n: u32,
    },
}

impl ChebyCmd {
    pub fn name(&self) -> &'static str {
        match self {
            ChebyCmd::Eval { .. } => "eval",
            ChebyCmd::Verify { .. } => "verify",
            ChebyCmd::Bound { .. } => "bound",
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("bad {what}: {s:?}")))
}

fn parse_local(s: &str) -> Result<(LocalTransform, f64), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let (local, rest) = match parts[0] {
        "zero" => (LocalTransform::Zero, &parts[1..]),
        "centered" | "boundary" | "fs" if parts.len() >= 2 => {
            let l = match parts[0] {
                "centered" => LocalTransform::Centered {
                    r: parse_f64(parts[1], "radius")?,
                },
                "boundary" => LocalTransform::Boundary {
                    r: parse_f64(parts[1], "radius")?,
                },
                _ => LocalTransform::FubiniStudy {
                    gamma: parts[1]
                        .split(',')
                        .map(|g| parse_f64(g, "gamma"))
                        .collect::<Result<_, _>>()?,
                },
            };
            (l, &parts[2..])
        }
        _ => return Err(CliError::Usage(format!("bad local transform {s:?}"))),
    };
    let weight = match rest {
        [] => 1.0,
        [w] => parse_f64(w, "weight")?,
        _ => return Err(CliError::Usage(format!("bad local transform {s:?}"))),
    };
    Ok((local, weight))
}

#[derive(Serialize)]
struct EvalPoint {
    alpha: f64,
    value: f64,
}

#[derive(Serialize)]
struct EvalReport {
    schema: &'static str,
    family: Family,
    r: f64,
    points: Vec<EvalPoint>,
    sup: f64,
    argmax: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    nmax: u32,
    r: String,
    weight: WeightArg,
    /// Pairs (n, a) compared exactly.
    pairs_checked: usize,
    /// Largest n for which the Jacobi construction was checked.
    jacobi_nmax: u32,
    /// `ln F / (2n)` at `n = nmax` for each `a`, as a rate table.
    rates: Vec<(u32, f64)>,
}

#[derive(Serialize)]
struct BoundReport {
    schema: &'static str,
    n: u32,
    sup: f64,
    argmax: Vec<f64>,
    height_bound: f64,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cmd: &ChebyCmd, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        ChebyCmd::Eval { family, r, grid } => {
            if *grid == 0 {
                return Err(CliError::Usage("grid must be positive".into()));
            }
            let mut points = Vec::with_capacity(grid + 1);
            for i in 0..=*grid {
                let alpha = i as f64 / *grid as f64;
                let value = match family {
                    Family::Centered => cheb_centered(alpha, *r)?,
                    Family::Boundary => cheb_boundary(alpha, *r)?,
                };
                points.push(EvalPoint { alpha, value });
            }
            let best = points.iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("grid is nonempty");
            let (sup, argmax) = (best.value, best.alpha);
            let payload = match cfg.format {
                Format::Json => json(&EvalReport {
                    schema: "slopes.cheby_eval.v1",
                    family: *family,
                    r: *r,
                    points,
                    sup,
                    argmax,
                })?,
                Format::Csv => {
                    let mut s = String::from("alpha,value\n");
                    for p in &points {
                        s.push_str(&format!("{},{}\n", p.alpha, p.value));
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
        ChebyCmd::Verify { nmax, r, weight } => {
            let r_q = parse_positive_rational(r).map_err(CliError::Usage)?;
            let mut pairs = 0;
            for n in 0..=*nmax {
                for a in 0..=n {
                    let closed = f_finite_sq_exact(n, a, &r_q)?;
                    let oracle = f_oracle_sq_exact(n, a, &r_q, (*weight).into())?;
                    if closed != oracle {
                        return Err(Error::FormulaMismatch(format!(
                            "F^2 at n = {n}, a = {a}: closed form {closed} vs oracle {oracle}"
                        ))
                        .into());
                    }
                    pairs += 1;
                }
            }
            let jacobi_nmax = (*nmax).min(12);
            for n in 0..=jacobi_nmax {
                for a in 0..=n {
                    verify_jacobi_formulas(n, a, &r_q)?;
                }
            }
            let rf = r_q.to_f64();
            let rates = (0..=*nmax)
                .map(|a| Ok((a, f_finite(*nmax, a, rf)?.ln() / (2 * nmax.max(&1)) as f64)))
                .collect::<Result<Vec<_>, Error>>()?;
            let report = VerifyReport {
                schema: "slopes.cheby_verify.v1",
                nmax: *nmax,
                r: r_q.to_string(),
                weight: *weight,
                pairs_checked: pairs,
                jacobi_nmax,
                rates,
            };
            let payload = match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("a,rate\n");
                    for (a, v) in &report.rates {
                        s.push_str(&format!("{a},{v}\n"));
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
        ChebyCmd::Bound { locals, n } => {
            let parsed = locals.iter().map(|s| parse_local(s)).collect::<Result<Vec<_>, _>>()?;
            let g = GlobalTransform::new(parsed)?;
            let (sup, argmax) = g.sup()?;
            let report = BoundReport {
                schema: "slopes.cheby_bound.v1",
                n: *n,
                sup,
                argmax,
                height_bound: *n as f64 * sup,
            };
            let payload = match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => format!("n,sup,height_bound\n{},{},{}\n", report.n, report.sup, report.height_bound),
            };
            Ok(Output::complete(payload))
        }
    }
}
