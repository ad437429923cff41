use clap::Subcommand;
use rug::Integer;
use serde::Serialize;
use slopes_core::measures::{empirical_measure, filtered_measure, EmpiricalMeasure};
use slopes_core::petersson::{
    congruence_test, ell, gram_matrix_with, hecke_operator, successive_maxima, support_bound, CuspLattice,
};

use crate::config::{parse_integers, Format, RunConfig};
use crate::exit::{CliError, Output, Status};

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularCmd {
    /// Petersson Gram matrix of the basis Delta^k j^(k-l).
    Gram {
        #[arg(long)]
        k: u32,
    },
    /// Successive maxima lambda_i with witnesses and ell-bound margins.
    Minima {
        #[arg(long)]
        k: u32,
    },
    /// Empirical measure of the maxima, optionally on the sublattice of
    /// forms vanishing to order at least k/L.
    Measure {
        #[arg(long)]
        k: u32,
        #[arg(long = "filter")]
        filter: Option<u32>,
    },
    /// Matrix and characteristic polynomial of T_p.
    Hecke {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        /// Number of q-coefficients (default p k + 2).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Congruence classification of a form given by basis coordinates.
    Congruence {
        #[arg(long)]
        k: u32,
        /// Comma-separated coordinates in the basis f_1..f_k.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
}

impl ModularCmd {
    pub fn name(&self) -> &'static str {
        match self {
            ModularCmd::Gram { .. } => "gram",
            ModularCmd::Minima { .. } => "minima",
            ModularCmd::Measure { .. } => "measure",
            ModularCmd::Hecke { .. } => "hecke",
            ModularCmd::Congruence { .. } => "congruence",
        }
    }
}

fn check_k(k: u32) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Usage("weight index k must be at least 1 (weight 12k)".into()));
    }
    Ok(())
}

fn lattice(k: u32, cfg: &RunConfig) -> Result<CuspLattice, CliError> {
    check_k(k)?;
    Ok(gram_matrix_with(k, &cfg.gram_settings()?)?)
}

#[derive(Serialize)]
struct MinimaRow {
    i: usize,
    lambda: f64,
    lambda_over_k: f64,
    order: u32,
    /// `ell(order / k) + ln(12k) / k`.
    ell_bound: f64,
    margin: f64,
    witness: Vec<String>,
}

#[derive(Serialize)]
struct MinimaReport {
    schema: &'static str,
    k: u32,
    prec_bits: u32,
    error_bound: f64,
    certified: bool,
    support_bound: f64,
    rows: Vec<MinimaRow>,
}

#[derive(Serialize)]
struct MeasureReport<'a> {
    schema: &'static str,
    k: u32,
    filter: Option<u32>,
    #[serde(flatten)]
    measure: &'a EmpiricalMeasure,
}

#[derive(Serialize)]
struct HeckeReport {
    schema: &'static str,
    p: u32,
    k: u32,
    matrix: Vec<Vec<String>>,
    charpoly: Vec<String>,
    trace: String,
    discriminant: String,
    squarefree: bool,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cmd: &ModularCmd, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        ModularCmd::Gram { k } => {
            let lat = lattice(*k, cfg)?;
            let payload = match cfg.format {
                Format::Json => json(&lat.to_json())?,
                Format::Csv => {
                    let j = lat.gram.to_json();
                    let mut s = String::from("i,j,value\n");
                    for i in 0..lat.gram.dim() {
                        for jj in 0..lat.gram.dim() {
                            let v = lat.gram.entry_float(i, jj, lat.prec);
                            s.push_str(&format!("{i},{jj},{}e^{}\n", v.to_string_radix(10, Some(30)), j.log_scale));
                        }
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
        ModularCmd::Minima { k } => {
            let lat = lattice(*k, cfg)?;
            let m = successive_maxima(&lat)?;
            let kf = *k as f64;
            let mut rows = Vec::new();
            for (i, ((v, o), w)) in m.values.iter().zip(&m.orders).zip(&m.witnesses).enumerate() {
                let bound = ell(*o as f64 / kf)? + (12.0 * kf).ln() / kf;
                rows.push(MinimaRow {
                    i: i + 1,
                    lambda: *v,
                    lambda_over_k: v / kf,
                    order: *o,
                    ell_bound: bound,
                    margin: bound - v / kf,
                    witness: w.iter().map(Integer::to_string).collect(),
                });
            }
            eprintln!("{:>3} {:>14} {:>6} {:>12} {:>10}", "i", "lambda/k", "ord", "ell bound", "margin");
            for r in &rows {
                eprintln!(
                    "{:>3} {:>14.6} {:>6} {:>12.6} {:>10.4}",
                    r.i, r.lambda_over_k, r.order, r.ell_bound, r.margin
                );
            }
            let report = MinimaReport {
                schema: "slopes.modular_minima.v1",
                k: *k,
                prec_bits: lat.prec,
                error_bound: lat.error_bound,
                certified: m.certified,
                support_bound: support_bound(),
                rows,
            };
            let payload = match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("i,lambda,lambda_over_k,order,ell_bound,margin,witness\n");
                    for r in &report.rows {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            r.i,
                            r.lambda,
                            r.lambda_over_k,
                            r.order,
                            r.ell_bound,
                            r.margin,
                            r.witness.join(";")
                        ));
                    }
                    s
                }
            };
            let status = if m.certified { Status::Complete } else { Status::Partial };
            Ok(Output { payload, status })
        }
        ModularCmd::Measure { k, filter } => {
            let lat = lattice(*k, cfg)?;
            let measure = match filter {
                Some(l) => filtered_measure(&lat, *l)?,
                None => empirical_measure(&successive_maxima(&lat)?.spectrum())?,
            };
            let payload = match cfg.format {
                Format::Json => json(&MeasureReport {
                    schema: "slopes.measure.v1",
                    k: *k,
                    filter: *filter,
                    measure: &measure,
                })?,
                Format::Csv => measure.to_csv(),
            };
            Ok(Output::complete(payload))
        }
        ModularCmd::Hecke { p, k, n } => {
            check_k(*k)?;
            let h = hecke_operator(*p, *k, n.unwrap_or(p * k + 2))?;
            let cp = &h.charpoly;
            let disc = cp.discriminant();
            let trace: Integer = (0..h.matrix.len()).map(|i| h.matrix[i][i].clone()).sum();
            let report = HeckeReport {
                schema: "slopes.hecke.v1",
                p: *p,
                k: *k,
                matrix: h.matrix.iter().map(|r| r.iter().map(Integer::to_string).collect()).collect(),
                charpoly: cp.coeffs().iter().map(Integer::to_string).collect(),
                trace: trace.to_string(),
                squarefree: disc != 0,
                discriminant: disc.to_string(),
            };
            let payload = match cfg.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("row,coefficients\n");
                    for (i, r) in report.matrix.iter().enumerate() {
                        s.push_str(&format!("{},{}\n", i + 1, r.join(";")));
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
        ModularCmd::Congruence { k, coeffs } => {
            check_k(*k)?;
            let f = parse_integers(coeffs).map_err(CliError::Usage)?;
            let mut r = serde_json::to_value(congruence_test(&f, *k)?)?;
            r["schema"] = "slopes.congruence.v1".into();
            r["k"] = (*k).into();
            let payload = match cfg.format {
                Format::Json => json(&r)?,
                Format::Csv => format!("verdict,content\n{},{}\n", r["verdict"].as_str().unwrap_or(""), r["content"].as_str().unwrap_or("")),
            };
            Ok(Output::complete(payload))
        }
    }
}
