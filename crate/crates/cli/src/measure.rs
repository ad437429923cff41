use std::path::PathBuf;

use clap::Subcommand;
use serde::Serialize;
use slopes_core::measures::{equidistribution_test, measure_distance, serre_decompose, DivisorObservation, EmpiricalMeasure};
use slopes_core::poly::cyclotomic_angles;

use crate::config::{parse_range, Format, RunConfig};
use crate::exit::{CliError, Output};

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureCmd {
    /// Atomic and diffuse parts of a sequence of factored divisors.
    Serre {
        /// JSON list of `{degree, divisor}` records, e.g. saved `poly factor` outputs.
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of trailing degrees averaged (default: last half).
        #[arg(long)]
        window: Option<usize>,
    },
    /// Kolmogorov distance between two uniform empirical measures.
    Ks {
        /// Comma-separated atom locations.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Discrepancy of root angles.
    Equi {
        /// Cyclotomic levels 2^m as a:b:step.
        #[arg(long, conflicts_with = "angles", required_unless_present = "angles")]
        m: Option<String>,
        /// File of angles in radians, whitespace or comma separated.
        #[arg(long)]
        angles: Option<PathBuf>,
    },
}

impl MeasureCmd {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureCmd::Serre { .. } => "serre",
            MeasureCmd::Ks { .. } => "ks",
            MeasureCmd::Equi { .. } => "equi",
        }
    }

    pub fn input_files(&self) -> Vec<PathBuf> {
        match self {
            MeasureCmd::Serre { input, .. } => vec![input.clone()],
            MeasureCmd::Equi { angles: Some(p), .. } => vec![p.clone()],
            _ => Vec::new(),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad number {t:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct KsReport {
    schema: &'static str,
    distance: f64,
}

#[derive(Serialize)]
struct EquiRow {
    /// Cyclotomic level exponent, absent for angle files.
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    count: usize,
    star: f64,
    arc: f64,
}

#[derive(Serialize)]
struct EquiReport {
    schema: &'static str,
    rows: Vec<EquiRow>,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cmd: &MeasureCmd, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        MeasureCmd::Serre { input, window } => {
            let obs: Vec<DivisorObservation> = serde_json::from_str(&read(input)?)
                .map_err(|e| CliError::Usage(format!("bad divisor list: {e}")))?;
            let d = serre_decompose(&obs, *window)?;
            let payload = match cfg.format {
                Format::Json => json(&d)?,
                Format::Csv => {
                    let mut s = String::from("divisor,coefficient,coefficient_f64\n");
                    for a in &d.atomic {
                        s.push_str(&format!("{},{},{}\n", a.divisor, a.coefficient, a.coefficient.to_f64()));
                    }
                    s.push_str(&format!("diffuse,{},{}\n", d.diffuse, d.diffuse.to_f64()));
                    s
                }
            };
            Ok(Output::complete(payload))
        }
        MeasureCmd::Ks { a, b } => {
            let ma = EmpiricalMeasure::uniform(&parse_floats(a)?)?;
            let mb = EmpiricalMeasure::uniform(&parse_floats(b)?)?;
            let distance = measure_distance(&ma, &mb)?;
            let payload = match cfg.format {
                Format::Json => json(&KsReport {
                    schema: "slopes.ks.v1",
                    distance,
                })?,
                Format::Csv => format!("distance\n{distance}\n"),
            };
            Ok(Output::complete(payload))
        }
        MeasureCmd::Equi { m, angles } => {
            let mut rows = Vec::new();
            if let Some(path) = angles {
                let a = parse_floats(&read(path)?)?;
                let d = equidistribution_test(&a)?;
                rows.push(EquiRow {
                    m: None,
                    count: a.len(),
                    star: d.star,
                    arc: d.arc,
                });
            } else if let Some(range) = m {
                for level in parse_range(range).map_err(CliError::Usage)? {
                    let level = u32::try_from(level).map_err(|_| CliError::Usage("level too large".into()))?;
                    let a = cyclotomic_angles(level)?;
                    let d = equidistribution_test(&a)?;
                    rows.push(EquiRow {
                        m: Some(level),
                        count: a.len(),
                        star: d.star,
                        arc: d.arc,
                    });
                }
            }
            let payload = match cfg.format {
                Format::Json => json(&EquiReport {
                    schema: "slopes.equi.v1",
                    rows,
                })?,
                Format::Csv => {
                    let mut s = String::from("m,count,star,arc\n");
                    for r in &rows {
                        let m = r.m.map(|v| v.to_string()).unwrap_or_default();
                        s.push_str(&format!("{m},{},{},{}\n", r.count, r.star, r.arc));
                    }
                    s
                }
            };
            Ok(Output::complete(payload))
        }
    }
}
