//! Positive-definite quadratic forms, reduction, shortest vectors and
//! successive minima.

mod enumerate;
mod minima;
mod reduce;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ScaledReal;

pub use enumerate::{enumerate, EnumMode, EnumOutcome};
pub use minima::{
    short_vectors, shortest_vector, successive_minima, Minima, SearchOptions, ShortVectors, ShortestVector,
    NEAR_TIE_GAP,
};
pub use reduce::{bkz_reduce, lll_reduce, Reduced};
pub(crate) use minima::Echelon;

/// Entries of a Gram matrix.
#[derive(Clone, Debug)]
pub enum GramEntries {
    Exact(Vec<Vec<Rational>>),
    /// Entries carry a relative error of at most `eps`.
    Approx { entries: Vec<Vec<Float>>, eps: f64 },
}

/// A symmetric positive-definite form whose true value is
/// `entries * e^log_scale`.
#[derive(Clone, Debug)]
pub struct GramForm {
    pub entries: GramEntries,
    pub log_scale: f64,
}

/// A squared norm in the units of a [`GramForm`] (before `log_scale`).
#[derive(Clone, Debug, PartialEq)]
pub enum NormSq {
    Exact(Rational),
    Approx(Float),
}

impl NormSq {
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            NormSq::Exact(q) => Float::with_val(prec, q),
            NormSq::Approx(x) => Float::with_val(prec, x),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }

    pub fn ln(&self) -> f64 {
        self.to_float(128).ln().to_f64()
    }

    pub fn is_positive(&self) -> bool {
        match self {
            NormSq::Exact(q) => *q > 0,
            NormSq::Approx(x) => *x > 0,
        }
    }
}

impl GramForm {
    pub fn exact(entries: Vec<Vec<Rational>>) -> Result<Self> {
        check_square(entries.len(), entries.iter().map(|r| r.len()))?;
        for i in 0..entries.len() {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Domain("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(GramForm {
            entries: GramEntries::Exact(entries),
            log_scale: 0.0,
        })
    }

    pub fn exact_from_integers(entries: &[Vec<i64>]) -> Result<Self> {
        Self::exact(
            entries
                .iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn approx(entries: Vec<Vec<Float>>, eps: f64, log_scale: f64) -> Result<Self> {
        check_square(entries.len(), entries.iter().map(|r| r.len()))?;
        Ok(GramForm {
            entries: GramEntries::Approx { entries, eps },
            log_scale,
        })
    }

    pub fn identity(n: usize) -> Self {
        let e = (0..n)
            .map(|i| (0..n).map(|j| Rational::from((i == j) as i32)).collect())
            .collect();
        GramForm {
            entries: GramEntries::Exact(e),
            log_scale: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.entries {
            GramEntries::Exact(e) => e.len(),
            GramEntries::Approx { entries, .. } => entries.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, GramEntries::Exact(_))
    }

    /// Relative error bound of the entries (0 for exact forms).
    pub fn eps(&self) -> f64 {
        match &self.entries {
            GramEntries::Exact(_) => 0.0,
            GramEntries::Approx { eps, .. } => *eps,
        }
    }

    /// Working precision that represents every entry faithfully.
    pub fn natural_prec(&self) -> u32 {
        match &self.entries {
            GramEntries::Exact(e) => {
                let bits = e
                    .iter()
                    .flatten()
                    .map(|q| q.numer().significant_bits() + q.denom().significant_bits())
                    .max()
                    .unwrap_or(1);
                (bits + 64).max(128)
            }
            GramEntries::Approx { entries, .. } => {
                entries.iter().flatten().map(|x| x.prec()).max().unwrap_or(128).max(64)
            }
        }
    }

    pub fn entry_float(&self, i: usize, j: usize, prec: u32) -> Float {
        match &self.entries {
            GramEntries::Exact(e) => Float::with_val(prec, &e[i][j]),
            GramEntries::Approx { entries, .. } => Float::with_val(prec, &entries[i][j]),
        }
    }

    /// `x^T G x` for an integer coefficient vector.
    pub fn norm_sq(&self, x: &[Integer]) -> NormSq {
        assert_eq!(x.len(), self.dim());
        match &self.entries {
            GramEntries::Exact(e) => {
                let mut s = Rational::new();
                for i in 0..x.len() {
                    if x[i] == 0 {
                        continue;
                    }
                    let mut row = Rational::new();
                    for j in 0..x.len() {
                        if x[j] != 0 {
                            row += Rational::from(&e[i][j] * &x[j]);
                        }
                    }
                    s += row * &x[i];
                }
                NormSq::Exact(s)
            }
            GramEntries::Approx { entries, .. } => {
                let prec = self.natural_prec() + 64;
                let mut s = Float::with_val(prec, 0);
                for i in 0..x.len() {
                    if x[i] == 0 {
                        continue;
                    }
                    let mut row = Float::with_val(prec, 0);
                    for j in 0..x.len() {
                        if x[j] != 0 {
                            row += Float::with_val(prec, &entries[i][j]) * &x[j];
                        }
                    }
                    s += row * &x[i];
                }
                NormSq::Approx(s)
            }
        }
    }

    /// The form restricted to the sublattice spanned by the given basis indices.
    pub fn restrict(&self, idx: &[usize]) -> GramForm {
        let entries = match &self.entries {
            GramEntries::Exact(e) => GramEntries::Exact(
                idx.iter().map(|&i| idx.iter().map(|&j| e[i][j].clone()).collect()).collect(),
            ),
            GramEntries::Approx { entries, eps } => GramEntries::Approx {
                entries: idx
                    .iter()
                    .map(|&i| idx.iter().map(|&j| entries[i][j].clone()).collect())
                    .collect(),
                eps: *eps,
            },
        };
        GramForm {
            entries,
            log_scale: self.log_scale,
        }
    }

    /// The form in the basis given by the rows of `u`: `U G U^T`.
    pub fn transform(&self, u: &[Vec<Integer>]) -> GramForm {
        let n = self.dim();
        let m = u.len();
        match &self.entries {
            GramEntries::Exact(e) => {
                let mut tmp = vec![vec![Rational::new(); n]; m];
                for a in 0..m {
                    for j in 0..n {
                        let mut s = Rational::new();
                        for i in 0..n {
                            if u[a][i] != 0 {
                                s += Rational::from(&e[i][j] * &u[a][i]);
                            }
                        }
                        tmp[a][j] = s;
                    }
                }
                let mut out = vec![vec![Rational::new(); m]; m];
                for a in 0..m {
                    for b in 0..m {
                        let mut s = Rational::new();
                        for j in 0..n {
                            if u[b][j] != 0 {
                                s += Rational::from(&tmp[a][j] * &u[b][j]);
                            }
                        }
                        out[a][b] = s;
                    }
                }
                GramForm {
                    entries: GramEntries::Exact(out),
                    log_scale: self.log_scale,
                }
            }
            GramEntries::Approx { entries, eps } => {
                let prec = self.natural_prec();
                let mut out = vec![vec![Float::new(prec); m]; m];
                for a in 0..m {
                    for b in 0..m {
                        let mut s = Float::with_val(prec, 0);
                        for i in 0..n {
                            if u[a][i] == 0 {
                                continue;
                            }
                            for j in 0..n {
                                if u[b][j] != 0 {
                                    s += Float::with_val(prec, &entries[i][j] * &u[a][i]) * &u[b][j];
                                }
                            }
                        }
                        out[a][b] = s;
                    }
                }
                GramForm {
                    entries: GramEntries::Approx { entries: out, eps: *eps },
                    log_scale: self.log_scale,
                }
            }
        }
    }

    /// Cholesky factorization; fails if the form is not positive definite.
    ///
    /// Exact forms are checked exactly through their leading principal minors.
    pub fn cholesky(&self) -> Result<Vec<Vec<Float>>> {
        let n = self.dim();
        if let GramEntries::Exact(_) = &self.entries {
            if self.leading_minors_exact().iter().any(|d| *d <= 0) {
                return Err(Error::NotPositiveDefinite);
            }
        }
        let prec = self.natural_prec() + 64;
        let mut l = vec![vec![Float::new(prec); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.entry_float(i, j, prec);
                for k in 0..j {
                    s -= Float::with_val(prec, &l[i][k] * &l[j][k]);
                }
                if i == j {
                    if s <= 0 {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[i][i] = s.sqrt();
                } else {
                    l[i][j] = s / &l[j][j];
                }
            }
        }
        Ok(l)
    }

    /// Exact leading principal minors of an exact form.
    pub fn leading_minors_exact(&self) -> Vec<Rational> {
        let GramEntries::Exact(e) = &self.entries else {
            panic!("leading_minors_exact on an approximate form");
        };
        let n = e.len();
        let mut a: Vec<Vec<Rational>> = e.clone();
        let mut out = Vec::with_capacity(n);
        let mut det = Rational::from(1);
        for k in 0..n {
            // No pivoting: a zero pivot means a singular leading minor.
            let p = a[k][k].clone();
            det *= &p;
            out.push(det.clone());
            if p == 0 {
                for _ in k + 1..n {
                    out.push(Rational::new());
                }
                break;
            }
            for i in k + 1..n {
                if a[i][k] == 0 {
                    continue;
                }
                let f = Rational::from(&a[i][k] / &p);
                for j in k..n {
                    let t = Rational::from(&f * &a[k][j]);
                    a[i][j] -= t;
                }
            }
        }
        out
    }

    /// Exact determinant of an exact form.
    pub fn det_exact(&self) -> Rational {
        self.leading_minors_exact().pop().unwrap_or_else(|| Rational::from(1))
    }
}

fn check_square(n: usize, rows: impl Iterator<Item = usize>) -> Result<()> {
    for len in rows {
        if len != n {
            return Err(Error::Domain("Gram matrix is not square".into()));
        }
    }
    Ok(())
}

/// Which normalization turns a squared norm into a slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// Hermitian norms: `lambda = -1/2 ln(norm^2)`.
    Hermitian,
    /// Sup norms given as plain (not squared) values: `lambda = -ln(norm)`.
    SupNorm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeSpectrum {
    pub n: i64,
    /// Sorted in descending order.
    pub values: Vec<f64>,
    pub convention: Convention,
}

impl SlopeSpectrum {
    pub fn rank(&self) -> usize {
        self.values.len()
    }
}

/// Slopes from minima given as natural logs (already including any scale).
pub fn slope_spectrum_from_logs(ln_minima: &[f64], n: i64, convention: Convention) -> SlopeSpectrum {
    let mut values: Vec<f64> = ln_minima
        .iter()
        .map(|&l| match convention {
            Convention::Hermitian => -0.5 * l,
            Convention::SupNorm => -l,
        })
        // Adding 0.0 turns -0.0 into +0.0.
        .map(|v| v + 0.0)
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    SlopeSpectrum {
        n,
        values,
        convention,
    }
}

/// Slopes `-1/2 (ln m + log_scale)` (Hermitian) or `-(ln m + log_scale)` (sup).
pub fn slope_spectrum(minima: &[NormSq], log_scale: f64, n: i64, convention: Convention) -> Result<SlopeSpectrum> {
    let mut logs = Vec::with_capacity(minima.len());
    for m in minima {
        if !m.is_positive() {
            return Err(Error::Domain("minima must be positive".into()));
        }
        // ln 1 is exactly 0, which keeps unit spectra bitwise zero.
        let l = match m {
            NormSq::Exact(q) if *q == 1 => 0.0,
            _ => m.ln(),
        };
        logs.push(l + log_scale);
    }
    Ok(slope_spectrum_from_logs(&logs, n, convention))
}

/// JSON view of a Gram form.
#[derive(Serialize, Deserialize)]
pub struct GramFormJson {
    pub schema: String,
    pub dim: usize,
    pub kind: String,
    pub eps: f64,
    pub log_scale: f64,
    /// Exact entries as "p/q" strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<Vec<String>>>,
    /// Approximate entries as mantissa/log-scale pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<Vec<Vec<ScaledReal>>>,
}

impl GramForm {
    pub fn to_json(&self) -> GramFormJson {
        match &self.entries {
            GramEntries::Exact(e) => GramFormJson {
                schema: "slopes.gram.v1".into(),
                dim: e.len(),
                kind: "exact".into(),
                eps: 0.0,
                log_scale: self.log_scale,
                exact: Some(e.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect()),
                approx: None,
            },
            GramEntries::Approx { entries, eps } => GramFormJson {
                schema: "slopes.gram.v1".into(),
                dim: entries.len(),
                kind: "approx".into(),
                eps: *eps,
                log_scale: self.log_scale,
                exact: None,
                approx: Some(
                    entries
                        .iter()
                        .map(|r| r.iter().map(ScaledReal::from_float).collect())
                        .collect(),
                ),
            },
        }
    }

    pub fn from_json(j: &GramFormJson) -> Result<Self> {
        if let Some(e) = &j.exact {
            let rows = e
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| s.parse::<Rational>().map_err(|e| Error::Parse(e.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut g = GramForm::exact(rows)?;
            g.log_scale = j.log_scale;
            return Ok(g);
        }
        if let Some(a) = &j.approx {
            let prec = a.iter().flatten().map(|s| s.mantissa.prec()).max().unwrap_or(128);
            let rows = a.iter().map(|r| r.iter().map(|s| s.to_float(prec)).collect()).collect();
            return GramForm::approx(rows, j.eps, j.log_scale);
        }
        Err(Error::Parse("Gram JSON has neither exact nor approx entries".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_rejects_indefinite() {
        let g = GramForm::exact_from_integers(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(g.cholesky().unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(GramForm::exact_from_integers(&[vec![1, 2], vec![0, 1]]).is_err());
    }

    #[test]
    fn spectrum_of_units_is_zero() {
        let m = vec![NormSq::Exact(Rational::from(1)); 3];
        let s = slope_spectrum(&m, 0.0, 3, Convention::Hermitian).unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn spectrum_rejects_nonpositive() {
        let m = vec![NormSq::Exact(Rational::new())];
        assert!(slope_spectrum(&m, 0.0, 1, Convention::Hermitian).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = GramForm::exact(vec![
            vec![Rational::from(1), Rational::from((1, 4))],
            vec![Rational::from((1, 4)), Rational::from((1, 8))],
        ])
        .unwrap();
        let j = serde_json::to_string(&g.to_json()).unwrap();
        let back = GramForm::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.det_exact(), g.det_exact());
    }
}
