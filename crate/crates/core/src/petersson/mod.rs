//! Petersson inner products on the integral cusp forms of weight `12k`, with
//! heights, lower bounds, Hecke matrices and congruence classification.
//!
//! Forms are coordinate vectors in the basis `f_l = Delta^k j^(k-l)`,
//! `l = 1..k`, whose `q`-expansion starts with `q^l`.

mod hecke;
mod quad;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{successive_minima, Convention, GramForm, GramFormJson, SearchOptions, SlopeSpectrum};
use crate::numeric::{pi, ScaledReal};
use crate::qseries::{basis_form, QSeries};

pub use hecke::{congruence_test, hecke_operator, Congruence, CongruenceReport, HeckeData};
use quad::{incomplete_gamma, integrate, ln_tail_bound, Evaluator, Region};

/// How the integral over the fundamental domain is organized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Closed-form strip integrals above `y = 2`, 2-D quadrature below.
    StripUnfolding,
    /// 2-D quadrature up to a cutoff height, with a bounded tail.
    Direct,
}

/// Height splitting the fundamental domain in the strip scheme.
pub const STRIP_CUT: f64 = 2.0;

/// `l(c) = 2 pi c + 6 (ln c + 1 - ln 12)`.
pub fn ell(c: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Domain(format!("c = {c} must be positive")));
    }
    Ok(2.0 * std::f64::consts::PI * c + 6.0 * (c.ln() + 1.0 - 12f64.ln()))
}

/// `l(1) = 2 pi + 6 (1 - ln 12)`.
pub fn support_bound() -> f64 {
    ell(1.0).expect("1 is positive")
}

/// `|a_N|^2 4 pi e^(-4 pi N) (12k-2)! / N^(12k-1)`.
pub fn lower_bound_norm(k: u32, n: u32, a_n: &Integer) -> Result<ScaledReal> {
    if n < 1 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if *a_n == 0 {
        return Err(Error::Domain("a_N must be nonzero".into()));
    }
    let p = 256;
    let four_pi = pi(p) * 4u32;
    let fact = Float::with_val(p, Integer::from(Integer::factorial(12 * k - 2)));
    let a2 = Float::with_val(p, Integer::from(a_n * a_n));
    let e = Float::with_val(p, -Float::with_val(p, &four_pi * n)).exp();
    let npow = Float::with_val(p, n).pow(12 * k - 1);
    Ok(ScaledReal::from_float(&(a2 * four_pi * e * fact / npow)))
}

/// `{l : ceil(k/L) <= l <= k}`: basis indices of forms vanishing to order at
/// least `k/L` at the cusp.
pub fn filtered_sublattice(k: u32, big_l: u32) -> Result<Vec<u32>> {
    if big_l < 1 || big_l > k {
        return Err(Error::Domain(format!("need 1 <= L <= k, got L = {big_l}, k = {k}")));
    }
    Ok((k.div_ceil(big_l)..=k).collect())
}

/// Coordinates of a cusp form of weight `12k` in the basis `f_1..f_k`.
pub fn coordinates(f: &QSeries, k: u32) -> Result<Vec<Integer>> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    if f.lead_exponent() < 1 {
        return Err(Error::Domain("not a cusp form: ord at infinity < 1".into()));
    }
    let need = k as i64 + 1;
    if f.precision() < need {
        return Err(Error::InsufficientPrecision {
            required: need,
            available: f.precision(),
        });
    }
    let n = f.precision() - 1;
    let basis: Vec<QSeries> = (1..=k as i64).map(|l| basis_form(k as i64, l, n)).collect::<Result<_>>()?;
    let mut rest = f.truncate(n + 1);
    let mut out = Vec::with_capacity(k as usize);
    for (i, b) in basis.iter().enumerate() {
        let c = rest.coeff(i as i64 + 1);
        rest = rest.sub(&b.scale(&c));
        out.push(c);
    }
    if !rest.is_zero() {
        return Err(Error::Domain(format!("series is not a cusp form of weight {}", 12 * k)));
    }
    Ok(out)
}

/// Tunables for [`gram_matrix_with`].
#[derive(Clone, Debug)]
pub struct GramSettings {
    pub prec: u32,
    pub scheme: Scheme,
    /// Fixed number of `q`-coefficients for the strip sums; chosen adaptively
    /// when `None`.
    pub strip_terms: Option<usize>,
    /// Largest number of panel doublings before giving up.
    pub max_refinements: u32,
}

impl GramSettings {
    pub fn new(prec: u32, scheme: Scheme) -> Self {
        GramSettings {
            prec,
            scheme,
            strip_terms: None,
            max_refinements: 4,
        }
    }
}

/// The lattice of integral cusp forms of weight `12k` with its Petersson Gram matrix.
#[derive(Clone, Debug)]
pub struct CuspLattice {
    pub k: u32,
    pub prec: u32,
    pub scheme: Scheme,
    /// Entries are stored divided by `e^log_scale`.
    pub gram: GramForm,
    /// Bound on `|error(G_lm)| / sqrt(G_ll G_mm)`.
    pub error_bound: f64,
    /// Number of `q`-coefficients used in strip sums.
    pub strip_terms: usize,
}

#[derive(Serialize, Deserialize)]
pub struct CuspLatticeJson {
    pub schema: String,
    pub k: u32,
    pub prec_bits: u32,
    pub scheme: Scheme,
    pub error_bound: f64,
    pub strip_terms: usize,
    pub gram: GramFormJson,
}

impl CuspLattice {
    pub fn to_json(&self) -> CuspLatticeJson {
        CuspLatticeJson {
            schema: "slopes.cusp_lattice.v1".into(),
            k: self.k,
            prec_bits: self.prec,
            scheme: self.scheme,
            error_bound: self.error_bound,
            strip_terms: self.strip_terms,
            gram: self.gram.to_json(),
        }
    }

    pub fn from_json(j: &CuspLatticeJson) -> Result<Self> {
        if j.schema != "slopes.cusp_lattice.v1" {
            return Err(Error::Parse(format!("unknown schema {}", j.schema)));
        }
        let gram = GramForm::from_json(&j.gram)?;
        if gram.dim() != j.k as usize {
            return Err(Error::Parse("Gram dimension does not match k".into()));
        }
        Ok(CuspLattice {
            k: j.k,
            prec: j.prec_bits,
            scheme: j.scheme,
            gram,
            error_bound: j.error_bound,
            strip_terms: j.strip_terms,
        })
    }

    /// `<a, b>` for coordinate vectors, including the scale.
    pub fn inner(&self, a: &[Integer], b: &[Integer]) -> Result<ScaledReal> {
        let k = self.k as usize;
        if a.len() != k || b.len() != k {
            return Err(Error::Domain(format!("coordinate vectors must have length {k}")));
        }
        let p = self.gram.natural_prec();
        let mut s = Float::with_val(p, 0);
        for i in 0..k {
            for j in 0..k {
                if a[i] != 0 && b[j] != 0 {
                    s += self.gram.entry_float(i, j, p) * &a[i] * &b[j];
                }
            }
        }
        let mut r = ScaledReal::from_float(&s);
        r.log_scale += self.gram.log_scale;
        Ok(r)
    }

    /// Natural log of `<f, f>`.
    pub fn ln_norm_sq(&self, f: &[Integer]) -> Result<f64> {
        let v = self.inner(f, f)?;
        if v.is_zero() || v.mantissa < 0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(v.ln_abs())
    }
}

/// Natural log of `|x|` without passing through `f64` range limits.
fn ln_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(64, x.abs_ref()).ln().to_f64()
}

fn packed(l: usize, m: usize, k: usize) -> usize {
    let (l, m) = if l <= m { (l, m) } else { (m, l) };
    l * k - l * (l + 1) / 2 + m
}

struct Strip {
    /// Packed `(4pi)^(12k) sum a_n b_n I_n(Y)`.
    values: Vec<Float>,
    /// Same sum with `|a_n b_n|`.
    abs_values: Vec<Float>,
    /// Per-form empirical constants `C_l` with `|a_n| <= C_l n^(6k+1)`.
    growth: Vec<f64>,
}

fn strip_sums(k: usize, coeffs: &[Vec<Float>], y: f64, wp: u32) -> Strip {
    let e = 12 * k as u32 - 2;
    let n = coeffs[0].len();
    let four_pi = pi(wp) * 4u32;
    let scale = Float::with_val(wp, (&four_pi).pow(12 * k as u32));
    let yf = Float::with_val(wp, y);
    let ints: Vec<Float> = (1..=n)
        .map(|i| incomplete_gamma(&Float::with_val(wp, &four_pi * i as u32), &yf, e))
        .collect();
    let mut values = Vec::new();
    let mut abs_values = Vec::new();
    for l in 0..k {
        for m in l..k {
            let mut s = Float::with_val(wp, 0);
            let mut sa = Float::with_val(wp, 0);
            for i in 0..n {
                let t = Float::with_val(wp, &coeffs[l][i] * &coeffs[m][i]) * &ints[i];
                sa += Float::with_val(wp, t.abs_ref());
                s += t;
            }
            values.push(s * &scale);
            abs_values.push(sa * &scale);
        }
    }
    let g = 6.0 * k as f64 + 1.0;
    let growth = coeffs
        .iter()
        .map(|c| {
            let mut best = f64::NEG_INFINITY;
            for (i, a) in c.iter().enumerate() {
                if !a.is_zero() {
                    let v = Float::with_val(64, a.abs_ref()).ln().to_f64() - g * ((i + 1) as f64).ln();
                    best = best.max(v);
                }
            }
            best + 2f64.ln()
        })
        .collect();
    Strip {
        values,
        abs_values,
        growth,
    }
}

fn basis_coefficients(k: usize, n: usize, wp: u32) -> Result<Vec<Vec<Float>>> {
    (1..=k)
        .map(|l| {
            let f = basis_form(k as i64, l as i64, n as i64)?;
            Ok((1..=n as i64).map(|i| Float::with_val(wp, &f.coeff(i))).collect())
        })
        .collect()
}

/// Natural log of the tail bound for the strip sum of forms `l, m` beyond `N` terms.
fn ln_strip_tail(k: usize, n: usize, y: f64, cl: f64, cm: f64) -> Option<f64> {
    let e = 12 * k as u32 - 2;
    let g = 6.0 * k as f64 + 1.0;
    let four_pi_ln = (4.0 * std::f64::consts::PI).ln();
    ln_tail_bound(n, y, e, g).map(|t| t + cl + cm + 12.0 * k as f64 * four_pi_ln)
}

pub fn gram_matrix(k: u32, prec: u32) -> Result<CuspLattice> {
    gram_matrix_with(k, &GramSettings::new(prec, Scheme::StripUnfolding))
}

/// Petersson Gram matrix of `f_1..f_k` with an a-posteriori error bound at
/// most `2^(-prec/2)` relative to the diagonal.
pub fn gram_matrix_with(k: u32, s: &GramSettings) -> Result<CuspLattice> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if s.prec < 64 {
        return Err(Error::InvalidPrecision(format!("{} bits is below the 64-bit minimum", s.prec)));
    }
    let ku = k as usize;
    let wp = s.prec + 64;
    let tol = (-(s.prec as f64) / 2.0 * std::f64::consts::LN_2).exp();
    let ln_tol = tol.ln();

    // Strip coefficients: double N until the tail above y = 1 is negligible.
    let mut n = s.strip_terms.unwrap_or(2 * ku + 14);
    let (coeffs, floor) = loop {
        let coeffs = basis_coefficients(ku, n, wp)?;
        let floor = strip_sums(ku, &coeffs, 1.0, wp);
        if s.strip_terms.is_some() {
            break (coeffs, floor);
        }
        let ok = (0..ku).all(|l| {
            let d = ln_float(&floor.values[packed(l, l, ku)]);
            let t = ln_strip_tail(ku, n, 1.0, floor.growth[l], floor.growth[l]);
            t.is_some_and(|t| t < d + ln_tol - 4.0)
        });
        if ok {
            break (coeffs, floor);
        }
        n *= 2;
        if n > 4096 {
            return Err(Error::PrecisionExhausted {
                best_estimate: "strip series did not converge".into(),
                relative_error: f64::INFINITY,
            });
        }
    };
    // The strip above y = 1 bounds every diagonal entry from below.
    let diag_floor: Vec<f64> = (0..ku).map(|l| ln_float(&floor.values[packed(l, l, ku)])).collect();
    let ln_scale_of = |l: usize, m: usize| 0.5 * (diag_floor[l] + diag_floor[m]);

    let ev = Evaluator::new(ku, wp);
    let m_nodes = (s.prec as usize / 6).max(16);
    let four_pi = pi(wp) * 4u32;
    let weight = Float::with_val(wp, (&four_pi).pow(12 * k));

    let (fixed, fixed_err, regions): (Vec<Float>, Vec<f64>, Vec<(Region, usize)>) = match s.scheme {
        Scheme::StripUnfolding => {
            let strip = strip_sums(ku, &coeffs, STRIP_CUT, wp);
            let err = (0..ku)
                .flat_map(|l| (l..ku).map(move |m| (l, m)))
                .map(|(l, m)| {
                    ln_strip_tail(ku, n, STRIP_CUT, strip.growth[l], strip.growth[m])
                        .map_or(f64::INFINITY, |t| (t - ln_scale_of(l, m)).exp())
                })
                .collect();
            (strip.values, err, vec![(Region::AboveArc { top: STRIP_CUT }, 1)])
        }
        Scheme::Direct => {
            // Raise the cutoff until the whole tail is negligible.
            let mut cut = 2.0;
            loop {
                let t = strip_sums(ku, &coeffs, cut, wp);
                let ok = (0..ku).all(|l| {
                    (l..ku).all(|m| {
                        let a = ln_float(&t.abs_values[packed(l, m, ku)]);
                        let tail = ln_strip_tail(ku, n, cut, t.growth[l], t.growth[m]).unwrap_or(f64::INFINITY);
                        a.max(tail) + 1.0 < ln_scale_of(l, m) + ln_tol
                    })
                });
                if ok {
                    break;
                }
                cut += 1.0;
                if cut > 400.0 {
                    return Err(Error::PrecisionExhausted {
                        best_estimate: "tail cutoff did not converge".into(),
                        relative_error: f64::INFINITY,
                    });
                }
            }
            let t = strip_sums(ku, &coeffs, cut, wp);
            let err = (0..ku)
                .flat_map(|l| (l..ku).map(move |m| (l, m)))
                .map(|(l, m)| {
                    let a = ln_float(&t.abs_values[packed(l, m, ku)]);
                    let tail = ln_strip_tail(ku, n, cut, t.growth[l], t.growth[m]).unwrap_or(f64::INFINITY);
                    2.0 * (a.max(tail) - ln_scale_of(l, m)).exp()
                })
                .collect();
            let zero = vec![Float::with_val(wp, 0); ku * (ku + 1) / 2];
            let bands = (cut - 1.0) as usize;
            (zero, err, vec![(Region::AboveArc { top: 1.0 }, 1), (Region::Band { y0: 1.0, y1: cut }, bands)])
        }
    };

    let run = |level: usize| -> Vec<Float> {
        let mut total = fixed.clone();
        for &(region, base) in &regions {
            let (px, py) = match region {
                Region::AboveArc { .. } => (level, level),
                Region::Band { .. } => (level, base * level),
            };
            let part = integrate(&ev, region, px, py, m_nodes);
            for (t, v) in total.iter_mut().zip(part) {
                *t += v * &weight;
            }
        }
        total
    };

    let mut level = 1;
    let mut coarse = run(level);
    let mut refinements = 0;
    let (values, err) = loop {
        let fine = run(2 * level);
        let mut worst: f64 = 0.0;
        for l in 0..ku {
            for m in l..ku {
                let i = packed(l, m, ku);
                let d = Float::with_val(wp, &fine[i] - &coarse[i]);
                let rel = if d.is_zero() {
                    0.0
                } else {
                    (Float::with_val(64, d.abs_ref()).ln().to_f64() - ln_scale_of(l, m)).exp()
                };
                worst = worst.max(rel + fixed_err[i]);
            }
        }
        if worst <= tol {
            break (fine, worst);
        }
        refinements += 1;
        if refinements >= s.max_refinements {
            return Err(Error::PrecisionExhausted {
                best_estimate: fine[0].to_string_radix(10, Some(30)),
                relative_error: worst,
            });
        }
        level *= 2;
        coarse = fine;
    };

    // Normalize by the largest diagonal entry.
    let log_scale = (0..ku)
        .map(|l| Float::with_val(64, &values[packed(l, l, ku)]).ln().to_f64())
        .fold(f64::NEG_INFINITY, f64::max)
        .floor();
    let sc = Float::with_val(wp, -log_scale).exp();
    let entries: Vec<Vec<Float>> = (0..ku)
        .map(|l| (0..ku).map(|m| Float::with_val(wp, &values[packed(l, m, ku)] * &sc)).collect())
        .collect();
    let gram = GramForm::approx(entries, err.max(f64::MIN_POSITIVE), log_scale)?;
    gram.cholesky()?;
    Ok(CuspLattice {
        k,
        prec: s.prec,
        scheme: s.scheme,
        gram,
        error_bound: err,
        strip_terms: n,
    })
}

/// `<a, b>` for coordinate vectors in the basis of weight `12k`.
pub fn petersson_inner(a: &[Integer], b: &[Integer], k: u32, prec: u32, scheme: Scheme) -> Result<ScaledReal> {
    gram_matrix_with(k, &GramSettings::new(prec, scheme))?.inner(a, b)
}

/// `<a, b>` for cusp forms given by their `q`-expansions.
pub fn petersson_inner_series(a: &QSeries, b: &QSeries, k: u32, prec: u32, scheme: Scheme) -> Result<ScaledReal> {
    petersson_inner(&coordinates(a, k)?, &coordinates(b, k)?, k, prec, scheme)
}

fn content_of(f: &[Integer]) -> Integer {
    f.iter().fold(Integer::new(), |g, x| g.gcd(x))
}

/// `lambda(f) = -1/2 ln <f/c, f/c>` with `c` the content of `f`.
pub fn height(f: &[Integer], lat: &CuspLattice) -> Result<f64> {
    let c = content_of(f);
    if c == 0 {
        return Err(Error::Domain("height of the zero form".into()));
    }
    let g: Vec<Integer> = f.iter().map(|x| Integer::from(x / &c)).collect();
    Ok(-0.5 * lat.ln_norm_sq(&g)?)
}

/// Order at the cusp of a nonzero coordinate vector: the first nonzero index (1-based).
pub fn ord_of_coords(f: &[Integer]) -> Result<u32> {
    f.iter()
        .position(|x| *x != 0)
        .map(|i| i as u32 + 1)
        .ok_or_else(|| Error::Domain("zero form has no order".into()))
}

/// Successive maxima `lambda_1 >= ... >= lambda_k` with their witnesses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuccessiveMaxima {
    pub k: u32,
    pub values: Vec<f64>,
    #[serde(with = "coords_serde")]
    pub witnesses: Vec<Vec<Integer>>,
    pub orders: Vec<u32>,
    pub certified: bool,
}

impl SuccessiveMaxima {
    /// The maxima as a slope spectrum normalized by `k`.
    pub fn spectrum(&self) -> SlopeSpectrum {
        let mut values = self.values.clone();
        values.sort_by(|a, b| b.total_cmp(a));
        SlopeSpectrum {
            n: self.k as i64,
            values,
            convention: Convention::Hermitian,
        }
    }
}

mod coords_serde {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Integer>], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Integer>>, D::Error> {
        let t: Vec<Vec<String>> = Vec::deserialize(d)?;
        t.iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<Integer>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub fn successive_maxima(lat: &CuspLattice) -> Result<SuccessiveMaxima> {
    maxima_on(lat, &(1..=lat.k).collect::<Vec<_>>())
}

/// Successive maxima of the sublattice of forms vanishing to order at least
/// `k/L` at the cusp. Witnesses are given in the full basis.
pub fn filtered_maxima(lat: &CuspLattice, big_l: u32) -> Result<SuccessiveMaxima> {
    maxima_on(lat, &filtered_sublattice(lat.k, big_l)?)
}

fn maxima_on(lat: &CuspLattice, idx: &[u32]) -> Result<SuccessiveMaxima> {
    let pos: Vec<usize> = idx.iter().map(|&l| l as usize - 1).collect();
    let sub = lat.gram.restrict(&pos);
    let m = successive_minima(&sub, pos.len(), &SearchOptions::default())?;
    let values: Vec<f64> = m.ln_values().iter().map(|l| -0.5 * l).collect();
    let witnesses: Vec<Vec<Integer>> = m
        .witnesses
        .iter()
        .map(|w| {
            let mut full = vec![Integer::new(); lat.k as usize];
            for (c, &p) in w.iter().zip(&pos) {
                full[p] = c.clone();
            }
            full
        })
        .collect();
    let orders = witnesses.iter().map(|w| ord_of_coords(w)).collect::<Result<_>>()?;
    Ok(SuccessiveMaxima {
        k: lat.k,
        values,
        witnesses,
        orders,
        certified: m.certified,
    })
}

/// A lower estimate of `sup_F |f(z)| (4 pi y)^(6k)` and where it is attained.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SupEstimate {
    pub ln_value: f64,
    pub x: f64,
    pub y: f64,
}

/// Grid search over the fundamental domain (`y <= max(k ln 3k, 2)`) followed by
/// local pattern search.
pub fn sup_norm(f: &[Integer], k: u32, prec: u32) -> Result<SupEstimate> {
    let ku = k as usize;
    if f.len() != ku || f.iter().all(|x| *x == 0) {
        return Err(Error::Domain("need a nonzero coordinate vector of length k".into()));
    }
    let wp = prec.max(64) + 32;
    let ev = Evaluator::new(ku, wp);
    let four_pi_ln = (4.0 * std::f64::consts::PI).ln();
    let value = |x: f64, y: f64| -> f64 {
        let v = ev.basis_values(&Float::with_val(wp, x), &Float::with_val(wp, y));
        let mut re = Float::with_val(wp, 0);
        let mut im = Float::with_val(wp, 0);
        for (c, (a, b)) in f.iter().zip(&v) {
            if *c != 0 {
                re += Float::with_val(wp, a * c);
                im += Float::with_val(wp, b * c);
            }
        }
        let m2 = Float::with_val(wp, &re * &re) + Float::with_val(wp, &im * &im);
        if m2.is_zero() {
            return f64::NEG_INFINITY;
        }
        0.5 * m2.ln().to_f64() + 6.0 * k as f64 * (four_pi_ln + y.ln())
    };
    let inside = |x: f64, y: f64| (0.0..=0.5).contains(&x) && x * x + y * y >= 1.0;
    let y_top = (k as f64 * (3.0 * k as f64).ln()).max(2.0);
    let mut best = SupEstimate {
        ln_value: f64::NEG_INFINITY,
        x: 0.0,
        y: 1.0,
    };
    let nx = 24;
    let ny = 160;
    for i in 0..=nx {
        let x = 0.5 * i as f64 / nx as f64;
        let y0 = (1.0 - x * x).sqrt();
        for j in 0..=ny {
            let y = y0 + (y_top - y0) * j as f64 / ny as f64;
            let v = value(x, y);
            if v > best.ln_value {
                best = SupEstimate { ln_value: v, x, y };
            }
        }
    }
    let mut h = 0.05;
    while h > 1e-9 {
        let mut moved = false;
        for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let (x, y) = (best.x + dx, best.y + dy);
            if !inside(x, y) {
                continue;
            }
            let v = value(x, y);
            if v > best.ln_value {
                best = SupEstimate { ln_value: v, x, y };
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    Ok(best)
}

/// `Vol(X(C)) = pi / 3` for the measure `dx dy / y^2`.
pub fn volume() -> f64 {
    std::f64::consts::PI / 3.0
}

/// Coordinates of the product of two forms (weights `12 k1`, `12 k2`) in the
/// basis of weight `12 (k1 + k2)`: `f_a f_b = f_(a+b)` since
/// `f_l = Delta^l E4^(3(k-l))`.
pub fn product_coords(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            // indices are 0-based for orders i+1 and j+1; the product has order i+j+2.
            out[i + j + 1] += Integer::from(x * y);
        }
    }
    out
}
