//! Truncated power series in q with integer coefficients.
//!
//! A series stores coefficients for exponents `lead .. precision`; everything at
//! or above `precision` is unknown. Arithmetic never extends precision.

use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    lead: i64,
    coeffs: Vec<Integer>,
    precision: i64,
}

impl QSeries {
    /// Builds a series from coefficients of `q^lead, q^(lead+1), ...`, known for
    /// exponents below `precision`. Extra coefficients are dropped and leading
    /// zeros are stripped.
    pub fn new(lead: i64, coeffs: Vec<Integer>, precision: i64) -> Self {
        let mut s = QSeries {
            lead,
            coeffs,
            precision,
        };
        s.normalize();
        s
    }

    pub fn zero(precision: i64) -> Self {
        QSeries {
            lead: precision,
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn one(precision: i64) -> Self {
        QSeries::new(0, vec![Integer::from(1)], precision)
    }

    /// The monomial `c q^e` known to `precision`.
    pub fn monomial(c: Integer, e: i64, precision: i64) -> Self {
        QSeries::new(e, vec![c], precision)
    }

    fn normalize(&mut self) {
        let keep = (self.precision - self.lead).max(0) as usize;
        self.coeffs.truncate(keep);
        let nz = self.coeffs.iter().position(|c| *c != 0);
        match nz {
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.lead += i as i64;
                }
                while self.coeffs.last().is_some_and(|c| *c == 0) {
                    self.coeffs.pop();
                }
            }
            None => {
                self.coeffs.clear();
                self.lead = self.precision;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponents strictly below this value are known.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Lowest stored exponent (equals `precision` for the zero series).
    pub fn lead_exponent(&self) -> i64 {
        self.lead
    }

    /// Coefficient of `q^e`. Panics if `e` is not below the precision.
    pub fn coeff(&self, e: i64) -> Integer {
        assert!(e < self.precision, "coefficient q^{e} beyond precision {}", self.precision);
        if e < self.lead {
            return Integer::new();
        }
        let i = (e - self.lead) as usize;
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Coefficients for exponents `from .. to` (exclusive), zero-filled.
    pub fn coeff_range(&self, from: i64, to: i64) -> Vec<Integer> {
        (from..to).map(|e| self.coeff(e)).collect()
    }

    pub fn truncate(&self, precision: i64) -> QSeries {
        let p = precision.min(self.precision);
        QSeries::new(self.lead, self.coeffs.clone(), p)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.combine(other, true)
    }

    fn combine(&self, other: &QSeries, negate: bool) -> QSeries {
        let precision = self.precision.min(other.precision);
        let lead = self.lead.min(other.lead).min(precision);
        let len = (precision - lead).max(0) as usize;
        let mut coeffs = vec![Integer::new(); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let e = lead + i as i64;
            if e >= self.lead {
                if let Some(a) = self.coeffs.get((e - self.lead) as usize) {
                    *c += a;
                }
            }
            if e >= other.lead {
                if let Some(b) = other.coeffs.get((e - other.lead) as usize) {
                    if negate {
                        *c -= b;
                    } else {
                        *c += b;
                    }
                }
            }
        }
        QSeries::new(lead, coeffs, precision)
    }

    pub fn scale(&self, s: &Integer) -> QSeries {
        let coeffs = self.coeffs.iter().map(|c| Integer::from(c * s)).collect();
        QSeries::new(self.lead, coeffs, self.precision)
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let precision = (self.precision + other.lead).min(other.precision + self.lead);
        if self.is_zero() || other.is_zero() {
            return QSeries::zero(precision);
        }
        let lead = self.lead + other.lead;
        let len = (precision - lead).max(0) as usize;
        let mut coeffs = vec![Integer::new(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QSeries::new(lead, coeffs, precision)
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, e: u32) -> QSeries {
        if e == 0 {
            // Precision of a^0 follows the same bookkeeping as repeated products.
            return QSeries::one(self.precision - self.lead);
        }
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    /// Exact quotient `self / other`. Fails if any step leaves a remainder.
    pub fn div_exact(&self, other: &QSeries) -> Result<QSeries> {
        if other.is_zero() {
            return Err(Error::ZeroSeries);
        }
        let lead = self.lead.min(self.precision) - other.lead;
        let precision = (self.precision - other.lead).min(other.precision - 2 * other.lead + self.lead);
        let len = (precision - lead).max(0) as usize;
        let b0 = &other.coeffs[0];
        let mut rem: Vec<Integer> = (0..len)
            .map(|i| {
                let e = self.lead + i as i64;
                if e < self.precision {
                    self.coeff(e)
                } else {
                    Integer::new()
                }
            })
            .collect();
        let mut out = vec![Integer::new(); len];
        for i in 0..len {
            if rem[i] == 0 {
                continue;
            }
            if !rem[i].is_divisible(b0) {
                return Err(Error::Domain("series division is not integral".into()));
            }
            let q = Integer::from(rem[i].div_exact_ref(b0));
            for (j, b) in other.coeffs.iter().enumerate().skip(1) {
                if i + j >= len {
                    break;
                }
                rem[i + j] -= Integer::from(&q * b);
            }
            out[i] = q;
        }
        Ok(QSeries::new(lead, out, precision))
    }

    /// The series as `sum c_n q^n` restricted to `n >= 1` with the given
    /// substitution `q -> q^m`.
    pub fn substitute_power(&self, m: i64) -> QSeries {
        assert!(m >= 1);
        if self.is_zero() {
            return QSeries::zero(self.precision * m);
        }
        let lead = self.lead * m;
        let precision = self.precision * m - (m - 1);
        let len = (precision - lead).max(0) as usize;
        let mut coeffs = vec![Integer::new(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = i * m as usize;
            if idx < len {
                coeffs[idx] = c.clone();
            }
        }
        QSeries::new(lead, coeffs, precision)
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coeffs
    }
}

/// `q * prod_{n >= 1} (1 - q^n)^24`, truncated after `q^N`.
pub fn series_delta(n: i64) -> Result<QSeries> {
    if n < 1 {
        return Err(Error::InvalidPrecision(format!("N = {n} must be at least 1")));
    }
    // prod (1 - q^n) needs exponents 0..N-1.
    let p = n;
    let mut prod = vec![Integer::new(); p as usize];
    prod[0] = Integer::from(1);
    for m in 1..p as usize {
        for e in (m..p as usize).rev() {
            let t = prod[e - m].clone();
            prod[e] -= t;
        }
    }
    let euler = QSeries::new(0, prod, p);
    let pow = euler.pow(24);
    let mut coeffs = pow.coeffs.clone();
    coeffs.truncate(n as usize);
    Ok(QSeries::new(1, coeffs, n + 1))
}

/// Sum of `d^3` over the divisors of `n`.
pub fn sigma3(n: u64) -> Integer {
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += Integer::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n`, truncated after `q^N`.
pub fn series_e4(n: i64) -> Result<QSeries> {
    if n < 0 {
        return Err(Error::InvalidPrecision(format!("N = {n} must be nonnegative")));
    }
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    coeffs.push(Integer::from(1));
    for m in 1..=n {
        coeffs.push(Integer::from(240) * sigma3(m as u64));
    }
    Ok(QSeries::new(0, coeffs, n + 1))
}

/// The j-invariant `1/q + 744 + 196884 q + ...`, truncated after `q^N`.
pub fn series_j(n: i64) -> Result<QSeries> {
    if n < 0 {
        return Err(Error::InvalidPrecision(format!("N = {n} must be nonnegative")));
    }
    // E4^3 to q^(N+1) divided by Delta (lead 1) gives exponents -1..N.
    let e4 = series_e4(n + 1)?;
    let delta = series_delta(n + 2)?;
    let j = e4.pow(3).div_exact(&delta)?;
    Ok(j.truncate(n + 1))
}

/// `Delta^k j^(k - l)`, truncated after `q^N`; its lowest term is `q^l`.
pub fn basis_form(k: i64, l: i64, n: i64) -> Result<QSeries> {
    if k < 1 || l < 1 || l > k {
        return Err(Error::Domain(format!("need 1 <= l <= k, got k = {k}, l = {l}")));
    }
    if n < l {
        return Err(Error::InvalidPrecision(format!("N = {n} must be at least l = {l}")));
    }
    // Delta^k j^(k-l) = Delta^l E4^(3(k-l)); avoids the pole of j.
    let delta = series_delta(n)?.truncate(n + 1);
    let e4 = series_e4(n)?;
    let f = delta.pow(l as u32).mul(&e4.pow(3 * (k - l) as u32));
    Ok(f.truncate(n + 1))
}

/// Smallest exponent with a nonzero coefficient.
pub fn ord_infinity(f: &QSeries) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    Ok(f.lead)
}

/// Positive gcd of the stored coefficients.
pub fn content(f: &QSeries) -> Result<Integer> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let mut g = Integer::new();
    for c in &f.coeffs {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    Ok(g)
}

pub fn series_mul(a: &QSeries, b: &QSeries) -> QSeries {
    a.mul(b)
}

pub fn series_pow(a: &QSeries, e: u32) -> QSeries {
    a.pow(e)
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    lead: i64,
    coeffs: Vec<String>,
    precision: i64,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesRepr {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            precision: self.precision,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = QSeriesRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|c| c.parse::<Integer>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QSeries::new(r.lead, coeffs, r.precision))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn delta_rejects_bad_precision() {
        assert!(matches!(series_delta(0), Err(Error::InvalidPrecision(_))));
    }

    #[test]
    fn delta_low_precision_is_q() {
        let d = series_delta(2).unwrap();
        assert_eq!(d.coeff(1), 1);
        assert_eq!(d.precision(), 3);
    }

    #[test]
    fn pow_zero_is_one() {
        let d = series_delta(5).unwrap();
        let one = d.pow(0);
        assert_eq!(one.coeff(0), 1);
        assert_eq!(one.coeff(1), 0);
    }

    #[test]
    fn div_exact_detects_non_integral() {
        let a = QSeries::new(0, ints(&[1, 1]), 4);
        let b = QSeries::new(0, ints(&[2, 1]), 4);
        assert!(a.div_exact(&b).is_err());
    }

    #[test]
    fn precision_bookkeeping_with_negative_lead() {
        let j = series_j(3).unwrap();
        assert_eq!(j.lead_exponent(), -1);
        assert_eq!(j.precision(), 4);
        let jj = j.mul(&j);
        // (q^-1 + ...)(q^-1 + ...) known below min(4 - 1, 4 - 1).
        assert_eq!(jj.precision(), 3);
        assert_eq!(jj.lead_exponent(), -2);
    }

    #[test]
    fn serde_round_trip() {
        let j = series_j(4).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("\"lead\":-1"));
        let back: QSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
    }
}
