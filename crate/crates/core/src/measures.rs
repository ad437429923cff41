//! Empirical slope measures, Kolmogorov–Smirnov distances, atomic/diffuse
//! decomposition of divisor sequences, and discrepancy of angle sets.

use std::collections::BTreeMap;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SlopeSpectrum;
use crate::petersson::{filtered_maxima, CuspLattice};
use crate::poly::{FactoredDivisor, IntPoly};

mod rational_string {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod rational_strings {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|q| q.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    #[serde(with = "rational_string")]
    pub mass: Rational,
}

/// A finite measure on the real line with exact rational masses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    /// Sorted by location, locations distinct, masses positive.
    pub atoms: Vec<Atom>,
    #[serde(with = "rational_string")]
    pub total_mass: Rational,
}

impl EmpiricalMeasure {
    /// Merges equal locations and drops zero masses.
    pub fn new(points: impl IntoIterator<Item = (f64, Rational)>) -> Result<Self> {
        let mut v: Vec<(f64, Rational)> = Vec::new();
        for (x, m) in points {
            if !x.is_finite() {
                return Err(Error::Domain(format!("atom location {x} is not finite")));
            }
            if m < 0 {
                return Err(Error::Domain("negative mass".into()));
            }
            v.push((x + 0.0, m));
        }
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<Atom> = Vec::new();
        for (x, m) in v {
            match atoms.last_mut() {
                Some(a) if a.location == x => a.mass += m,
                _ => atoms.push(Atom { location: x, mass: m }),
            }
        }
        atoms.retain(|a| a.mass != 0);
        let total_mass = atoms.iter().map(|a| a.mass.clone()).sum();
        Ok(EmpiricalMeasure { atoms, total_mass })
    }

    /// Uniform mass `1 / len` at each location.
    pub fn uniform(locations: &[f64]) -> Result<Self> {
        if locations.is_empty() {
            return Err(Error::Domain("empty point set".into()));
        }
        let w = Rational::from((1, locations.len() as u64));
        EmpiricalMeasure::new(locations.iter().map(|&x| (x, w.clone())))
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass == 1
    }

    /// Mass of `(t, inf)`.
    pub fn mass_above(&self, t: f64) -> Rational {
        self.atoms.iter().filter(|a| a.location > t).map(|a| a.mass.clone()).sum()
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.atoms.first()?.location, self.atoms.last()?.location))
    }

    /// `(location, mass)` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("location,mass\n");
        for a in &self.atoms {
            s.push_str(&format!("{},{}\n", a.location, a.mass));
        }
        s
    }
}

/// `(1/r) sum delta_(lambda_i / n)` for a spectrum of rank `r` normalized by `n`.
pub fn empirical_measure(spectrum: &SlopeSpectrum) -> Result<EmpiricalMeasure> {
    if spectrum.n == 0 {
        return Err(Error::Domain("normalization n must be nonzero".into()));
    }
    let n = spectrum.n as f64;
    let locs: Vec<f64> = spectrum.values.iter().map(|v| v / n).collect();
    EmpiricalMeasure::uniform(&locs)
}

/// Kolmogorov–Smirnov distance `sup_x |F_a(x) - F_b(x)|` of two probability
/// measures, exact on the merged atom set.
pub fn measure_distance(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> Result<f64> {
    if !a.is_probability() || !b.is_probability() {
        return Err(Error::Domain("both measures must have total mass 1".into()));
    }
    let mut jumps: BTreeMap<OrdF64, Rational> = BTreeMap::new();
    for x in &a.atoms {
        *jumps.entry(OrdF64(x.location)).or_default() += &x.mass;
    }
    for x in &b.atoms {
        *jumps.entry(OrdF64(x.location)).or_default() -= &x.mass;
    }
    let mut diff = Rational::new();
    let mut best = Rational::new();
    for d in jumps.values() {
        diff += d;
        let abs = Rational::from(diff.abs_ref());
        if abs > best {
            best = abs;
        }
    }
    Ok(best.to_f64())
}

#[derive(Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// The factorization of the degree-`degree` member of a sequence. Parts of
/// the divisor not listed in `divisor` count toward the diffuse mass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorObservation {
    pub degree: usize,
    pub divisor: FactoredDivisor,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomicPart {
    pub divisor: IntPoly,
    /// Window average of `multiplicity * deg D / degree`.
    #[serde(with = "rational_string")]
    pub coefficient: Rational,
    /// `multiplicity * deg D / degree` for each degree in the window.
    #[serde(with = "rational_strings")]
    pub fractions: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SerreDecomposition {
    pub schema: String,
    /// Number of trailing degrees averaged.
    pub window: usize,
    pub window_degrees: Vec<usize>,
    pub atomic: Vec<AtomicPart>,
    #[serde(with = "rational_string")]
    pub diffuse: Rational,
}

fn parts(d: &FactoredDivisor) -> Vec<(IntPoly, u32)> {
    let mut out: BTreeMap<IntPoly, u32> = BTreeMap::new();
    for f in &d.factors {
        *out.entry(f.poly.normalized()).or_default() += f.multiplicity;
    }
    for (c, m) in &d.cofactors {
        *out.entry(c.normalized()).or_default() += m;
    }
    out.into_iter().filter(|(p, m)| *m > 0 && p.degree().unwrap_or(0) > 0).collect()
}

/// Splits the limit of the normalized divisor measures into atoms on fixed
/// divisors and a diffuse remainder.
///
/// Only the last `window` observations are used (default: the last half,
/// rounded up). A divisor is atomic when it divides every member of the
/// window; its coefficient is the average of its degree fraction there.
pub fn serre_decompose(obs: &[DivisorObservation], window: Option<usize>) -> Result<SerreDecomposition> {
    if obs.is_empty() {
        return Err(Error::Domain("no observations".into()));
    }
    for o in obs {
        if o.degree == 0 {
            return Err(Error::Domain("degree-zero divisor".into()));
        }
        if o.divisor.degree() > o.degree {
            return Err(Error::Domain(format!(
                "listed factors have degree {} above the stated degree {}",
                o.divisor.degree(),
                o.degree
            )));
        }
    }
    if obs.windows(2).any(|w| w[1].degree <= w[0].degree) {
        return Err(Error::Domain("degrees must be increasing".into()));
    }
    let w = window.unwrap_or(obs.len().div_ceil(2));
    if w == 0 || w > obs.len() {
        return Err(Error::Domain(format!("window {w} must lie in 1..={}", obs.len())));
    }
    let tail = &obs[obs.len() - w..];
    let tail_parts: Vec<Vec<(IntPoly, u32)>> = tail.iter().map(|o| parts(&o.divisor)).collect();
    let mut atomic = Vec::new();
    for (p, _) in &tail_parts[0] {
        let fractions: Option<Vec<Rational>> = tail
            .iter()
            .zip(&tail_parts)
            .map(|(o, ps)| {
                ps.iter().find(|(q, _)| q == p).map(|(_, m)| {
                    let d = p.degree().unwrap_or(0) as u64 * *m as u64;
                    Rational::from((d, o.degree as u64))
                })
            })
            .collect();
        if let Some(fractions) = fractions {
            let coefficient = fractions.iter().sum::<Rational>() / Rational::from(w as u64);
            atomic.push(AtomicPart {
                divisor: p.clone(),
                coefficient,
                fractions,
            });
        }
    }
    let diffuse = Rational::from(1) - atomic.iter().map(|a| a.coefficient.clone()).sum::<Rational>();
    Ok(SerreDecomposition {
        schema: "slopes.serre.v1".into(),
        window: w,
        window_degrees: tail.iter().map(|o| o.degree).collect(),
        atomic,
        diffuse,
    })
}

impl SerreDecomposition {
    pub fn coefficient_of(&self, p: &IntPoly) -> Rational {
        let p = p.normalized();
        self.atomic
            .iter()
            .find(|a| a.divisor == p)
            .map(|a| a.coefficient.clone())
            .unwrap_or_default()
    }
}

/// Discrepancies of a finite set of angles against the uniform measure on
/// the circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// `sup_t |#{x < t}/N - t|` over arcs `[0, t)` starting at angle 0.
    pub star: f64,
    /// Supremum over all arcs: `1/N + max(x_i - i/N) - min(x_i - i/N)`.
    pub arc: f64,
}

/// Discrepancy of the angles (radians) reduced to `[0, 1)` by `theta / 2 pi`.
pub fn equidistribution_test(angles: &[f64]) -> Result<Discrepancy> {
    if angles.is_empty() {
        return Err(Error::Domain("no angles".into()));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut x: Vec<f64> = angles.iter().map(|a| a.rem_euclid(tau) / tau).collect();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut star: f64 = 0.0;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (i, xi) in x.iter().enumerate() {
        let i = i as f64;
        star = star.max((i + 1.0) / n - xi).max(xi - i / n);
        let d = xi - i / n;
        hi = hi.max(d);
        lo = lo.min(d);
    }
    Ok(Discrepancy {
        star,
        arc: 1.0 / n + hi - lo,
    })
}

/// The measure of the sublattice of forms vanishing to order at least `k/L`:
/// mass `1 / (k + 1 - ceil(k/L))` at each `lambda_j / k`.
pub fn filtered_measure(lat: &CuspLattice, big_l: u32) -> Result<EmpiricalMeasure> {
    let m = filtered_maxima(lat, big_l)?;
    let k = lat.k as f64;
    let locs: Vec<f64> = m.values.iter().map(|v| v / k).collect();
    EmpiricalMeasure::uniform(&locs)
}
