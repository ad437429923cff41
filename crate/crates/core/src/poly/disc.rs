//! Disc metrics on the affine line: Gram matrices of monomials, sup norms,
//! minimal polynomials, Green's functions and cyclotomic points.

use std::f64::consts::PI;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::IntPoly;
use crate::error::{Error, Result};
use crate::lattice::{
    short_vectors, shortest_vector, slope_spectrum, slope_spectrum_from_logs, successive_minima, Convention, Echelon,
    GramForm, NormSq, SearchOptions, SlopeSpectrum,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    /// `(1/2pi) \int |p|^2 dtheta` on the boundary circle.
    L2Boundary,
    /// Maximum modulus on the closed disc.
    Sup,
}

/// The closed disc `|z - c| <= r` with a chosen norm.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscMetric {
    pub center: Rational,
    pub radius_sq: Rational,
    pub norm: NormKind,
}

impl DiscMetric {
    pub fn new(center: Rational, radius_sq: Rational, norm: NormKind) -> Result<Self> {
        if radius_sq <= 0 {
            return Err(Error::Domain("radius must be positive".into()));
        }
        Ok(DiscMetric {
            center,
            radius_sq,
            norm,
        })
    }

    /// Disc with rational center and rational radius.
    pub fn with_radius(center: Rational, radius: Rational, norm: NormKind) -> Result<Self> {
        if radius <= 0 {
            return Err(Error::Domain("radius must be positive".into()));
        }
        let r2 = Rational::from(&radius * &radius);
        Self::new(center, r2, norm)
    }

    pub fn unit(norm: NormKind) -> Self {
        DiscMetric {
            center: Rational::new(),
            radius_sq: Rational::from(1),
            norm,
        }
    }

    pub fn radius(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.radius_sq).sqrt()
    }
}

fn binomials(n: usize) -> Vec<Vec<Integer>> {
    let mut b = vec![vec![Integer::new(); n + 1]; n + 1];
    for a in 0..=n {
        b[a][0] = Integer::from(1);
        for j in 1..=a {
            b[a][j] = Integer::from(&b[a - 1][j - 1] + &b[a - 1][j]);
        }
    }
    b
}

/// Exact Gram matrix of `1, z, ..., z^n` under the uniform boundary measure.
pub fn disc_gram(metric: &DiscMetric, n: usize) -> GramForm {
    let c = &metric.center;
    let binom = binomials(n);
    // B[a][j] = C(a, j) c^(a-j): coefficients of z^a in powers of (z - c).
    let mut cpow = vec![Rational::from(1)];
    for i in 1..=n {
        cpow.push(Rational::from(&cpow[i - 1] * c));
    }
    let mut rpow = vec![Rational::from(1)];
    for i in 1..=n {
        rpow.push(Rational::from(&rpow[i - 1] * &metric.radius_sq));
    }
    let bmat: Vec<Vec<Rational>> = (0..=n)
        .map(|a| (0..=a).map(|j| Rational::from(&cpow[a - j] * &binom[a][j])).collect())
        .collect();
    let mut g = vec![vec![Rational::new(); n + 1]; n + 1];
    for a in 0..=n {
        for b in 0..=a {
            let mut s = Rational::new();
            for j in 0..=b {
                s += Rational::from(&bmat[a][j] * &bmat[b][j]) * &rpow[j];
            }
            g[a][b] = s.clone();
            g[b][a] = s;
        }
    }
    GramForm::exact(g).expect("symmetric by construction")
}

/// Squared L² boundary norm of `p`, exactly.
pub fn l2_norm_sq(p: &IntPoly, metric: &DiscMetric) -> Rational {
    let t = p.taylor_shift(&metric.center);
    let mut s = Rational::new();
    let mut rp = Rational::from(1);
    for d in t {
        s += Rational::from(&d * &d) * &rp;
        rp *= &metric.radius_sq;
    }
    s
}

/// Certified enclosure of the maximum modulus on the boundary circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub ln_lower: f64,
    pub ln_upper: f64,
}

impl SupNorm {
    pub fn lower(&self) -> f64 {
        self.ln_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.ln_upper.exp()
    }
}

/// Maximum of `|p|` on `|z - c| = r` by dense sampling with a curvature bound
/// on `|p|^2`, refined locally by golden-section search.
pub fn sup_norm_poly(p: &IntPoly, metric: &DiscMetric) -> Result<SupNorm> {
    if p.is_zero() {
        return Err(Error::Domain("sup norm of the zero polynomial".into()));
    }
    let prec = 256;
    let t = p.taylor_shift(&metric.center);
    let r = metric.radius(prec);
    let mut coeffs: Vec<Float> = Vec::with_capacity(t.len());
    let mut rp = Float::with_val(prec, 1);
    for d in &t {
        coeffs.push(Float::with_val(prec, d) * &rp);
        rp *= &r;
    }
    let scale = coeffs
        .iter()
        .map(|x| Float::with_val(prec, x.abs_ref()))
        .max_by(|a, b| a.partial_cmp(b).unwrap())
        .unwrap();
    let ln_scale = Float::with_val(prec, scale.ln_ref()).to_f64();
    let e: Vec<f64> = coeffs.iter().map(|x| Float::with_val(prec, x / &scale).to_f64()).collect();
    let n = e.len() - 1;
    let h = |theta: f64| -> f64 {
        // Horner in z = e^{i theta}.
        let (s, c) = theta.sin_cos();
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for a in e.iter().rev() {
            let nr = re * c - im * s + a;
            let ni = re * s + im * c;
            re = nr;
            im = ni;
        }
        re * re + im * im
    };
    let m = (64 * (n + 1)).max(4096).next_power_of_two();
    let step = 2.0 * PI / m as f64;
    let samples: Vec<f64> = (0..m).map(|k| h(k as f64 * step)).collect();
    let hmax = samples.iter().cloned().fold(0.0, f64::max);
    // |h''| <= sum_{j,l} |e_j||e_l| (j - l)^2 = 2 S0 S2 - 2 S1^2.
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for (j, a) in e.iter().enumerate() {
        let a = a.abs();
        let j = j as f64;
        s0 += a;
        s1 += j * a;
        s2 += j * j * a;
    }
    let h2 = (2.0 * s0 * s2 - 2.0 * s1 * s1).max(0.0);
    // On an interval of half-width d, max h <= max(endpoints) + h2 d^2 / 2.
    let bound = |ha: f64, hb: f64, width: f64| ha.max(hb) + h2 * width * width / 8.0;
    let mut best = hmax;
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| samples[b].partial_cmp(&samples[a]).unwrap());
    for &k in idx.iter().take(8) {
        let (mut a, mut b) = ((k as f64 - 1.0) * step, (k as f64 + 1.0) * step);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if h(x1) > h(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        best = best.max(h((a + b) / 2.0));
    }
    let tol = 1e-12;
    let mut stack: Vec<(f64, f64, f64, f64, u32)> = (0..m)
        .map(|k| (k as f64 * step, (k + 1) as f64 * step, samples[k], samples[(k + 1) % m], 0))
        .collect();
    let mut upper_h = best;
    let mut evals = 0usize;
    while let Some((a, b, ha, hb, depth)) = stack.pop() {
        let u = bound(ha, hb, b - a);
        if u <= best * (1.0 + tol) {
            continue;
        }
        if depth >= 40 || evals > 1_000_000 {
            upper_h = upper_h.max(u);
            continue;
        }
        let mid = 0.5 * (a + b);
        let hm = h(mid);
        evals += 1;
        best = best.max(hm);
        stack.push((a, mid, ha, hm, depth + 1));
        stack.push((mid, b, hm, hb, depth + 1));
    }
    // Horner rounding in |p| is at most 2 n eps sum |e_j| (plus the sin/cos error).
    let err = (2.0 * (n as f64 + 2.0) * f64::EPSILON) * s0;
    let upper_abs = (upper_h.max(best) * (1.0 + 2.0 * tol)).sqrt() + err;
    let lower_abs = ((best * (1.0 - tol)).sqrt() - err).max(f64::MIN_POSITIVE);
    Ok(SupNorm {
        ln_lower: ln_scale + lower_abs.ln(),
        ln_upper: ln_scale + upper_abs.max(lower_abs).ln(),
    })
}

/// A polynomial of minimal norm among nonzero integer polynomials of degree
/// at most `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinPoly {
    pub degree: usize,
    pub poly: IntPoly,
    /// Exact squared L² norm as a rational string.
    pub norm_sq: String,
    /// Natural log of the norm in the metric's norm kind.
    pub ln_norm: f64,
    /// Sup norm enclosure of the returned polynomial.
    pub sup: SupNorm,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Heuristic,
}

fn poly_from_coords(c: &[Integer]) -> IntPoly {
    // Canonical sign for polynomials: positive leading coefficient.
    let p = IntPoly::new(c.to_vec());
    if p.lead() < 0 {
        p.neg()
    } else {
        p
    }
}

/// Minimal polynomial of degree at most `n` for the metric's norm.
pub fn min_poly(metric: &DiscMetric, n: usize, mode: SearchMode, opts: &SearchOptions) -> Result<MinPoly> {
    if n < 1 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    let mut o = opts.clone();
    o.heuristic = mode == SearchMode::Heuristic;
    let l2_metric = DiscMetric {
        norm: NormKind::L2Boundary,
        ..metric.clone()
    };
    let g = disc_gram(&l2_metric, n);
    let sv = shortest_vector(&g, &o)?;
    let p = poly_from_coords(&sv.coords);
    let norm_sq = match &sv.norm {
        NormSq::Exact(q) => q.clone(),
        NormSq::Approx(_) => unreachable!("disc Gram matrices are exact"),
    };
    let sup = sup_norm_poly(&p, metric)?;
    match metric.norm {
        NormKind::L2Boundary => {
            let ln_norm = 0.5 * Float::with_val(256, &norm_sq).ln().to_f64();
            Ok(MinPoly {
                degree: n,
                poly: p,
                norm_sq: norm_sq.to_string(),
                ln_norm,
                sup,
                certified: sv.certified,
            })
        }
        NormKind::Sup => {
            // Any polynomial with sup norm below S has L² norm below S, so the
            // L² ball of radius sup(p) contains the sup-norm minimizer.
            let radius = Float::with_val(256, 2.0 * sup.ln_upper).exp();
            let cands = short_vectors(&g, &radius, &o)?;
            let mut best = (p.clone(), sup, norm_sq.clone());
            let mut runner_up_lower = f64::INFINITY;
            for (v, c) in &cands.vectors {
                let q = poly_from_coords(c);
                let s = sup_norm_poly(&q, metric)?;
                if s.ln_upper < best.1.ln_upper {
                    runner_up_lower = runner_up_lower.min(best.1.ln_lower);
                    let NormSq::Exact(ns) = v else { unreachable!() };
                    best = (q, s, ns.clone());
                } else if q != best.0 {
                    runner_up_lower = runner_up_lower.min(s.ln_lower);
                }
            }
            let certified = sv.certified && !cands.exhausted && best.1.ln_upper <= runner_up_lower;
            Ok(MinPoly {
                degree: n,
                poly: best.0,
                norm_sq: best.2.to_string(),
                ln_norm: best.1.ln_upper,
                sup: best.1,
                certified,
            })
        }
    }
}

/// Slope spectrum of polynomials of degree at most `n` with the metric's norm.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscSpectrum {
    pub spectrum: SlopeSpectrum,
    pub witnesses: Vec<IntPoly>,
    pub certified: bool,
}

/// All `n + 1` slopes. For the sup norm the minima are found among the
/// vectors whose L² norm is at most the largest sup norm of the L² witnesses,
/// which bounds every sup-norm minimum from above.
pub fn disc_spectrum(metric: &DiscMetric, n: usize, opts: &SearchOptions) -> Result<DiscSpectrum> {
    let l2 = DiscMetric {
        norm: NormKind::L2Boundary,
        ..metric.clone()
    };
    let g = disc_gram(&l2, n);
    let mins = successive_minima(&g, n + 1, opts)?;
    match metric.norm {
        NormKind::L2Boundary => Ok(DiscSpectrum {
            spectrum: slope_spectrum(&mins.values, 0.0, n as i64, Convention::Hermitian)?,
            witnesses: mins.witnesses.iter().map(|c| poly_from_coords(c)).collect(),
            certified: mins.certified,
        }),
        NormKind::Sup => {
            let mut top = f64::NEG_INFINITY;
            for c in &mins.witnesses {
                top = top.max(sup_norm_poly(&poly_from_coords(c), metric)?.ln_upper);
            }
            let radius = Float::with_val(256, 2.0 * top).exp() * (1.0 + 1e-9);
            let cands = short_vectors(&g, &radius, opts)?;
            let mut scored = Vec::with_capacity(cands.vectors.len());
            for (_, c) in &cands.vectors {
                let s = sup_norm_poly(&poly_from_coords(c), metric)?;
                scored.push((s.ln_upper, c.clone()));
            }
            scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
            let mut ech = Echelon::new();
            let mut logs = Vec::new();
            let mut witnesses = Vec::new();
            for (l, c) in scored {
                if ech.try_add(&c) {
                    logs.push(l);
                    witnesses.push(poly_from_coords(&c));
                }
            }
            if logs.len() != n + 1 {
                return Err(Error::Numeric("sup-norm candidates do not span".into()));
            }
            Ok(DiscSpectrum {
                spectrum: slope_spectrum_from_logs(&logs, n as i64, Convention::SupNorm),
                witnesses,
                certified: mins.certified && !cands.exhausted,
            })
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MEntry {
    pub n: usize,
    pub ln_m: f64,
    /// `m(n)^(1/n)`.
    pub root: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MSequence {
    pub entries: Vec<MEntry>,
    /// Whether `m(n)^(1/n)` is nonincreasing along the computed degrees.
    pub roots_nonincreasing: bool,
    /// Pairs `(a, b)` with `a + b` computed and `m(a+b) > m(a) m(b)`.
    pub submultiplicativity_violations: Vec<(usize, usize)>,
}

/// Minimal norms `m(n, E)` and their `n`-th roots.
pub fn m_sequence(metric: &DiscMetric, degrees: &[usize], opts: &SearchOptions) -> Result<MSequence> {
    if degrees.is_empty() {
        return Err(Error::Domain("no degrees requested".into()));
    }
    let mut entries = Vec::new();
    for &n in degrees {
        let mode = if n > 30 { SearchMode::Heuristic } else { SearchMode::Exact };
        let mp = min_poly(metric, n, mode, opts)?;
        entries.push(MEntry {
            n,
            ln_m: mp.ln_norm,
            root: (mp.ln_norm / n as f64).exp(),
            certified: mp.certified,
        });
    }
    let roots_nonincreasing = entries.windows(2).all(|w| w[1].root <= w[0].root * (1.0 + 1e-12));
    let mut violations = Vec::new();
    for a in &entries {
        for b in &entries {
            if a.n > b.n {
                continue;
            }
            if let Some(s) = entries.iter().find(|e| e.n == a.n + b.n) {
                if s.ln_m > a.ln_m + b.ln_m + 1e-9 {
                    violations.push((a.n, b.n));
                }
            }
        }
    }
    Ok(MSequence {
        entries,
        roots_nonincreasing,
        submultiplicativity_violations: violations,
    })
}

/// Green's function of the disc with pole at infinity:
/// `ln(|z - c| / r)` outside the disc and `0` on or inside it.
pub fn green_disc(re: f64, im: f64, metric: &DiscMetric) -> f64 {
    let c = metric.center.to_f64();
    let r = metric.radius_sq.to_f64().sqrt();
    let d = (re - c).hypot(im);
    if d <= r {
        0.0
    } else {
        (d / r).ln()
    }
}

/// Weight `|1|(z) = exp(-n G(z))` of the constant section of `O(n)`.
pub fn metric_weight(re: f64, im: f64, metric: &DiscMetric, n: u32) -> f64 {
    (-(n as f64) * green_disc(re, im, metric)).exp()
}

/// Arguments in `(-pi, pi]` of the primitive `2^m`-th roots of unity.
pub fn cyclotomic_angles(m: u32) -> Result<Vec<f64>> {
    if m < 1 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let count = 1u64 << (m - 1);
    let denom = count as f64;
    Ok((0..count)
        .map(|j| {
            let t = (2 * j + 1) as f64 * PI / denom;
            if t > PI {
                t - 2.0 * PI
            } else {
                t
            }
        })
        .collect())
}

/// `Phi_{2^m}(z) = z^(2^(m-1)) + 1`.
pub fn cyclotomic_2power(m: u32) -> IntPoly {
    let d = 1usize << (m - 1);
    IntPoly::z_pow(d).add(&IntPoly::one())
}
