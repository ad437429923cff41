//! Point evaluation of the basis forms and quadrature over the fundamental
//! domain.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::numeric::{gauss_legendre, pi};
use crate::qseries::{series_delta, sigma3};

/// Evaluates `Delta^l E4^(3(k-l))`, `l = 1..k`, at points of the upper half-plane.
pub(crate) struct Evaluator {
    pub k: usize,
    pub wp: u32,
    tau: Vec<Float>,
    e4c: Vec<Float>,
    two_pi: Float,
}

/// Lowest height reached by the fundamental domain (a hair below sqrt(3)/2).
const Y_MIN: f64 = 0.86;

impl Evaluator {
    pub fn new(k: usize, wp: u32) -> Self {
        let n = Self::terms_for(Y_MIN, wp);
        let d = series_delta(n as i64).expect("positive length");
        let tau = (1..=n).map(|i| Float::with_val(wp, &d.coeff(i as i64))).collect();
        let e4c = (1..=n)
            .map(|i| Float::with_val(wp, Integer::from(240) * sigma3(i as u64)))
            .collect();
        Evaluator {
            k,
            wp,
            tau,
            e4c,
            two_pi: pi(wp) * 2u32,
        }
    }

    /// Number of q-terms so that the neglected part is below `2^-wp |q|`.
    fn terms_for(y: f64, wp: u32) -> usize {
        let a = 2.0 * std::f64::consts::PI * y;
        let target = -(wp as f64) * std::f64::consts::LN_2 - a - 8.0;
        // |tau(n)|, 240 sigma_3(n) <= 300 n^7 for all n.
        let mut n = 2usize;
        loop {
            let nf = n as f64;
            if 300f64.ln() + 7.0 * nf.ln() - a * nf < target && 7.0 / nf < a {
                return n;
            }
            n += 1;
        }
    }

    /// Real and imaginary parts of `f_l(x + iy)` for `l = 1..k`.
    pub fn basis_values(&self, x: &Float, y: &Float) -> Vec<(Float, Float)> {
        let wp = self.wp;
        let n = Self::terms_for(y.to_f64().max(Y_MIN), wp).min(self.tau.len());
        let r = (-Float::with_val(wp, &self.two_pi * y)).exp();
        let ang = Float::with_val(wp, &self.two_pi * x);
        let (s, c) = ang.sin_cos(Float::new(wp));
        let (qr, qi) = (Float::with_val(wp, &r * &c), Float::with_val(wp, &r * &s));
        // Horner in q for both series.
        let horner = |coeffs: &[Float]| -> (Float, Float) {
            let mut ar = Float::with_val(wp, 0);
            let mut ai = Float::with_val(wp, 0);
            for a in coeffs[..n].iter().rev() {
                let nr = Float::with_val(wp, &ar * &qr) - Float::with_val(wp, &ai * &qi) + a;
                let ni = Float::with_val(wp, &ar * &qi) + Float::with_val(wp, &ai * &qr);
                ar = nr;
                ai = ni;
            }
            // Multiply by q once more: both sums start at q^1.
            let nr = Float::with_val(wp, &ar * &qr) - Float::with_val(wp, &ai * &qi);
            let ni = Float::with_val(wp, &ar * &qi) + Float::with_val(wp, &ai * &qr);
            (nr, ni)
        };
        let (dr, di) = horner(&self.tau);
        let (er, ei) = horner(&self.e4c);
        let er = er + 1u32;
        let mul = |a: &(Float, Float), b: &(Float, Float)| -> (Float, Float) {
            (
                Float::with_val(wp, &a.0 * &b.0) - Float::with_val(wp, &a.1 * &b.1),
                Float::with_val(wp, &a.0 * &b.1) + Float::with_val(wp, &a.1 * &b.0),
            )
        };
        let delta = (dr, di);
        let e4 = (er, ei);
        let e12 = mul(&mul(&e4, &e4), &e4);
        let k = self.k;
        let mut dpow = Vec::with_capacity(k + 1);
        dpow.push((Float::with_val(wp, 1), Float::with_val(wp, 0)));
        for i in 1..=k {
            let next = mul(&dpow[i - 1], &delta);
            dpow.push(next);
        }
        let mut epow = Vec::with_capacity(k);
        epow.push((Float::with_val(wp, 1), Float::with_val(wp, 0)));
        for i in 1..k {
            let next = mul(&epow[i - 1], &e12);
            epow.push(next);
        }
        (1..=k).map(|l| mul(&dpow[l], &epow[k - l])).collect()
    }

    /// `Re(f_l conj f_m)` for `l <= m`, packed row by row.
    pub fn products(&self, x: &Float, y: &Float) -> Vec<Float> {
        let v = self.basis_values(x, y);
        let wp = self.wp;
        let mut out = Vec::with_capacity(self.k * (self.k + 1) / 2);
        for l in 0..self.k {
            for m in l..self.k {
                out.push(Float::with_val(wp, &v[l].0 * &v[m].0) + Float::with_val(wp, &v[l].1 * &v[m].1));
            }
        }
        out
    }
}

/// Integration regions, all over `0 <= x <= 1/2` (the mirror half is added by
/// doubling, valid for forms with real coefficients).
#[derive(Clone, Copy, Debug)]
pub(crate) enum Region {
    /// `sqrt(1 - x^2) <= y <= top`.
    AboveArc { top: f64 },
    /// `y0 <= y <= y1`.
    Band { y0: f64, y1: f64 },
}

/// Composite tensor Gauss–Legendre rule with `px` x-panels, `py` y-panels and
/// `m` nodes per direction. Returns the packed integrals of
/// `2 Re(f_l conj f_m) y^(12k-2)` (without the constant `(4 pi)^(12k)`).
pub(crate) fn integrate(ev: &Evaluator, region: Region, px: usize, py: usize, m: usize) -> Vec<Float> {
    let wp = ev.wp;
    let gl = gauss_legendre(m, wp);
    let half = Float::with_val(wp, 0.5);
    let e = 12 * ev.k as u32 - 2;
    let mut jobs = Vec::with_capacity(px * py * m);
    for ix in 0..px {
        for iy in 0..py {
            for i in 0..m {
                jobs.push((ix, iy, i));
            }
        }
    }
    // Each job integrates one x-node column of one panel; results are summed
    // in job order so the outcome does not depend on the thread count.
    let parts: Vec<Vec<Float>> = jobs
        .par_iter()
        .map(|&(ix, iy, i)| {
            let xa = Float::with_val(wp, &half * ix as u32) / px as u32;
            let hx = Float::with_val(wp, &half / (2 * px) as u32);
            let x = Float::with_val(wp, &xa + &hx) + Float::with_val(wp, &hx * &gl.nodes[i]);
            let wx = Float::with_val(wp, &hx * &gl.weights[i]);
            let (lo, hi) = match region {
                Region::AboveArc { top } => {
                    let a = (Float::with_val(wp, 1) - Float::with_val(wp, &x * &x)).sqrt();
                    (a, Float::with_val(wp, top))
                }
                Region::Band { y0, y1 } => (Float::with_val(wp, y0), Float::with_val(wp, y1)),
            };
            let len = Float::with_val(wp, &hi - &lo);
            let ya = Float::with_val(wp, &len * iy as u32) / py as u32 + &lo;
            let hy = Float::with_val(wp, &len / (2 * py) as u32);
            let mut acc: Vec<Float> = Vec::new();
            for j in 0..m {
                let y = Float::with_val(wp, &ya + &hy) + Float::with_val(wp, &hy * &gl.nodes[j]);
                let w = Float::with_val(wp, &wx * &gl.weights[j]) * &hy * Float::with_val(wp, (&y).pow(e)) * 2u32;
                let p = ev.products(&x, &y);
                if acc.is_empty() {
                    acc = p.into_iter().map(|v| v * &w).collect();
                } else {
                    for (a, v) in acc.iter_mut().zip(p) {
                        *a += v * &w;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Float::with_val(wp, 0); ev.k * (ev.k + 1) / 2];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// `int_Y^inf e^(-c y) y^l dy = e^(-cY) sum_j l!/(l-j)! Y^(l-j) / c^(j+1)`.
pub(crate) fn incomplete_gamma(c: &Float, y: &Float, l: u32) -> Float {
    let wp = c.prec();
    // Accumulate from j = l down so every term is a running product.
    let mut term = Float::with_val(wp, 1) / c;
    let mut terms = Vec::with_capacity(l as usize + 1);
    // term_j = l!/(l-j)! Y^(l-j) / c^(j+1); build term_0 = Y^l / c, ratio (l-j)/(Y c).
    term *= Float::with_val(wp, (&y).pow(l));
    terms.push(term.clone());
    for j in 0..l {
        term = term * (l - j) / y / c;
        terms.push(term.clone());
    }
    let mut s = Float::with_val(wp, 0);
    for t in terms.iter().rev() {
        s += t;
    }
    s * Float::with_val(wp, -(Float::with_val(wp, c * y))).exp()
}

/// Natural log of an upper bound for `sum_{n > N} n^(2g) I_n(Y)` where
/// `I_n(Y) = int_Y^inf e^(-4 pi n y) y^l dy`, or `None` if `N` is too small for
/// the geometric bound to apply.
pub(crate) fn ln_tail_bound(n0: usize, y: f64, l: u32, g: f64) -> Option<f64> {
    let four_pi = 4.0 * std::f64::consts::PI;
    let n = (n0 + 1) as f64;
    let c = four_pi * n;
    let slack = c - l as f64 / y;
    if slack <= 0.0 {
        return None;
    }
    // I_n(Y) <= e^(-cY) Y^l / (c - l/Y) once the integrand decreases past Y.
    let ln_first = 2.0 * g * n.ln() - c * y + l as f64 * y.ln() - slack.ln();
    let ln_ratio = 2.0 * g * ((n + 1.0) / n).ln() - four_pi * y;
    if ln_ratio >= 0.0 {
        return None;
    }
    Some(ln_first - (1.0 - ln_ratio.exp()).ln())
}
