//! Complex roots (Aberth–Ehrlich) and integer relations for algebraic numbers.

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use super::IntPoly;
use crate::error::{Error, Result};
use crate::lattice::{lll_reduce, GramForm};

/// All complex roots of a squarefree polynomial, to roughly `prec` bits.
pub fn complex_roots(p: &IntPoly, prec: u32) -> Result<Vec<Complex>> {
    let n = match p.degree() {
        None => return Err(Error::Domain("zero polynomial has no finite root set".into())),
        Some(n) => n,
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let wp = prec + 32;
    let c: Vec<Complex> = p.coeffs().iter().map(|x| Complex::with_val(wp, (x, 0))).collect();
    if n == 1 {
        return Ok(vec![Complex::with_val(wp, &c[0] / &c[1]) * -1i32]);
    }
    let lead = Float::with_val(wp, p.lead().abs());
    let mut big = Float::with_val(wp, 0);
    for (i, a) in p.coeffs().iter().enumerate().take(n) {
        if *a != 0 {
            let q = Float::with_val(wp, Integer::from(a.abs_ref())) / &lead;
            let r = q.pow(Float::with_val(wp, 1) / (n - i) as u32);
            if r > big {
                big = r;
            }
        }
    }
    let r0 = if big > 0 { big / 2u32 } else { Float::with_val(wp, 1) };
    let two_pi = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let t = Float::with_val(wp, &two_pi * k as u32) / n as u32 + 0.4f64;
            let (s, co) = t.sin_cos(Float::new(wp));
            Complex::with_val(wp, (Float::with_val(wp, &r0 * &co), Float::with_val(wp, &r0 * &s)))
        })
        .collect();
    let tol = Float::with_val(wp, 2).pow(-(prec as i32) + 8);
    for _ in 0..2000 {
        let mut worst = Float::with_val(wp, 0);
        for k in 0..n {
            let (v, d) = horner(&c, &z[k]);
            if v.is_zero() {
                continue;
            }
            let w = Complex::with_val(wp, &v / &d);
            let mut s = Complex::with_val(wp, 0);
            for j in 0..n {
                if j != k {
                    s += Complex::with_val(wp, &z[k] - &z[j]).recip();
                }
            }
            let denom = Complex::with_val(wp, 1) - Complex::with_val(wp, &w * &s);
            let corr = w / denom;
            let size = Float::with_val(wp, corr.abs_ref()) / (Float::with_val(wp, z[k].abs_ref()) + 1u32);
            if size > worst {
                worst = size;
            }
            z[k] -= corr;
        }
        if worst < tol {
            return Ok(z.into_iter().map(|x| Complex::with_val(prec, x)).collect());
        }
    }
    Err(Error::Numeric("root iteration did not converge".into()))
}

fn horner(c: &[Complex], z: &Complex) -> (Complex, Complex) {
    let wp = z.prec().0;
    let mut v = Complex::with_val(wp, 0);
    let mut d = Complex::with_val(wp, 0);
    for a in c.iter().rev() {
        d = Complex::with_val(wp, &d * z) + &v;
        v = Complex::with_val(wp, &v * z) + a;
    }
    (v, d)
}

/// Candidate integer polynomial of degree at most `degree` vanishing at
/// `alpha`, found by LLL on the relation lattice. Callers verify candidates.
pub fn integer_relation(alpha: &Complex, degree: usize) -> Result<Option<IntPoly>> {
    let prec = alpha.prec().0;
    let kbits = (prec / 2).min(400) as i32;
    // Gram entries reach K^2; keep the identity block representable.
    let wp = prec + 2 * kbits as u32 + 64;
    let k = Float::with_val(wp, 2).pow(kbits);
    let m = degree + 1;
    let mut powers = Vec::with_capacity(m);
    let mut acc = Complex::with_val(prec, 1);
    for _ in 0..m {
        powers.push(acc.clone());
        acc *= alpha;
    }
    let vecs: Vec<Vec<Float>> = (0..m)
        .map(|i| {
            let mut v: Vec<Float> = (0..m).map(|j| Float::with_val(wp, (i == j) as u32)).collect();
            v.push(Float::with_val(wp, powers[i].real() * &k));
            v.push(Float::with_val(wp, powers[i].imag() * &k));
            v
        })
        .collect();
    let gram: Vec<Vec<Float>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Float::with_val(wp, 0);
                    for (a, b) in vecs[i].iter().zip(&vecs[j]) {
                        s += Float::with_val(wp, a * b);
                    }
                    s
                })
                .collect()
        })
        .collect();
    let form = GramForm::approx(gram, 0.0, 0.0)?;
    let red = lll_reduce(&form, 0.99)?;
    let cand = IntPoly::new(red.transform[0].clone());
    if cand.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    Ok(Some(cand.normalized()))
}

/// Integer divisors of `|n|` (positive), for small `n`.
pub(crate) fn small_divisors(n: &Integer) -> Vec<Integer> {
    let n = Integer::from(n.abs_ref());
    let mut out = Vec::new();
    let mut d = Integer::from(1);
    while Integer::from(&d * &d) <= n {
        if n.is_divisible(&d) {
            out.push(d.clone());
            let e = Integer::from(&n / &d);
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}
