//! Chebyshev transforms: closed forms for disc metrics, finite-level
//! leading-coefficient norms, a Jacobi-polynomial construction, and height
//! bounds from global transforms.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::Domain(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Domain(format!("r = {r} must be positive")));
    }
    Ok(())
}

/// `-alpha ln r`, the transform of the sup metric of a centered disc.
pub fn cheb_centered(alpha: f64, r: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_r(r)?;
    Ok(-alpha * r.ln())
}

/// Transform of the L² metric on the boundary of a disc of radius `r`,
/// expanded at a boundary point:
/// `-a ln(4r) + (1+a)/2 ln(1+a) - (1-a)/2 ln(1-a) - a ln a`.
pub fn cheb_boundary(alpha: f64, r: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_r(r)?;
    let a = alpha;
    Ok(-a * (4.0 * r).ln() + 0.5 * xlnx(1.0 + a) - 0.5 * xlnx(1.0 - a) - xlnx(a))
}

fn binom(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// `sum_{j=0}^{n-a} (2j+2a+1) C(j+2a, j)^2`.
pub fn f_finite_sum(n: u32, a: u32) -> Result<Integer> {
    if a > n {
        return Err(Error::Domain(format!("order a = {a} exceeds n = {n}")));
    }
    let mut s = Integer::new();
    for j in 0..=n - a {
        let c = binom(j + 2 * a, j);
        s += Integer::from(&c * &c) * (2 * j + 2 * a + 1);
    }
    Ok(s)
}

/// `F^2 = 16^-a r^-4a sum_j (2j+2a+1) C(j+2a, j)^2`, exactly, at level `2n`
/// and vanishing order `2a`.
pub fn f_finite_sq_exact(n: u32, a: u32, r: &Rational) -> Result<Rational> {
    if *r <= 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    let s = f_finite_sum(n, a)?;
    let r4a = Rational::from(r.pow(4 * a));
    Ok(Rational::from((s, Integer::from(16).pow(a))) / r4a)
}

/// `ln F` at level `2n`, vanishing order `2a`, radius `r`.
pub fn ln_f_finite(n: u32, a: u32, r: f64) -> Result<f64> {
    check_r(r)?;
    let s = f_finite_sum(n, a)?;
    let ln_s = Float::with_val(128, &s).ln().to_f64();
    Ok(0.5 * ln_s - 2.0 * a as f64 * std::f64::consts::LN_2 - 2.0 * a as f64 * r.ln())
}

/// `F` as a double; see [`ln_f_finite`] for large arguments.
pub fn f_finite(n: u32, a: u32, r: f64) -> Result<f64> {
    Ok(ln_f_finite(n, a, r)?.exp())
}

/// Probability measure on the boundary circle used for leading-coefficient norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryWeight {
    /// `(1/4) |sin theta| dtheta`.
    AbsSin,
    /// `dtheta / 2pi`.
    Uniform,
}

/// Chebyshev polynomial `T_k` coefficients.
fn chebyshev_t(k: usize) -> Vec<Integer> {
    let mut t0 = vec![Integer::from(1)];
    if k == 0 {
        return t0;
    }
    let mut t1 = vec![Integer::new(), Integer::from(1)];
    for _ in 1..k {
        let mut t2 = vec![Integer::new(); t1.len() + 1];
        for (i, c) in t1.iter().enumerate() {
            t2[i + 1] += Integer::from(c * 2u32);
        }
        for (i, c) in t0.iter().enumerate() {
            t2[i] -= c;
        }
        t0 = t1;
        t1 = t2;
    }
    t1
}

/// `int (2 - 2cos t)^{2a} cos(k t) dmu(t)` for the given weight.
fn trig_moment(a: u32, k: usize, weight: BoundaryWeight) -> Rational {
    match weight {
        BoundaryWeight::Uniform => {
            let k = k as u32;
            if k > 2 * a {
                return Rational::new();
            }
            let c = binom(4 * a, 2 * a + k);
            Rational::from(if k % 2 == 0 { c } else { -c })
        }
        BoundaryWeight::AbsSin => {
            // (1/2) int_{-1}^{1} (2 - 2u)^{2a} T_k(u) du.
            let e = 2 * a as usize;
            let mut p = vec![Integer::new(); e + 1];
            for (i, c) in p.iter_mut().enumerate() {
                let b = binom(2 * a, i as u32) * Integer::from(2).pow(2 * a);
                *c = if i % 2 == 0 { b } else { -b };
            }
            let t = chebyshev_t(k);
            let mut s = Rational::new();
            for (i, pi) in p.iter().enumerate() {
                for (j, tj) in t.iter().enumerate() {
                    let m = i + j;
                    if m % 2 == 0 && *pi != 0 && *tj != 0 {
                        s += Rational::from((Integer::from(pi * tj) * 2u32, Integer::from(m as u32 + 1)));
                    }
                }
            }
            s / 2u32
        }
    }
}

/// Solves `A x = b` exactly.
fn solve_rational(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| a[r][c] != 0)
            .ok_or_else(|| Error::Numeric("singular Gram matrix".into()))?;
        a.swap(c, p);
        b.swap(c, p);
        let piv = a[c][c].clone();
        for r in c + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let f = Rational::from(&a[r][c] / &piv);
            for k in c..n {
                let t = Rational::from(&f * &a[c][k]);
                a[r][k] -= t;
            }
            let t = Rational::from(&f * &b[c]);
            b[r] -= t;
        }
    }
    let mut x = vec![Rational::new(); n];
    for c in (0..n).rev() {
        let mut s = b[c].clone();
        for k in c + 1..n {
            s -= Rational::from(&a[c][k] * &x[k]);
        }
        x[c] = s / &a[c][c];
    }
    Ok(x)
}

/// Squared operator norm of the leading-coefficient functional on
/// `{(z - r)^{2a} q(z) : deg q <= 2n - 2a}` with the boundary norm on `|z| = r`,
/// by solving the normal equations exactly.
pub fn f_oracle_sq_exact(n: u32, a: u32, r: &Rational, weight: BoundaryWeight) -> Result<Rational> {
    if a > n {
        return Err(Error::Domain(format!("order a = {a} exceeds n = {n}")));
    }
    if *r <= 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    let dim = (2 * (n - a) + 1) as usize;
    let m: Vec<Rational> = (0..dim).map(|k| trig_moment(a, k, weight)).collect();
    // Gram = r^{4a} D T D with D = diag(r^i); the functional is q(r) = D 1.
    let t: Vec<Vec<Rational>> = (0..dim)
        .map(|i| (0..dim).map(|j| m[i.abs_diff(j)].clone()).collect())
        .collect();
    let x = solve_rational(t, vec![Rational::from(1); dim])?;
    let s: Rational = x.into_iter().fold(Rational::new(), |acc, v| acc + v);
    if s <= 0 {
        return Err(Error::Numeric("normal equations are not positive".into()));
    }
    Ok(s / Rational::from(r.pow(4 * a)))
}

pub fn f_oracle(n: u32, a: u32, r: &Rational, weight: BoundaryWeight) -> Result<f64> {
    let s = f_oracle_sq_exact(n, a, r, weight)?;
    Ok(Float::with_val(128, &s).sqrt().to_f64())
}

/// Polynomials with rational coefficients, constant term first.
type QPoly = Vec<Rational>;

fn qpoly_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += Rational::from(x * y);
        }
    }
    c
}

fn qpoly_eval(p: &QPoly, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// One member of the orthogonal family and its checked invariants.
#[derive(Clone, Debug)]
pub struct JacobiMember {
    pub j: u32,
    /// Coefficients in `y`, constant first.
    pub coeffs: Vec<Rational>,
    /// `int_{-2}^{2} J^2 (2 - y)^{2a} dy`.
    pub weighted_norm_sq: Rational,
}

/// Moments `int_{-2}^{2} y^m (2 - y)^{2a} dy`.
fn y_moments(a: u32, count: usize) -> Vec<Rational> {
    let e = 2 * a;
    (0..count)
        .map(|m| {
            let mut s = Rational::new();
            for i in 0..=e {
                let p = m + i as usize;
                if p % 2 == 1 {
                    continue;
                }
                let c = binom(e, i) * Integer::from(2).pow(e - i);
                let c = if i % 2 == 0 { c } else { -c };
                // int_{-2}^{2} y^p dy = 2^{p+2}/(p+1) for even p.
                let v = Rational::from((Integer::from(2).pow(p as u32 + 2), Integer::from(p as u32 + 1)));
                s += v * c;
            }
            s
        })
        .collect()
}

fn y_inner(p: &QPoly, q: &QPoly, mom: &[Rational]) -> Rational {
    let mut s = Rational::new();
    for (i, x) in p.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in q.iter().enumerate() {
            if *y != 0 {
                s += Rational::from(x * y) * &mom[i + j];
            }
        }
    }
    s
}

/// Orthogonal polynomials of degree `0..=n-a` for the weight `(2 - y)^{2a}`
/// on `[-2, 2]`, by exact Gram–Schmidt, scaled so that
/// `J_j(2) = (-4)^j C(j+2a, j)`. Verifies `int J_j^2 w = 4 * 16^{j+a} / (2j+2a+1)`
/// and pairwise orthogonality.
pub fn jacobi_basis(n: u32, a: u32) -> Result<Vec<JacobiMember>> {
    if a > n {
        return Err(Error::Domain(format!("order a = {a} exceeds n = {n}")));
    }
    let top = (n - a) as usize;
    let mom = y_moments(a, 2 * top + 1);
    let mut monic: Vec<QPoly> = Vec::new();
    for j in 0..=top {
        let mut p: QPoly = vec![Rational::new(); j + 1];
        p[j] = Rational::from(1);
        let yj = p.clone();
        for q in &monic {
            let f = y_inner(&yj, q, &mom) / y_inner(q, q, &mom);
            for (k, c) in q.iter().enumerate() {
                p[k] -= Rational::from(&f * c);
            }
        }
        monic.push(p);
    }
    let two = Rational::from(2);
    let mut out = Vec::new();
    for (j, p) in monic.iter().enumerate() {
        let j = j as u32;
        let target = Rational::from(binom(j + 2 * a, j) * Integer::from(-4).pow(j));
        let at2 = qpoly_eval(p, &two);
        if at2 == 0 {
            return Err(Error::FormulaMismatch(format!("J_{j} vanishes at y = 2")));
        }
        let s = target / at2;
        let coeffs: QPoly = p.iter().map(|c| Rational::from(c * &s)).collect();
        let norm = y_inner(&coeffs, &coeffs, &mom);
        let expected = Rational::from((Integer::from(16).pow(j + a) * 4u32, Integer::from(2 * j + 2 * a + 1)));
        if norm != expected {
            return Err(Error::FormulaMismatch(format!(
                "weighted norm of J_{j} is {norm}, expected {expected}"
            )));
        }
        out.push(JacobiMember {
            j,
            coeffs,
            weighted_norm_sq: norm,
        });
    }
    for i in 0..out.len() {
        for k in 0..i {
            if y_inner(&out[i].coeffs, &out[k].coeffs, &mom) != 0 {
                return Err(Error::FormulaMismatch(format!("J_{i} and J_{k} are not orthogonal")));
            }
        }
    }
    Ok(out)
}

/// The section of degree `2n` attached to `T(y)`:
/// `(z - r)^{2a} (r z)^{n-a} T(z/r + r/z)`, as a polynomial in `z`.
pub fn jacobi_section(t: &[Rational], n: u32, a: u32, r: &Rational) -> QPoly {
    let k = (n - a) as usize;
    // z^k T(z/r + r/z) = sum_i t_i z^{k-i} (z^2/r + r)^i.
    let mut body: QPoly = vec![Rational::new(); 2 * k + 1];
    let base: QPoly = vec![r.clone(), Rational::new(), Rational::from(1) / r];
    let mut pw: QPoly = vec![Rational::from(1)];
    for (i, ti) in t.iter().enumerate() {
        for (e, c) in pw.iter().enumerate() {
            body[k - i + e] += Rational::from(ti * c);
        }
        pw = qpoly_mul(&pw, &base);
    }
    let rk = Rational::from(r.pow(k as u32));
    let mut s: QPoly = body.into_iter().map(|c| c * &rk).collect();
    let lin: QPoly = vec![Rational::from(-r), Rational::from(1)];
    for _ in 0..2 * a {
        s = qpoly_mul(&s, &lin);
    }
    s
}

/// Coefficient of `(z - r)^{2a}` in the expansion of `s` at `z = r`, assuming
/// `s` vanishes to that order.
pub fn leading_coefficient_at(s: &[Rational], r: &Rational, order: u32) -> Rational {
    // Taylor coefficient: s^{(order)}(r) / order!.
    let mut d: QPoly = s.to_vec();
    for _ in 0..order {
        d = d.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u32)).collect();
    }
    let mut fact = Integer::from(1);
    for i in 1..=order {
        fact *= i;
    }
    qpoly_eval(&d, r) / fact
}

/// Squared norm of `s` on `|z| = r` under the given boundary weight.
pub fn boundary_norm_sq(s: &[Rational], r: &Rational, weight: BoundaryWeight) -> Rational {
    // Moments of cos(m t): |sin| weight gives -1/(m^2-1) for even m, uniform gives [m = 0].
    let moment = |m: usize| -> Rational {
        match weight {
            BoundaryWeight::Uniform => Rational::from((m == 0) as i32),
            BoundaryWeight::AbsSin => {
                if m % 2 == 1 {
                    Rational::new()
                } else {
                    let m = m as i64;
                    Rational::from((-1, m * m - 1))
                }
            }
        }
    };
    let mut rp = vec![Rational::from(1)];
    for i in 1..s.len() {
        rp.push(Rational::from(&rp[i - 1] * r));
    }
    let mut total = Rational::new();
    for (k, x) in s.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (l, y) in s.iter().enumerate() {
            if *y == 0 {
                continue;
            }
            let m = moment(k.abs_diff(l));
            if m != 0 {
                total += Rational::from(x * y) * &rp[k] * &rp[l] * m;
            }
        }
    }
    total
}

/// Checks, for every `j`, the value and norm formulas of the sections built
/// from the orthogonal family at radius `r`:
/// `lead = r^{2n-2a} (-4)^j C(j+2a, j)` and `norm^2 = r^{4n} 16^{j+a} / (2j+2a+1)`,
/// their mutual orthogonality, and that the sum of `(lead/norm)^2` equals `F^2`.
pub fn verify_jacobi_formulas(n: u32, a: u32, r: &Rational) -> Result<()> {
    let fam = jacobi_basis(n, a)?;
    let sections: Vec<QPoly> = fam.iter().map(|m| jacobi_section(&m.coeffs, n, a, r)).collect();
    let mut total = Rational::new();
    for (m, s) in fam.iter().zip(&sections) {
        let j = m.j;
        let lead = leading_coefficient_at(s, r, 2 * a);
        let want_lead = Rational::from(r.pow(2 * n - 2 * a)) * Rational::from(binom(j + 2 * a, j) * Integer::from(-4).pow(j));
        if lead != want_lead {
            return Err(Error::FormulaMismatch(format!("value of section {j}: {lead} vs {want_lead}")));
        }
        let norm = boundary_norm_sq(s, r, BoundaryWeight::AbsSin);
        let want_norm = Rational::from(r.pow(4 * n))
            * Rational::from((Integer::from(16).pow(j + a), Integer::from(2 * j + 2 * a + 1)));
        if norm != want_norm {
            return Err(Error::FormulaMismatch(format!("norm of section {j}: {norm} vs {want_norm}")));
        }
        total += Rational::from(&lead * &lead) / norm;
    }
    // Orthogonality of the sections under the boundary inner product.
    for i in 0..sections.len() {
        for k in 0..i {
            let sum: QPoly = sections[i].iter().zip(&sections[k]).map(|(x, y)| Rational::from(x + y)).collect();
            let cross = boundary_norm_sq(&sum, r, BoundaryWeight::AbsSin)
                - boundary_norm_sq(&sections[i], r, BoundaryWeight::AbsSin)
                - boundary_norm_sq(&sections[k], r, BoundaryWeight::AbsSin);
            if cross != 0 {
                return Err(Error::FormulaMismatch(format!("sections {i} and {k} are not orthogonal")));
            }
        }
    }
    let f2 = f_finite_sq_exact(n, a, r)?;
    if total != f2 {
        return Err(Error::FormulaMismatch(format!("sum of squared ratios {total} differs from F^2 = {f2}")));
    }
    Ok(())
}

/// Entropy `sum a_j ln(1/a_j)` with `0 ln 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlnx(x)).sum::<f64>()
}

/// `sum_j alpha_j ln gamma_j + h(alpha)/2` on the standard simplex, where
/// `alpha` lists the first `d` barycentric coordinates and the last is
/// `1 - sum alpha`.
pub fn cheb_fubini_study(alpha: &[f64], gamma: &[f64]) -> Result<f64> {
    if gamma.len() != alpha.len() + 1 {
        return Err(Error::Domain("gamma must have one more entry than alpha".into()));
    }
    if gamma.iter().any(|&g| g.is_nan() || g <= 0.0) {
        return Err(Error::Domain("gamma entries must be positive".into()));
    }
    let last = 1.0 - alpha.iter().sum::<f64>();
    if alpha.iter().any(|&a| a.is_nan() || a < 0.0) || last < -1e-12 {
        return Err(Error::Domain("alpha outside the simplex".into()));
    }
    let mut full = alpha.to_vec();
    full.push(last.max(0.0));
    let lin: f64 = full.iter().zip(gamma).map(|(a, g)| a * g.ln()).sum();
    Ok(lin + 0.5 * entropy(&full))
}

/// Okounkov body of a local transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Body {
    /// `[0, 1]` (degree-normalized interval).
    Interval,
    /// Standard simplex of the given dimension.
    Simplex(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LocalTransform {
    Zero,
    Centered { r: f64 },
    Boundary { r: f64 },
    FubiniStudy { gamma: Vec<f64> },
}

impl LocalTransform {
    pub fn body(&self) -> Body {
        match self {
            LocalTransform::FubiniStudy { gamma } if gamma.len() > 2 => Body::Simplex(gamma.len() - 1),
            _ => Body::Interval,
        }
    }

    pub fn eval(&self, alpha: &[f64]) -> Result<f64> {
        match self {
            LocalTransform::Zero => Ok(0.0),
            LocalTransform::Centered { r } => cheb_centered(alpha[0], *r),
            LocalTransform::Boundary { r } => cheb_boundary(alpha[0], *r),
            LocalTransform::FubiniStudy { gamma } => cheb_fubini_study(alpha, gamma),
        }
    }
}

/// Weighted sum of local transforms over places.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalTransform {
    pub body: Body,
    pub locals: Vec<(LocalTransform, f64)>,
}

impl GlobalTransform {
    pub fn new(locals: Vec<(LocalTransform, f64)>) -> Result<Self> {
        let first = locals
            .first()
            .ok_or_else(|| Error::Domain("no local transforms".into()))?
            .0
            .body();
        if locals.iter().any(|(l, _)| l.body() != first) {
            return Err(Error::Domain("local transforms live on different bodies".into()));
        }
        Ok(GlobalTransform { body: first, locals })
    }

    pub fn eval(&self, alpha: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for (l, k) in &self.locals {
            s += k * l.eval(alpha)?;
        }
        Ok(s)
    }

    /// Supremum over the body and a maximizer.
    pub fn sup(&self) -> Result<(f64, Vec<f64>)> {
        match self.body {
            Body::Interval => {
                let f = |x: f64| self.eval(&[x]).unwrap_or(f64::NEG_INFINITY);
                let grid = 1000;
                let mut bi: usize = 0;
                let mut bv = f64::NEG_INFINITY;
                for i in 0..=grid {
                    let v = f(i as f64 / grid as f64);
                    if v > bv {
                        bv = v;
                        bi = i;
                    }
                }
                let mut a = (bi.saturating_sub(1)) as f64 / grid as f64;
                let mut b = ((bi + 1).min(grid)) as f64 / grid as f64;
                let g = (5f64.sqrt() - 1.0) / 2.0;
                while b - a > 1e-10 {
                    let x1 = b - g * (b - a);
                    let x2 = a + g * (b - a);
                    if f(x1) >= f(x2) {
                        b = x2;
                    } else {
                        a = x1;
                    }
                }
                let x = 0.5 * (a + b);
                let v = f(x);
                if v >= bv {
                    Ok((v, vec![x]))
                } else {
                    Ok((bv, vec![bi as f64 / grid as f64]))
                }
            }
            Body::Simplex(d) => {
                let steps = match d {
                    1 | 2 => 200,
                    3 => 60,
                    _ => 16,
                };
                let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
                let mut idx = vec![0usize; d];
                loop {
                    let total: usize = idx.iter().sum();
                    if total <= steps {
                        let p: Vec<f64> = idx.iter().map(|&i| i as f64 / steps as f64).collect();
                        let v = self.eval(&p)?;
                        if v > best.0 {
                            best = (v, p);
                        }
                    }
                    let mut k = 0;
                    loop {
                        if k == d {
                            return Ok(self.refine_simplex(best));
                        }
                        idx[k] += 1;
                        if idx[k] > steps {
                            idx[k] = 0;
                            k += 1;
                        } else {
                            break;
                        }
                    }
                }
            }
        }
    }

    fn refine_simplex(&self, start: (f64, Vec<f64>)) -> (f64, Vec<f64>) {
        let (mut bv, mut p) = start;
        let d = p.len();
        let mut h = 0.01;
        while h > 1e-11 {
            let mut improved = false;
            for i in 0..d {
                for j in 0..=d {
                    if i == j {
                        continue;
                    }
                    // Move mass h from coordinate j (d = implicit last) to i.
                    let mut q = p.clone();
                    q[i] += h;
                    if j < d {
                        q[j] -= h;
                    }
                    if q.iter().any(|&x| x < 0.0) || q.iter().sum::<f64>() > 1.0 {
                        continue;
                    }
                    if let Ok(v) = self.eval(&q) {
                        if v > bv {
                            bv = v;
                            p = q;
                            improved = true;
                        }
                    }
                }
                let mut q = p.clone();
                q[i] -= h;
                if q[i] >= 0.0 {
                    if let Ok(v) = self.eval(&q) {
                        if v > bv {
                            bv = v;
                            p = q;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                h /= 2.0;
            }
        }
        (bv, p)
    }

    /// Upper bound `n sup c` for the height of a nonzero section of degree `n`.
    pub fn height_bound(&self, n: u32) -> Result<f64> {
        Ok(n as f64 * self.sup()?.0)
    }

    /// Average over the interval body (composite Simpson rule).
    pub fn mean(&self) -> Result<f64> {
        if self.body != Body::Interval {
            return Err(Error::Domain("mean is implemented for interval bodies".into()));
        }
        let m = 20000;
        let h = 1.0 / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += w * self.eval(&[i as f64 * h])?;
        }
        Ok(s * h / 3.0)
    }
}
