//! Hecke matrices in the integral basis and exact congruence classification.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::qseries::basis_form;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeData {
    pub p: u32,
    pub k: u32,
    /// Row `l` holds the coordinates of `T_p f_l`.
    pub matrix: Vec<Vec<Integer>>,
    /// `det(x I - matrix)`.
    pub charpoly: IntPoly,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Matrix of `T_p` on weight `12k` cusp forms using `q`-expansions to `q^N`.
pub fn hecke_operator(p: u32, k: u32, n: u32) -> Result<HeckeData> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let need = p as i64 * k as i64;
    if (n as i64) < need {
        return Err(Error::InsufficientPrecision {
            required: need,
            available: n as i64,
        });
    }
    let ku = k as usize;
    let basis: Vec<Vec<Integer>> = (1..=k as i64)
        .map(|l| {
            let f = basis_form(k as i64, l, n as i64)?;
            Ok((0..=n as i64).map(|i| f.coeff(i)).collect())
        })
        .collect::<Result<_>>()?;
    let pw = Integer::from(p).pow(12 * k - 1);
    let top = (n / p) as usize;
    let mut matrix = Vec::with_capacity(ku);
    for f in &basis {
        // (T_p f)_m = a_(pm) + p^(12k-1) a_(m/p).
        let mut g: Vec<Integer> = (0..=top)
            .map(|m| {
                let mut v = f[p as usize * m].clone();
                if m % p as usize == 0 {
                    v += Integer::from(&pw * &f[m / p as usize]);
                }
                v
            })
            .collect();
        let mut row = Vec::with_capacity(ku);
        for (j, b) in basis.iter().enumerate() {
            // Unit leading coefficient at q^(j+1): no division needed.
            let c = g[j + 1].clone();
            for (gm, bm) in g.iter_mut().zip(b.iter()) {
                *gm -= Integer::from(&c * bm);
            }
            row.push(c);
        }
        if g.iter().any(|x| *x != 0) {
            return Err(Error::FormulaMismatch(
                "image of a cusp form is not in the span of the basis".into(),
            ));
        }
        matrix.push(row);
    }
    let charpoly = charpoly_int(&matrix);
    Ok(HeckeData {
        p,
        k,
        matrix,
        charpoly,
    })
}

/// Faddeev–LeVerrier on an integer matrix; every division is exact.
fn charpoly_int(a: &[Vec<Integer>]) -> IntPoly {
    let n = a.len();
    let mut c = vec![Integer::new(); n + 1];
    c[n] = Integer::from(1);
    let mut m = vec![vec![Integer::new(); n]; n];
    for i in 1..=n {
        // M_i = A M_(i-1) + c_(n-i+1) I.
        let mut next = mat_mul_int(a, &m);
        for (d, row) in next.iter_mut().enumerate() {
            row[d] += &c[n - i + 1];
        }
        m = next;
        let am = mat_mul_int(a, &m);
        let tr: Integer = (0..n).map(|d| am[d][d].clone()).sum();
        c[n - i] = -tr.div_exact(&Integer::from(i));
    }
    IntPoly::new(c)
}

fn mat_mul_int(a: &[Vec<Integer>], b: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|t| Integer::from(&a[i][t] * &b[t][j])).sum())
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Congruence {
    NoCongruence,
    CongruenceWitness,
    Undecided,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub verdict: Congruence,
    /// Content of the input form.
    pub content: String,
    /// Characteristic polynomial of the eigenbasis coefficient (after content
    /// normalization), constant term first, when it could be computed.
    pub coefficient_charpoly: Option<Vec<String>>,
}

fn rat_mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Rational::new();
                    for t in 0..n {
                        if a[i][t] != 0 && b[t][j] != 0 {
                            s += Rational::from(&a[i][t] * &b[t][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn rat_inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| Rational::from((i == j) as i32)));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r][c] != 0)?;
        m.swap(c, p);
        let inv = Rational::from(1) / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && m[r][c] != 0 {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let t = Rational::from(&f * &m[c][j]);
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn charpoly_rat(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::new(); n + 1];
    c[n] = Rational::from(1);
    let mut m = vec![vec![Rational::new(); n]; n];
    for i in 1..=n {
        let mut next = rat_mat_mul(a, &m);
        for (d, row) in next.iter_mut().enumerate() {
            row[d] += &c[n - i + 1];
        }
        m = next;
        let am = rat_mat_mul(a, &m);
        let mut tr = Rational::new();
        for d in 0..n {
            tr += &am[d][d];
        }
        c[n - i] = -tr / i as u32;
    }
    c
}

/// Multiplication by `a(theta)` on `Q[theta]/(P)` in the power basis; `P` monic.
fn mult_matrix(a: &[Rational], p: &[Integer]) -> Vec<Vec<Rational>> {
    let n = p.len() - 1;
    let reduce = |mut v: Vec<Rational>| -> Vec<Rational> {
        while v.len() > n {
            let top = v.pop().unwrap();
            let d = v.len() - n;
            for (i, pi) in p[..n].iter().enumerate() {
                v[d + i] -= Rational::from(&top * pi);
            }
        }
        v.resize(n, Rational::new());
        v
    };
    // Column j is a * theta^j.
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut v = vec![Rational::new(); j];
            v.extend(a.iter().cloned());
            reduce(v)
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// Decides whether `f = sum c_i g_i` over normalized eigenforms `g_i` has every
/// `c_i / content(f)` an algebraic integer, using the `T_2` matrix.
///
/// With `P` the (squarefree) characteristic polynomial of `T_2`, the
/// coefficient of the eigenform with eigenvalue `theta` is
/// `c(theta) = sum_j q_j(theta) a_1(T_2^j f) / P'(theta)` where
/// `P(T)/(T - theta) = sum_j q_j(theta) T^j`; all `c_i` are algebraic integers
/// exactly when the characteristic polynomial of multiplication by `c` on
/// `Q[theta]/(P)` has integer coefficients.
pub fn congruence_test(f: &[Integer], k: u32) -> Result<CongruenceReport> {
    let ku = k as usize;
    if f.len() != ku {
        return Err(Error::Domain(format!("need {ku} coordinates")));
    }
    let content = f.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if content == 0 {
        return Err(Error::Domain("zero form".into()));
    }
    let u: Vec<Integer> = f.iter().map(|x| Integer::from(x / &content)).collect();
    let h = hecke_operator(2, k, 2 * k + 2)?;
    let p = h.charpoly.coeffs().to_vec();
    let dp = h.charpoly.derivative();
    if h.charpoly.gcd(&dp).degree() != Some(0) {
        return Ok(CongruenceReport {
            verdict: Congruence::Undecided,
            content: content.to_string(),
            coefficient_charpoly: None,
        });
    }
    // s_j = first coordinate of u A^j (the q^1 coefficient of T_2^j f).
    let mut s = Vec::with_capacity(ku);
    let mut row = u.clone();
    for _ in 0..ku {
        s.push(row[0].clone());
        row = (0..ku)
            .map(|j| (0..ku).map(|i| Integer::from(&row[i] * &h.matrix[i][j])).sum())
            .collect();
    }
    // num(theta) = sum_j s_j q_j(theta), q_j(theta) = sum_(i > j) p_i theta^(i-j-1).
    let mut num = vec![Rational::new(); ku];
    for (j, sj) in s.iter().enumerate() {
        for i in j + 1..=ku {
            num[i - j - 1] += Rational::from(Integer::from(&p[i] * sj));
        }
    }
    let dcoeffs: Vec<Rational> = dp.coeffs().iter().map(|c| Rational::from(c.clone())).collect();
    let m_num = mult_matrix(&num, &p);
    let m_dp = mult_matrix(&dcoeffs, &p);
    let Some(inv) = rat_inverse(&m_dp) else {
        return Ok(CongruenceReport {
            verdict: Congruence::Undecided,
            content: content.to_string(),
            coefficient_charpoly: None,
        });
    };
    let mc = rat_mat_mul(&m_num, &inv);
    let cp = charpoly_rat(&mc);
    let integral = cp.iter().all(|c| *c.denom() == 1);
    Ok(CongruenceReport {
        verdict: if integral {
            Congruence::NoCongruence
        } else {
            Congruence::CongruenceWitness
        },
        content: content.to_string(),
        coefficient_charpoly: Some(cp.iter().map(|c| c.to_string()).collect()),
    })
}
