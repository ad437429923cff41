//! Factorization into irreducible factors: content, squarefree
//! decomposition, trial division by a pool, then discovery of factors of
//! degree at most four.

use rug::{Complex, Integer};
use serde::{Deserialize, Serialize};

use super::roots::{complex_roots, integer_relation, small_divisors};
use super::IntPoly;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Irreducibility {
    Certified,
    Reducible,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub poly: IntPoly,
    pub multiplicity: u32,
    pub irreducibility: Irreducibility,
    pub from_pool: bool,
}

/// `sign * content * prod factors^m * prod cofactors^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoredDivisor {
    pub sign: i32,
    #[serde(with = "integer_string")]
    pub content: Integer,
    pub factors: Vec<Factor>,
    /// Parts that could not be split; they are not claimed irreducible.
    pub cofactors: Vec<(IntPoly, u32)>,
}

mod integer_string {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FactoredDivisor {
    pub fn product(&self) -> IntPoly {
        let mut p = IntPoly::new(vec![Integer::from(&self.content * self.sign)]);
        for f in &self.factors {
            p = p.mul(&f.poly.pow(f.multiplicity));
        }
        for (c, m) in &self.cofactors {
            p = p.mul(&c.pow(*m));
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.poly.degree().unwrap_or(0) * f.multiplicity as usize).sum::<usize>()
            + self.cofactors.iter().map(|(c, m)| c.degree().unwrap_or(0) * *m as usize).sum::<usize>()
    }

    pub fn multiplicity_of(&self, p: &IntPoly) -> u32 {
        let p = p.normalized();
        self.factors.iter().filter(|f| f.poly == p).map(|f| f.multiplicity).sum()
    }

    pub fn has_cofactor(&self) -> bool {
        !self.cofactors.is_empty()
    }
}

/// Yun's squarefree decomposition of a primitive polynomial: pairs
/// `(s_i, i)` with `p = prod s_i^i` and the `s_i` squarefree and coprime.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, u32)> {
    let p = p.normalized();
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp).normalized();
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let mut c = dp.div_exact(&a0).expect("gcd divides derivative");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d).normalized();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

fn real_roots(roots: &[Complex]) -> Vec<f64> {
    roots
        .iter()
        .filter(|z| z.imag().to_f64().abs() < 1e-20 * (1.0 + z.real().to_f64().abs()))
        .map(|z| z.real().to_f64())
        .collect()
}

fn has_rational_root(g: &IntPoly, roots: &[Complex]) -> Option<bool> {
    if g.coeffs()[0] == 0 {
        return Some(true);
    }
    let lead = g.lead();
    if lead.significant_bits() > 40 {
        return None;
    }
    let divs = small_divisors(&lead);
    for x in real_roots(roots) {
        for q in &divs {
            let num = (x * q.to_f64()).round();
            let cand = rug::Rational::from((Integer::from_f64(num)?, q.clone()));
            if g.eval_rational(&cand) == 0 {
                return Some(true);
            }
        }
    }
    Some(false)
}

/// Irreducibility over the rationals for primitive polynomials of degree at
/// most four, decided exactly up to root approximation quality.
pub fn certify_irreducible(g: &IntPoly) -> Irreducibility {
    let g = g.normalized();
    let n = match g.degree() {
        Some(n) if n >= 1 => n,
        _ => return Irreducibility::Reducible,
    };
    if n == 1 {
        return Irreducibility::Certified;
    }
    if n == 2 {
        let c = g.coeffs();
        let disc: Integer = Integer::from(&c[1] * &c[1]) - Integer::from(&c[2] * &c[0]) * 4u32;
        return if disc >= 0 && disc.is_perfect_square() {
            Irreducibility::Reducible
        } else {
            Irreducibility::Certified
        };
    }
    if n > 4 {
        return Irreducibility::Unknown;
    }
    let roots = match complex_roots(&g, 256) {
        Ok(r) => r,
        Err(_) => return Irreducibility::Unknown,
    };
    match has_rational_root(&g, &roots) {
        None => return Irreducibility::Unknown,
        Some(true) => return Irreducibility::Reducible,
        Some(false) => {}
    }
    if n == 3 {
        return Irreducibility::Certified;
    }
    // Degree 4 without rational roots: rule out a product of two quadratics.
    let divs = small_divisors(&g.lead());
    let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    for pairing in pairings {
        let (i, j) = pairing[0];
        let s = Complex::with_val(256, &roots[i] + &roots[j]);
        let p = Complex::with_val(256, &roots[i] * &roots[j]);
        if s.imag().to_f64().abs() > 1e-20 || p.imag().to_f64().abs() > 1e-20 {
            continue;
        }
        for l in &divs {
            let b = (-s.real().to_f64() * l.to_f64()).round();
            let c = (p.real().to_f64() * l.to_f64()).round();
            let (Some(b), Some(c)) = (Integer::from_f64(b), Integer::from_f64(c)) else {
                continue;
            };
            let quad = IntPoly::new(vec![c, b, l.clone()]);
            if g.div_exact(&quad).is_some() {
                return Irreducibility::Reducible;
            }
        }
    }
    Irreducibility::Certified
}

/// Factors `p` using the pool of known irreducible polynomials first.
pub fn factorize(p: &IntPoly, pool: &[IntPoly]) -> Result<FactoredDivisor> {
    if p.is_zero() {
        return Err(Error::Domain("cannot factor the zero polynomial".into()));
    }
    let sign = if p.lead() < 0 { -1 } else { 1 };
    let content = p.content();
    let mut factors: Vec<Factor> = Vec::new();
    let mut cofactors = Vec::new();
    let pool: Vec<IntPoly> = pool.iter().map(|f| f.normalized()).filter(|f| f.degree().unwrap_or(0) > 0).collect();
    for (mut s, mult) in squarefree_decomposition(p) {
        for f in &pool {
            if s.degree() < f.degree() {
                continue;
            }
            if let Some(q) = s.div_exact(f) {
                factors.push(Factor {
                    poly: f.clone(),
                    multiplicity: mult,
                    irreducibility: certify_irreducible(f),
                    from_pool: true,
                });
                s = q.normalized();
            }
        }
        while s.degree().unwrap_or(0) > 0 {
            let deg = s.degree().unwrap();
            if deg <= 4 && certify_irreducible(&s) == Irreducibility::Certified {
                factors.push(Factor {
                    poly: s.clone(),
                    multiplicity: mult,
                    irreducibility: Irreducibility::Certified,
                    from_pool: false,
                });
                break;
            }
            match discover_factor(&s)? {
                Some(g) => {
                    s = s.div_exact(&g).expect("discovered factor divides").normalized();
                    factors.push(Factor {
                        poly: g,
                        multiplicity: mult,
                        irreducibility: Irreducibility::Certified,
                        from_pool: false,
                    });
                }
                None => {
                    cofactors.push((s.clone(), mult));
                    break;
                }
            }
        }
    }
    factors.sort_by(|a, b| (a.poly.degree(), &a.poly).cmp(&(b.poly.degree(), &b.poly)));
    Ok(FactoredDivisor {
        sign,
        content,
        factors,
        cofactors,
    })
}

/// An irreducible factor of degree at most four of a squarefree polynomial.
fn discover_factor(s: &IntPoly) -> Result<Option<IntPoly>> {
    let deg = s.degree().unwrap_or(0);
    let bits = s.coeffs().iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    let prec = (256 + 8 * bits + 8 * deg as u32).max(256);
    let mut roots = complex_roots(s, prec)?;
    roots.sort_by(|a, b| {
        let ka = (a.imag().to_f64().abs(), a.real().to_f64());
        let kb = (b.imag().to_f64().abs(), b.real().to_f64());
        ka.partial_cmp(&kb).unwrap()
    });
    for d in 1..=deg.min(4) {
        for r in &roots {
            if let Some(g) = integer_relation(r, d)? {
                if g.degree() == Some(d) && s.div_exact(&g).is_some() && certify_irreducible(&g) == Irreducibility::Certified {
                    return Ok(Some(g));
                }
            }
        }
    }
    Ok(None)
}
