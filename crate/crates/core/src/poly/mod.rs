//! Integer polynomials in one variable, disc metrics and factorization.

mod disc;
mod factor;
mod roots;

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

pub use disc::*;
pub use factor::*;
pub use roots::*;

/// Integer polynomial with coefficients stored from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// The monomial `z^n`.
    pub fn z_pow(n: usize) -> Self {
        let mut c = vec![Integer::new(); n + 1];
        c[n] = Integer::from(1);
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Integer {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Primitive part with positive leading coefficient.
    pub fn normalized(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead() < 0 {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| Integer::from(-c)).collect())
    }

    pub fn scale(&self, s: &Integer) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| Integer::from(c * s)).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let mut s = self.coeffs.get(i).cloned().unwrap_or_default();
                if let Some(b) = o.coeffs.get(i) {
                    s += b;
                }
                s
            })
            .collect();
        IntPoly::new(c)
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![Integer::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut r = IntPoly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Integer::from(c * i as u32))
                .collect(),
        )
    }

    /// Exact quotient over the integers, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let mut q = vec![Integer::new(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = &rem[i + dd];
            if *c == 0 {
                continue;
            }
            if !c.is_divisible(&lead) {
                return None;
            }
            let t = Integer::from(c.div_exact_ref(&lead));
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] -= Integer::from(&t * dj);
            }
            q[i] = t;
        }
        if rem.iter().any(|c| *c != 0) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Pseudo-remainder `lead(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let lead = d.lead();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead();
            let mut shifted = vec![Integer::new(); rd - dd];
            shifted.extend(d.coeffs.iter().map(|x| Integer::from(x * &c)));
            r = r.scale(&lead).sub(&IntPoly::new(shifted));
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient
    /// (content gcd included).
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return o.normalized_keep_content();
        }
        if o.is_zero() {
            return self.normalized_keep_content();
        }
        let c = Integer::from(self.content().gcd_ref(&o.content()));
        let mut a = self.normalized();
        let mut b = o.normalized();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.normalized() };
        }
        a.normalized().scale(&c)
    }

    fn normalized_keep_content(&self) -> IntPoly {
        if self.lead() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Resultant of `self` and `o` as the determinant of the Sylvester
    /// matrix (fraction-free Bareiss elimination).
    pub fn resultant(&self, o: &IntPoly) -> Integer {
        let (Some(m), Some(n)) = (self.degree(), o.degree()) else {
            return Integer::new();
        };
        let size = m + n;
        if size == 0 {
            return Integer::from(1);
        }
        let mut a = vec![vec![Integer::new(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                a[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in o.coeffs.iter().rev().enumerate() {
                a[n + i][i + j] = c.clone();
            }
        }
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..size {
            if a[k][k] == 0 {
                match (k + 1..size).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Integer::new(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let t = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                    a[i][j] = t / &prev;
                }
                a[i][k] = Integer::new();
            }
            prev = a[k][k].clone();
        }
        prev * sign
    }

    /// `(-1)^(n(n-1)/2) Res(p, p') / lead(p)`.
    pub fn discriminant(&self) -> Integer {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Integer::new(),
        };
        let r = self.resultant(&self.derivative()) / self.lead();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients of `p(c + w)` in powers of `w`.
    pub fn taylor_shift(&self, c: &Rational) -> Vec<Rational> {
        let mut a: Vec<Rational> = self.coeffs.iter().map(|x| Rational::from(x.clone())).collect();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = Rational::from(&a[j + 1] * c);
                a[j] += t;
            }
        }
        a
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = abs != 1 || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let c = v
            .iter()
            .map(|s| s.parse::<Integer>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(c))
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn discriminants() {
        use super::IntPoly;
        use rug::Integer;
        assert_eq!(IntPoly::from_i64(&[-20468736, -1080, 1]).discriminant(), Integer::from(576) * 144169);
        // z^3 + p z + q has discriminant -4p^3 - 27q^2.
        assert_eq!(IntPoly::from_i64(&[5, -2, 0, 1]).discriminant(), Integer::from(32 - 675));
        assert_eq!(IntPoly::from_i64(&[1, 2, 1]).discriminant(), 0);
        assert_eq!(IntPoly::from_i64(&[3, 7]).discriminant(), 1);
    }

    use super::*;

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -8, 27, -44, 29]).to_string(), "29z^4 - 44z^3 + 27z^2 - 8z + 1");
        assert_eq!(IntPoly::from_i64(&[0, 1]).to_string(), "z");
        assert_eq!(IntPoly::from_i64(&[-1, 2]).to_string(), "2z - 1");
    }

    #[test]
    fn gcd_and_division() {
        let a = IntPoly::from_i64(&[-1, 2]);
        let b = IntPoly::from_i64(&[1, -4, 5]);
        let p = a.mul(&a).mul(&b);
        let q = a.mul(&IntPoly::from_i64(&[0, 1]));
        assert_eq!(p.gcd(&q), a);
        assert_eq!(p.div_exact(&a).unwrap(), a.mul(&b));
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = IntPoly::from_i64(&[3, -1, 2, 5]);
        let c = Rational::from((1, 4));
        let t = p.taylor_shift(&c);
        assert_eq!(t[0], p.eval_rational(&c));
        let w = Rational::from((2, 3));
        let mut acc = Rational::new();
        for x in t.iter().rev() {
            acc *= &w;
            acc += x;
        }
        assert_eq!(acc, p.eval_rational(&Rational::from(&c + &w)));
    }
}
