//! High-precision helpers: log-scaled reals and Gauss–Legendre rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

/// A real number stored as `mantissa * e^log_scale` with `1 <= |mantissa| < e`.
///
/// Zero is represented by a zero mantissa and `log_scale = -inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledReal {
    pub mantissa: Float,
    pub log_scale: f64,
}

impl ScaledReal {
    pub fn zero(prec: u32) -> Self {
        ScaledReal {
            mantissa: Float::new(prec),
            log_scale: f64::NEG_INFINITY,
        }
    }

    pub fn from_float(x: &Float) -> Self {
        let prec = x.prec();
        if x.is_zero() {
            return Self::zero(prec);
        }
        let ln = Float::with_val(prec, x.abs_ref()).ln();
        let scale = ln.to_f64().floor();
        let mut m = Float::with_val(prec, x) / Float::with_val(prec, scale).exp();
        // Rounding can leave the mantissa a hair outside [1, e).
        let mut s = scale;
        let e = Float::with_val(prec, 1).exp();
        if Float::with_val(prec, m.abs_ref()) >= e {
            m /= &e;
            s += 1.0;
        } else if Float::with_val(prec, m.abs_ref()) < 1 {
            m *= &e;
            s -= 1.0;
        }
        ScaledReal {
            mantissa: m,
            log_scale: s,
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        if self.mantissa.is_zero() {
            return Float::new(prec);
        }
        Float::with_val(prec, &self.mantissa) * Float::with_val(prec, self.log_scale).exp()
    }

    /// Natural log of the absolute value.
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, self.mantissa.abs_ref()).ln().to_f64() + self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }
}

#[derive(Serialize, Deserialize)]
struct ScaledRealRepr {
    mantissa: String,
    log_scale: f64,
    prec: u32,
}

impl Serialize for ScaledReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let digits = (self.mantissa.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        ScaledRealRepr {
            mantissa: self.mantissa.to_string_radix(10, Some(digits)),
            log_scale: self.log_scale,
            prec: self.mantissa.prec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaledReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ScaledRealRepr::deserialize(d)?;
        let parsed = Float::parse(&r.mantissa).map_err(serde::de::Error::custom)?;
        Ok(ScaledReal {
            mantissa: Float::with_val(r.prec, parsed),
            log_scale: r.log_scale,
        })
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Gauss–Legendre nodes and weights on [-1, 1], cached per (order, precision).
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

type GlCache = Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>;

fn gl_cache() -> &'static GlCache {
    static CACHE: OnceLock<GlCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn gauss_legendre(m: usize, prec: u32) -> Arc<GaussLegendre> {
    let key = (m, prec);
    if let Some(rule) = gl_cache().lock().unwrap().get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(compute_gauss_legendre(m, prec));
    gl_cache().lock().unwrap().insert(key, rule.clone());
    rule
}

fn legendre_and_derivative(m: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, x);
    for n in 2..=m {
        let nf = n as u32;
        let p2 = (Float::with_val(prec, 2 * nf - 1) * x * &p1 - Float::with_val(prec, nf - 1) * &p0)
            / nf;
        p0 = p1;
        p1 = p2;
    }
    // P'_m(x) = m (x P_m - P_{m-1}) / (x^2 - 1)
    let x2m1 = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = Float::with_val(prec, m as u32) * (Float::with_val(prec, x * &p1) - &p0) / x2m1;
    (p1, d)
}

fn compute_gauss_legendre(m: usize, prec: u32) -> GaussLegendre {
    let wp = prec + 32;
    let pi = pi(wp);
    let tol = Float::with_val(wp, 2).pow(-(prec as i32) - 8);
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        // Tricomi initial guess, then Newton.
        let theta = Float::with_val(wp, &pi * (4 * i as u32 + 3)) / (4 * m as u32 + 2);
        let mut x = theta.cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(m, &x);
            let dx = p / &d;
            x -= &dx;
            if dx.abs() < tol {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(m, &x);
        let w = Float::with_val(wp, 2)
            / ((Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref())) * d.square());
        nodes.push(Float::with_val(prec, &x));
        weights.push(Float::with_val(prec, &w));
    }
    GaussLegendre { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_real_round_trip() {
        let x = Float::with_val(128, 1.0e300) * Float::with_val(128, 1.0e300);
        let s = ScaledReal::from_float(&x);
        assert!(Float::with_val(128, s.mantissa.abs_ref()) >= 1);
        assert!(s.mantissa < Float::with_val(128, 1).exp());
        let back = s.to_float(128);
        let rel = Float::with_val(128, &back - &x).abs() / &x;
        assert!(rel < 1e-30);
        assert!((s.ln_abs() - 600.0 * std::f64::consts::LN_10).abs() < 1e-9);
    }

    #[test]
    fn scaled_real_negative_and_zero() {
        let s = ScaledReal::from_float(&Float::with_val(64, -0.5));
        assert!(s.mantissa < 0);
        assert_eq!(s.log_scale, -1.0);
        assert!(ScaledReal::from_float(&Float::new(64)).is_zero());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(8, 128);
        // Exact for degree 15: integral of x^14 over [-1,1] is 2/15.
        let mut s = Float::with_val(128, 0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            s += Float::with_val(128, x).pow(14u32) * w;
        }
        let err = (s - Float::with_val(128, 2) / 15u32).abs();
        assert!(err < 1e-35);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let rule = gauss_legendre(32, 256);
        let mut s = Float::with_val(256, 0);
        for w in &rule.weights {
            s += w;
        }
        assert!((s - 2u32).abs() < 1e-70);
    }
}
