//! Shortest vectors and successive minima by enumeration after reduction.

use std::cmp::Ordering;

use rug::{Integer, Rational};

use super::enumerate::{enumerate, EnumMode};
use super::reduce::Work;
use super::{GramForm, NormSq};
use crate::error::{Error, Result};

/// Controls reduction and enumeration.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub delta: f64,
    /// Largest dimension for certified enumeration.
    pub enum_limit: usize,
    pub bkz_block: usize,
    /// BKZ preprocessing is used above this dimension.
    pub bkz_threshold: usize,
    pub bkz_tours: usize,
    pub node_budget: u64,
    /// Allows pruned enumeration and lifts the dimension limit; results are
    /// flagged as not certified.
    pub heuristic: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            delta: 0.99,
            enum_limit: 64,
            bkz_block: 20,
            bkz_threshold: 30,
            bkz_tours: 8,
            node_budget: 2_000_000_000,
            heuristic: false,
        }
    }
}

/// Relative gap below which an approximate-form winner is only heuristic.
pub const NEAR_TIE_GAP: f64 = 1.0 / 4_294_967_296.0;

/// Relative slack applied to floating-point enumeration radii.
const SLACK: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct ShortestVector {
    /// Coordinates in the input basis, first nonzero entry positive.
    pub coords: Vec<Integer>,
    pub norm: NormSq,
    /// True when optimality is certified (exact search, no near tie).
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct Minima {
    /// Nondecreasing squared norms.
    pub values: Vec<NormSq>,
    pub witnesses: Vec<Vec<Integer>>,
    /// Set when the enumeration budget ran out before the search finished.
    pub partial: bool,
    pub certified: bool,
    pub log_scale: f64,
}

impl Minima {
    /// Natural logs of the true squared norms (including `log_scale`).
    pub fn ln_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.ln() + self.log_scale).collect()
    }
}

fn cmp_norm(a: &NormSq, b: &NormSq) -> Ordering {
    match (a, b) {
        (NormSq::Exact(x), NormSq::Exact(y)) => x.cmp(y),
        _ => {
            let p = 512;
            a.to_float(p).partial_cmp(&b.to_float(p)).unwrap_or(Ordering::Equal)
        }
    }
}

/// Flips the sign so the first nonzero entry is positive.
fn canonical_sign(mut v: Vec<Integer>) -> Vec<Integer> {
    if let Some(first) = v.iter().find(|x| **x != 0) {
        if *first < 0 {
            for x in v.iter_mut() {
                *x = Integer::from(-&*x);
            }
        }
    }
    v
}

/// Norm ascending; equal norms put the lexicographically largest vector first.
fn cmp_candidates(a: &(NormSq, Vec<Integer>), b: &(NormSq, Vec<Integer>)) -> Ordering {
    cmp_norm(&a.0, &b.0).then_with(|| b.1.cmp(&a.1))
}

fn reduce(g: &GramForm, opts: &SearchOptions) -> Result<Work> {
    g.cholesky()?;
    let mut w = Work::new(g)?;
    if g.dim() > opts.bkz_threshold {
        w.bkz(opts.bkz_block, opts.delta, opts.bkz_tours, 2_000_000)?;
    } else {
        w.lll(opts.delta)?;
    }
    Ok(w)
}

fn linear_pruning(m: usize) -> Vec<f64> {
    // Bound at level i (levels i..m-1 fixed) grows linearly toward the leaves.
    (0..m).map(|i| (1.05 * (m - i) as f64 / m as f64).min(1.0)).collect()
}

/// Shortest nonzero lattice vector, with the tie-break described on
/// [`ShortestVector::coords`].
pub fn shortest_vector(g: &GramForm, opts: &SearchOptions) -> Result<ShortestVector> {
    let n = g.dim();
    if n == 0 {
        return Err(Error::Domain("empty lattice".into()));
    }
    if n > opts.enum_limit && !opts.heuristic {
        return Err(Error::DimensionOverLimit {
            dim: n,
            limit: opts.enum_limit,
        });
    }
    let w = reduce(g, opts)?;
    let (mu, r) = w.profile(0, n);
    let pruning = if opts.heuristic { Some(linear_pruning(n)) } else { None };
    let first = enumerate(
        &mu,
        &r,
        &EnumMode::Shortest {
            radius: 1.0 + SLACK,
            pruning,
        },
        opts.node_budget,
    );
    let best = first.best.as_ref().map(|b| b.1).unwrap_or(1.0).min(1.0);
    let window = enumerate(
        &mu,
        &r,
        &EnumMode::All {
            radius: best * (1.0 + SLACK),
        },
        opts.node_budget,
    );
    let mut cands: Vec<(NormSq, Vec<Integer>)> = window
        .all
        .iter()
        .map(|(x, _)| (w.norm_sq_current(x), canonical_sign(w.original_coords(x))))
        .collect();
    let mut e0 = vec![0i64; n];
    e0[0] = 1;
    cands.push((w.norm_sq_current(&e0), canonical_sign(w.original_coords(&e0))));
    cands.sort_by(cmp_candidates);
    cands.dedup_by(|a, b| a.1 == b.1);
    let (norm, coords) = cands[0].clone();
    let exhausted = first.exhausted || window.exhausted;
    let mut certified = !exhausted && !opts.heuristic;
    if !g.is_exact() && certified {
        let tol = NEAR_TIE_GAP.max(4.0 * g.eps());
        let nv = norm.to_f64();
        let gap = match cands.get(1) {
            Some((m2, _)) => (m2.to_f64() - nv) / nv,
            None => SLACK,
        };
        certified = gap > tol;
    }
    Ok(ShortestVector {
        coords,
        norm,
        certified,
    })
}

/// Incremental exact rank test over the rationals.
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub(crate) fn try_add(&mut self, v: &[Integer]) -> bool {
        let mut x: Vec<Rational> = v.iter().map(|a| Rational::from(a.clone())).collect();
        for (p, row) in &self.rows {
            if x[*p] != 0 {
                let f = x[*p].clone();
                for (xi, ri) in x.iter_mut().zip(row) {
                    if *ri != 0 {
                        *xi -= Rational::from(&f * ri);
                    }
                }
            }
        }
        match x.iter().position(|a| *a != 0) {
            None => false,
            Some(p) => {
                let inv = Rational::from(1) / &x[p];
                for xi in x.iter_mut() {
                    *xi *= &inv;
                }
                self.rows.push((p, x));
                true
            }
        }
    }
}

/// Search for the shortest vectors outside the span of rows `0..p` of a basis
/// whose first `p` rows span a saturated sublattice. Tail coordinates
/// (`p..n`) are enumerated; each tail is completed by the closest point of the
/// prefix lattice, so vectors inside the span are never visited.
struct Outside<'a> {
    mu: &'a [Vec<f64>],
    r: &'a [f64],
    p: usize,
    x: Vec<i64>,
    radius: f64,
    cvp_radius: f64,
    collect: bool,
    cands: Vec<(Vec<i64>, f64)>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Outside<'_> {
    fn center(&self, i: usize) -> f64 {
        let mut c = 0.0;
        for j in i + 1..self.x.len() {
            c -= self.x[j] as f64 * self.mu[j][i];
        }
        c
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
        }
        self.exhausted
    }

    fn tail(&mut self, i: usize, rho_above: f64, top_zero: bool) {
        let c = if top_zero { 0.0 } else { self.center(i) };
        let mut it = ZigZag::new(c, top_zero);
        loop {
            let v = it.next_value();
            let d = v as f64 - c;
            let rho = rho_above + d * d * self.r[i];
            if rho > self.radius * (1.0 + 1e-12) || self.tick() {
                break;
            }
            self.x[i] = v;
            let still_zero = top_zero && v == 0;
            if i == self.p {
                if !still_zero {
                    self.complete(rho);
                }
            } else {
                self.tail(i - 1, rho, still_zero);
            }
            self.x[i] = 0;
            if self.exhausted {
                return;
            }
        }
    }

    fn complete(&mut self, tail_rho: f64) {
        if self.p == 0 {
            self.cands.push((self.x.clone(), tail_rho));
            self.radius = self.radius.min(tail_rho * (1.0 + SLACK));
            return;
        }
        self.cvp_radius = self.radius - tail_rho;
        self.collect = false;
        let start = self.cands.len();
        let mut best = f64::INFINITY;
        self.cvp(self.p - 1, 0.0, &mut best);
        if !best.is_finite() {
            return;
        }
        self.cvp_radius = best * (1.0 + SLACK);
        self.collect = true;
        self.cvp(self.p - 1, 0.0, &mut best);
        for c in &mut self.cands[start..] {
            c.1 += tail_rho;
        }
        self.radius = self.radius.min((tail_rho + best) * (1.0 + SLACK));
    }

    fn cvp(&mut self, i: usize, rho_above: f64, best: &mut f64) {
        let c = self.center(i);
        let mut it = ZigZag::new(c, false);
        loop {
            let v = it.next_value();
            let d = v as f64 - c;
            let rho = rho_above + d * d * self.r[i];
            if rho > self.cvp_radius * (1.0 + 1e-12) || self.tick() {
                break;
            }
            self.x[i] = v;
            if i == 0 {
                if self.collect {
                    self.cands.push((self.x.clone(), rho));
                } else if rho < *best {
                    *best = rho;
                    self.cvp_radius = rho;
                }
            } else {
                self.cvp(i - 1, rho, best);
            }
            self.x[i] = 0;
            if self.exhausted {
                return;
            }
        }
    }
}

/// Integers in order of distance from `c`; only `0, 1, 2, ...` when the
/// levels above are all zero (one vector of each `±v` pair).
struct ZigZag {
    v0: i64,
    up_first: bool,
    nonneg: bool,
    step: i64,
}

impl ZigZag {
    fn new(c: f64, nonneg: bool) -> Self {
        let v0 = c.round() as i64;
        ZigZag {
            v0,
            up_first: c >= v0 as f64,
            nonneg,
            step: 0,
        }
    }

    fn next_value(&mut self) -> i64 {
        let s = self.step;
        self.step += 1;
        if self.nonneg {
            return s;
        }
        if s == 0 {
            return self.v0;
        }
        let k = (s + 1) / 2;
        if (s % 2 == 1) == self.up_first {
            self.v0 + k
        } else {
            self.v0 - k
        }
    }
}

/// The first `m` successive minima. Each step finds the shortest vectors
/// outside the span of those already chosen, then moves the chosen vector into
/// a saturated basis prefix.
pub fn successive_minima(g: &GramForm, m: usize, opts: &SearchOptions) -> Result<Minima> {
    let n = g.dim();
    if m < 1 || m > n {
        return Err(Error::Domain(format!("need 1 <= m <= dim = {n}, got {m}")));
    }
    if n > opts.enum_limit && !opts.heuristic {
        return Err(Error::DimensionOverLimit {
            dim: n,
            limit: opts.enum_limit,
        });
    }
    let mut w = reduce(g, opts)?;
    let mut values = Vec::with_capacity(m);
    let mut witnesses = Vec::with_capacity(m);
    let mut nodes = 0u64;
    let mut exhausted = false;
    for p in 0..m {
        let (mu, mut r) = w.profile(0, n);
        let scale = r[p];
        for v in r.iter_mut() {
            *v /= scale;
        }
        let bp: f64 = 1.0 + (0..p).map(|j| mu[p][j] * mu[p][j] * r[j]).sum::<f64>();
        let mut s = Outside {
            mu: &mu,
            r: &r,
            p,
            x: vec![0; n],
            radius: bp * (1.0 + SLACK),
            cvp_radius: 0.0,
            collect: false,
            cands: Vec::new(),
            nodes: 0,
            budget: opts.node_budget.saturating_sub(nodes),
            exhausted: false,
        };
        s.tail(n - 1, 0.0, true);
        nodes += s.nodes;
        exhausted |= s.exhausted;
        let limit = s.radius;
        let mut e = vec![0i64; n];
        e[p] = 1;
        let mut cands: Vec<(NormSq, Vec<Integer>, Vec<i64>)> = s
            .cands
            .into_iter()
            .filter(|(_, rho)| *rho <= limit)
            .chain(std::iter::once((e, 0.0)))
            .map(|(x, _)| (w.norm_sq_current(&x), canonical_sign(w.original_coords(&x)), x))
            .collect();
        cands.sort_by(|a, b| cmp_norm(&a.0, &b.0).then_with(|| b.1.cmp(&a.1)));
        cands.dedup_by(|a, b| a.1 == b.1);
        let (v, coords, x) = cands.swap_remove(0);
        values.push(v);
        witnesses.push(coords);
        if p + 1 < n {
            w.place(p, &x[p..]);
            w.lll_range(0, p + 1, opts.delta)?;
            w.lll_range(p + 1, n, opts.delta)?;
        }
    }
    Ok(Minima {
        values,
        witnesses,
        partial: exhausted,
        certified: !exhausted && !opts.heuristic,
        log_scale: g.log_scale,
    })
}

/// All nonzero lattice vectors (one of each `±v` pair) with squared norm at
/// most `radius`, in the units of the form.
#[derive(Clone, Debug)]
pub struct ShortVectors {
    /// Sorted by norm; ties put the lexicographically largest vector first.
    pub vectors: Vec<(NormSq, Vec<Integer>)>,
    pub exhausted: bool,
}

pub fn short_vectors(g: &GramForm, radius: &rug::Float, opts: &SearchOptions) -> Result<ShortVectors> {
    let n = g.dim();
    if n > opts.enum_limit && !opts.heuristic {
        return Err(Error::DimensionOverLimit {
            dim: n,
            limit: opts.enum_limit,
        });
    }
    let w = reduce(g, opts)?;
    let (mu, r) = w.profile(0, n);
    let rel = (rug::Float::with_val(w.prec, radius) / &w.r[0]).to_f64();
    let out = enumerate(
        &mu,
        &r,
        &EnumMode::All {
            radius: rel * (1.0 + SLACK),
        },
        opts.node_budget,
    );
    let bound = NormSq::Approx(rug::Float::with_val(w.prec, radius));
    let mut vectors: Vec<(NormSq, Vec<Integer>)> = out
        .all
        .iter()
        .map(|(x, _)| (w.norm_sq_current(x), canonical_sign(w.original_coords(x))))
        .filter(|(v, _)| cmp_norm(v, &bound) != Ordering::Greater)
        .collect();
    vectors.sort_by(cmp_candidates);
    vectors.dedup_by(|a, b| a.1 == b.1);
    Ok(ShortVectors {
        vectors,
        exhausted: out.exhausted,
    })
}
