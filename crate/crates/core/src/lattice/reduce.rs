//! Gram-based LLL and BKZ with exact integer transforms.

use rug::{Assign, Float, Integer, Rational};

use super::enumerate::{enumerate, EnumMode};
use super::{GramEntries, GramForm, NormSq};
use crate::error::{Error, Result};

pub(crate) enum WorkGram {
    /// Integer Gram matrix equal to `denom` times the exact form.
    Int { g: Vec<Vec<Integer>>, denom: Integer },
    Flt(Vec<Vec<Float>>),
}

/// A basis under reduction, with its Gram matrix, transform and GSO data.
pub(crate) struct Work {
    pub n: usize,
    pub g: WorkGram,
    /// Row `i` holds the coordinates of basis vector `i` in the input basis.
    pub u: Vec<Vec<Integer>>,
    pub prec: u32,
    pub mu: Vec<Vec<Float>>,
    rkj: Vec<Vec<Float>>,
    pub r: Vec<Float>,
    eps: f64,
    log_scale: f64,
}

const ETA: f64 = 0.51;

impl Work {
    pub fn new(form: &GramForm) -> Result<Self> {
        let n = form.dim();
        let (g, prec) = match &form.entries {
            GramEntries::Exact(e) => {
                let mut denom = Integer::from(1);
                for q in e.iter().flatten() {
                    denom.lcm_mut(q.denom());
                }
                let g: Vec<Vec<Integer>> = e
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|q| Integer::from(q.numer() * Integer::from(&denom / q.denom())))
                            .collect()
                    })
                    .collect();
                let bits = g.iter().flatten().map(|x| x.significant_bits()).max().unwrap_or(1);
                let prec = (bits + 2 * n as u32 + 64).max(128);
                (WorkGram::Int { g, denom }, prec)
            }
            GramEntries::Approx { entries, .. } => {
                let p = form.natural_prec();
                let prec = (2 * p).max(p + 2 * n as u32 + 64);
                let g = entries
                    .iter()
                    .map(|row| row.iter().map(|x| Float::with_val(prec, x)).collect())
                    .collect();
                (WorkGram::Flt(g), prec)
            }
        };
        let u = (0..n)
            .map(|i| (0..n).map(|j| Integer::from((i == j) as i32)).collect())
            .collect();
        Ok(Work {
            n,
            g,
            u,
            prec,
            mu: vec![vec![Float::new(prec); n]; n],
            rkj: vec![vec![Float::new(prec); n]; n],
            r: vec![Float::new(prec); n],
            eps: form.eps(),
            log_scale: form.log_scale,
        })
    }

    fn entry(&self, i: usize, j: usize) -> Float {
        match &self.g {
            WorkGram::Int { g, .. } => Float::with_val(self.prec, &g[i][j]),
            WorkGram::Flt(g) => g[i][j].clone(),
        }
    }

    /// `b_k <- b_k - q b_l`.
    pub fn size_reduce(&mut self, k: usize, l: usize, q: &Integer) {
        let n = self.n;
        match &mut self.g {
            WorkGram::Int { g, .. } => {
                for j in 0..n {
                    let t = Integer::from(q * &g[l][j]);
                    g[k][j] -= t;
                }
                for j in 0..n {
                    let t = Integer::from(q * &g[j][l]);
                    g[j][k] -= t;
                }
            }
            WorkGram::Flt(g) => {
                let prec = self.prec;
                for j in 0..n {
                    let t = Float::with_val(prec, &g[l][j] * q);
                    g[k][j] -= t;
                }
                for j in 0..n {
                    let t = Float::with_val(prec, &g[j][l] * q);
                    g[j][k] -= t;
                }
            }
        }
        for j in 0..n {
            let t = Integer::from(q * &self.u[l][j]);
            self.u[k][j] -= t;
        }
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        match &mut self.g {
            WorkGram::Int { g, .. } => {
                g.swap(i, j);
                for row in g.iter_mut() {
                    row.swap(i, j);
                }
            }
            WorkGram::Flt(g) => {
                g.swap(i, j);
                for row in g.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
        self.u.swap(i, j);
    }

    /// Recomputes GSO row `k` from the Gram matrix, assuming rows below are valid.
    pub fn gso_row(&mut self, k: usize) {
        let prec = self.prec;
        let mut acc = Float::new(prec);
        for j in 0..k {
            let mut s = self.entry(k, j);
            for i in 0..j {
                acc.assign(&self.mu[j][i] * &self.rkj[k][i]);
                s -= &acc;
            }
            let m = Float::with_val(prec, &s / &self.r[j]);
            self.rkj[k][j] = s;
            self.mu[k][j] = m;
        }
        let mut s = self.entry(k, k);
        for j in 0..k {
            acc.assign(&self.mu[k][j] * &self.rkj[k][j]);
            s -= &acc;
        }
        self.r[k] = s;
    }

    pub fn gso_all(&mut self) -> Result<()> {
        for k in 0..self.n {
            self.gso_row(k);
            if self.r[k] <= 0 {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(())
    }

    fn size_reduce_row(&mut self, k: usize) -> Result<()> {
        for _ in 0..500 {
            self.gso_row(k);
            let mut changed = false;
            for j in (0..k).rev() {
                if self.mu[k][j].to_f64().abs() > ETA {
                    let q = Float::with_val(self.prec, self.mu[k][j].round_ref())
                        .to_integer()
                        .ok_or_else(|| Error::Numeric("non-finite GSO coefficient".into()))?;
                    self.size_reduce(k, j, &q);
                    for i in 0..j {
                        let t = Float::with_val(self.prec, &self.mu[j][i] * &q);
                        self.mu[k][i] -= t;
                    }
                    self.mu[k][j] -= &q;
                    changed = true;
                }
            }
            if !changed {
                return Ok(());
            }
        }
        Err(Error::Numeric("size reduction did not stabilize; raise precision".into()))
    }

    pub fn lll(&mut self, delta: f64) -> Result<()> {
        self.lll_range(0, self.n, delta)
    }

    /// LLL on rows `from..to`, size-reducing against every earlier row. The
    /// span of rows `0..from` is left untouched.
    pub fn lll_range(&mut self, from: usize, to: usize, delta: f64) -> Result<()> {
        if to <= from {
            return self.gso_all();
        }
        for k in 0..=from {
            self.gso_row(k);
        }
        if self.r[from] <= 0 {
            return Err(Error::NotPositiveDefinite);
        }
        self.size_reduce_row(from)?;
        let mut k = from + 1;
        let mut iters: u64 = 0;
        while k < to {
            iters += 1;
            if iters > 50_000_000 {
                return Err(Error::Numeric("LLL iteration limit reached".into()));
            }
            self.size_reduce_row(k)?;
            if self.r[k] <= 0 {
                return Err(Error::NotPositiveDefinite);
            }
            let lhs = Float::with_val(self.prec, &self.r[k - 1] * delta);
            let rhs = Float::with_val(self.prec, self.mu[k][k - 1].square_ref()) * &self.r[k - 1] + &self.r[k];
            if lhs > rhs {
                self.swap(k - 1, k);
                if k > from + 1 {
                    k -= 1;
                } else {
                    self.size_reduce_row(from)?;
                }
            } else {
                k += 1;
            }
        }
        self.gso_all()
    }

    /// GSO data of rows `from..to` as doubles, with squared lengths
    /// normalized by `r[from]`.
    pub fn profile(&self, from: usize, to: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let m = to - from;
        let r0 = &self.r[from];
        let mut mu = vec![vec![0.0; m]; m];
        let mut r = vec![0.0; m];
        for i in 0..m {
            for j in 0..i {
                mu[i][j] = self.mu[from + i][from + j].to_f64();
            }
            mu[i][i] = 1.0;
            r[i] = Float::with_val(64, &self.r[from + i] / r0).to_f64();
        }
        (mu, r)
    }

    /// Squared norm of the combination `sum x_i b_i` of current basis vectors.
    pub fn norm_sq_current(&self, x: &[i64]) -> NormSq {
        match &self.g {
            WorkGram::Int { g, denom } => {
                let mut s = Integer::new();
                for i in 0..self.n {
                    if x[i] == 0 {
                        continue;
                    }
                    let mut row = Integer::new();
                    for j in 0..self.n {
                        if x[j] != 0 {
                            row += Integer::from(&g[i][j] * x[j]);
                        }
                    }
                    s += row * x[i];
                }
                NormSq::Exact(Rational::from((s, denom.clone())))
            }
            WorkGram::Flt(g) => {
                let mut s = Float::with_val(self.prec, 0);
                for i in 0..self.n {
                    if x[i] == 0 {
                        continue;
                    }
                    let mut row = Float::with_val(self.prec, 0);
                    for j in 0..self.n {
                        if x[j] != 0 {
                            row += Float::with_val(self.prec, &g[i][j] * x[j]);
                        }
                    }
                    s += row * x[i];
                }
                NormSq::Approx(s)
            }
        }
    }

    /// Coordinates in the input basis of `sum x_i b_i`.
    pub fn original_coords(&self, x: &[i64]) -> Vec<Integer> {
        let mut out = vec![Integer::new(); self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (o, uij) in out.iter_mut().zip(&self.u[i]) {
                *o += Integer::from(uij * xi);
            }
        }
        out
    }

    pub fn current_form(&self) -> GramForm {
        let entries = match &self.g {
            WorkGram::Int { g, denom } => GramEntries::Exact(
                g.iter()
                    .map(|row| row.iter().map(|x| Rational::from((x.clone(), denom.clone()))).collect())
                    .collect(),
            ),
            WorkGram::Flt(g) => GramEntries::Approx {
                entries: g.clone(),
                eps: self.eps,
            },
        };
        GramForm {
            entries,
            log_scale: self.log_scale,
        }
    }

    /// Makes `sum x_i b_{k+i}` (primitive) the basis vector at position `k`
    /// using unimodular operations inside the block, then re-reduces.
    fn insert(&mut self, k: usize, x: &[i64], delta: f64) -> Result<()> {
        self.place(k, x);
        self.lll(delta)
    }

    /// Unimodular operations on rows `k..` so that row `k` becomes
    /// `sum x_i b_{k+i} / gcd(x)`. Rows before `k` are unchanged; GSO data is
    /// stale afterwards.
    pub fn place(&mut self, k: usize, x: &[i64]) {
        let mut x = x.to_vec();
        loop {
            let nz: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let i = *nz.iter().min_by_key(|&&i| x[i].unsigned_abs()).unwrap();
            for &j in &nz {
                if j == i {
                    continue;
                }
                let q = x[j] / x[i];
                if q != 0 {
                    // b_i <- b_i + q b_j keeps the vector and maps x_j to x_j - q x_i.
                    self.size_reduce(k + i, k + j, &Integer::from(-q));
                    x[j] -= q * x[i];
                }
            }
        }
        let p = match x.iter().position(|&v| v != 0) {
            Some(p) => p,
            None => return,
        };
        for t in (k..k + p).rev() {
            self.swap(t, t + 1);
        }
    }

    pub fn bkz(&mut self, beta: usize, delta: f64, max_tours: usize, block_budget: u64) -> Result<usize> {
        self.lll(delta)?;
        let mut tours = 0;
        for _ in 0..max_tours {
            tours += 1;
            let mut changed = false;
            for k in 0..self.n.saturating_sub(1) {
                let h = (k + beta).min(self.n);
                if h - k < 2 {
                    continue;
                }
                let (mu, r) = self.profile(k, h);
                let m = h - k;
                let bounds: Vec<f64> = (0..m).map(|i| ((m - i) as f64 / m as f64).min(1.0)).collect();
                let out = enumerate(
                    &mu,
                    &r,
                    &EnumMode::Shortest {
                        radius: 0.99,
                        pruning: Some(bounds),
                    },
                    block_budget,
                );
                if let Some((x, norm)) = out.best {
                    if norm < 0.99 {
                        self.insert(k, &x, delta)?;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(tours)
    }
}

/// Result of a reduction: the reduced form and the unimodular transform whose
/// rows are the reduced basis vectors in input coordinates.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub form: GramForm,
    pub transform: Vec<Vec<Integer>>,
}

/// `delta`-LLL reduction.
pub fn lll_reduce(g: &GramForm, delta: f64) -> Result<Reduced> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (1/4, 1)")));
    }
    let mut w = Work::new(g)?;
    w.lll(delta)?;
    Ok(Reduced {
        form: w.current_form(),
        transform: w.u.clone(),
    })
}

/// BKZ reduction with block size `beta` and linear pruning.
pub fn bkz_reduce(g: &GramForm, beta: usize, delta: f64, max_tours: usize) -> Result<Reduced> {
    let mut w = Work::new(g)?;
    w.bkz(beta, delta, max_tours, 2_000_000)?;
    Ok(Reduced {
        form: w.current_form(),
        transform: w.u.clone(),
    })
}
