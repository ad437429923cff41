//! Schnorr–Euchner enumeration over a floating-point GSO profile.
//!
//! Only one vector of each `±v` pair is visited: the last nonzero coordinate
//! is positive.

use rayon::prelude::*;

pub enum EnumMode {
    /// Shortest nonzero vector with squared norm below `radius`. The optional
    /// pruning vector scales the bound at each level (`1` = no pruning).
    Shortest { radius: f64, pruning: Option<Vec<f64>> },
    /// Every nonzero vector with squared norm at most `radius`.
    All { radius: f64 },
}

#[derive(Clone, Debug, Default)]
pub struct EnumOutcome {
    pub best: Option<(Vec<i64>, f64)>,
    pub all: Vec<(Vec<i64>, f64)>,
    pub nodes: u64,
    pub exhausted: bool,
}

struct Ctx<'a> {
    mu: &'a [Vec<f64>],
    r: &'a [f64],
    factors: Vec<f64>,
    radius: f64,
    collect: bool,
    shrink: bool,
    x: Vec<i64>,
    nodes: u64,
    budget: u64,
    out: EnumOutcome,
}

const REL_GUARD: f64 = 1e-12;

impl Ctx<'_> {
    fn bound(&self, i: usize) -> f64 {
        self.radius * self.factors[i] * (1.0 + REL_GUARD)
    }

    fn center(&self, i: usize) -> f64 {
        let mut c = 0.0;
        for j in i + 1..self.x.len() {
            c -= self.x[j] as f64 * self.mu[j][i];
        }
        c
    }

    fn visit(&mut self, i: usize, rho_above: f64, top_zero: bool) {
        if self.out.exhausted {
            return;
        }
        let c = if top_zero { 0.0 } else { self.center(i) };
        let v0 = c.round() as i64;
        let up_first = c >= v0 as f64;
        let mut step: i64 = 0;
        loop {
            let v = if top_zero {
                step
            } else if step == 0 {
                v0
            } else {
                let k = (step + 1) / 2;
                let odd = step % 2 == 1;
                if odd == up_first {
                    v0 + k
                } else {
                    v0 - k
                }
            };
            step += 1;
            let d = v as f64 - c;
            let rho = rho_above + d * d * self.r[i];
            if rho > self.bound(i) {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.out.exhausted = true;
                return;
            }
            self.x[i] = v;
            let still_zero = top_zero && v == 0;
            if i == 0 {
                if !still_zero {
                    self.leaf(rho);
                }
            } else {
                self.visit(i - 1, rho, still_zero);
                if self.out.exhausted {
                    self.x[i] = 0;
                    return;
                }
            }
            self.x[i] = 0;
        }
    }

    fn leaf(&mut self, rho: f64) {
        if self.collect {
            self.out.all.push((self.x.clone(), rho));
        }
        let better = match &self.out.best {
            None => true,
            Some((_, b)) => rho < *b,
        };
        if better {
            self.out.best = Some((self.x.clone(), rho));
            if self.shrink && rho > 0.0 {
                self.radius = rho;
            }
        }
    }
}

/// Enumerates lattice vectors `sum x_i b_i` whose squared norm, computed from
/// the GSO coefficients `mu` (lower triangular) and squared GSO lengths `r`,
/// is within the mode's radius. Stops after `budget` nodes.
pub fn enumerate(mu: &[Vec<f64>], r: &[f64], mode: &EnumMode, budget: u64) -> EnumOutcome {
    let m = r.len();
    if m == 0 {
        return EnumOutcome::default();
    }
    let (radius, factors, collect, shrink) = match mode {
        EnumMode::Shortest { radius, pruning } => (
            *radius,
            pruning.clone().unwrap_or_else(|| vec![1.0; m]),
            false,
            true,
        ),
        EnumMode::All { radius } => (*radius, vec![1.0; m], true, false),
    };
    let make = |budget: u64, x: Vec<i64>| Ctx {
        mu,
        r,
        factors: factors.clone(),
        radius,
        collect,
        shrink,
        x,
        nodes: 0,
        budget,
        out: EnumOutcome::default(),
    };

    if m < 12 {
        let mut ctx = make(budget, vec![0; m]);
        ctx.visit(m - 1, 0.0, true);
        let mut out = ctx.out;
        out.nodes = ctx.nodes;
        return out;
    }

    // Expand the top levels breadth-first, then search subtrees in parallel.
    let mut prefixes: Vec<(Vec<i64>, f64, bool)> = vec![(vec![0; m], 0.0, true)];
    let mut level = m;
    let mut seed_nodes = 0u64;
    while prefixes.len() < 64 && level > 6 {
        level -= 1;
        let mut next = Vec::new();
        for (x, rho, top_zero) in prefixes {
            let mut ctx = make(u64::MAX, x.clone());
            let c = if top_zero { 0.0 } else { ctx.center(level) };
            let v0 = c.round() as i64;
            let bound = ctx.bound(level);
            let mut vals: Vec<(i64, f64)> = Vec::new();
            if top_zero {
                let mut v = 0i64;
                loop {
                    let d = v as f64;
                    let rr = rho + d * d * r[level];
                    if rr > bound {
                        break;
                    }
                    vals.push((v, rr));
                    v += 1;
                }
            } else {
                for dir in [1i64, -1] {
                    let mut v = if dir == 1 { v0 } else { v0 - 1 };
                    loop {
                        let d = v as f64 - c;
                        let rr = rho + d * d * r[level];
                        if rr > bound {
                            break;
                        }
                        vals.push((v, rr));
                        v += dir;
                    }
                }
            }
            vals.sort_by_key(|a| a.0);
            for (v, rr) in vals {
                seed_nodes += 1;
                ctx.x[level] = v;
                next.push((ctx.x.clone(), rr, top_zero && v == 0));
            }
        }
        prefixes = next;
    }
    let per = (budget / prefixes.len().max(1) as u64).max(1);
    let parts: Vec<(EnumOutcome, u64)> = prefixes
        .into_par_iter()
        .map(|(x, rho, top_zero)| {
            let mut ctx = make(per, x);
            ctx.visit(level - 1, rho, top_zero);
            (ctx.out, ctx.nodes)
        })
        .collect();
    let mut out = EnumOutcome {
        nodes: seed_nodes,
        ..Default::default()
    };
    for (p, nodes) in parts {
        out.nodes += nodes;
        out.exhausted |= p.exhausted;
        out.all.extend(p.all);
        if let Some((x, rho)) = p.best {
            let better = match &out.best {
                None => true,
                Some((_, b)) => rho < *b,
            };
            if better {
                out.best = Some((x, rho));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(m: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; m]; m];
        for (i, row) in mu.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        (mu, vec![1.0; m])
    }

    #[test]
    fn unit_ball_of_identity() {
        for m in [3, 15] {
            let (mu, r) = identity(m);
            let out = enumerate(&mu, &r, &EnumMode::All { radius: 1.0 }, 1_000_000);
            assert_eq!(out.all.len(), m);
            assert!(!out.exhausted);
        }
    }

    #[test]
    fn radius_two_of_identity_dim_three() {
        let (mu, r) = identity(3);
        let out = enumerate(&mu, &r, &EnumMode::All { radius: 2.0 }, 1_000_000);
        // 3 unit vectors plus 6 of the 12 (±1,±1,0) patterns.
        assert_eq!(out.all.len(), 9);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let (mu, r) = identity(20);
        let out = enumerate(&mu, &r, &EnumMode::All { radius: 3.0 }, 50);
        assert!(out.exhausted);
    }
}
