//! Plancherel-weighted power sums over the partitions of m,
//!
//!   S(e) = Σ_{λ ⊢ m} d_λ² · |x0 + x1·c(λ)|^e,
//!
//! where c(λ) is the content sum (so the transposition ratio is
//! r(λ) = 2c(λ)/(m(m-1))). Every walk eigenvalue in this crate is affine in
//! c(λ), so ℓ² sums for large n reduce to these.
//!
//! p(m) is about 4·10¹² at m = 200, so the partitions are searched row by
//! row and a subtree is dropped once an upper bound on its total falls below
//! a floor. Only partitions with at least as many columns as rows are
//! visited: the conjugate has the same degree and content -c(λ), so both are
//! accounted for at once. Dropped mass is summed and returned, so every
//! result is a certified interval.
//!
//! Subtree bound: a partition with top rows α (|α| = a) and remaining rows μ
//! satisfies d_λ ≤ C(m, a)·d_α·d_μ, and Σ_μ d_μ² ≤ (m-a)!. The content range
//! of the completions comes from the greedy row and column fillings.

use crate::error::{Error, Result};
use crate::logsum::LogSum;
use crate::partitions::ln_dim;

#[derive(Clone, Debug)]
pub struct PowerSumQuery<'a> {
    pub m: usize,
    pub x0: f64,
    pub x1: f64,
    pub exps: &'a [u64],
    /// Skip λ = [m] (its conjugate [1^m] still counts).
    pub exclude_trivial: bool,
    /// Absolute ln floors per exponent below which a subtree may be dropped.
    pub floors: Option<&'a [f64]>,
    /// Subtrees below `rel_tol` × (largest term seen) may also be dropped;
    /// 0 disables pruning entirely.
    pub rel_tol: f64,
    pub max_nodes: u64,
}

pub const DEFAULT_REL_TOL: f64 = 1e-30;
pub const DEFAULT_MAX_NODES: u64 = 50_000_000;

impl<'a> PowerSumQuery<'a> {
    pub fn new(m: usize, x0: f64, x1: f64, exps: &'a [u64]) -> Self {
        PowerSumQuery { m, x0, x1, exps, exclude_trivial: false, floors: None, rel_tol: DEFAULT_REL_TOL, max_nodes: DEFAULT_MAX_NODES }
    }

    pub fn exact(mut self) -> Self {
        self.rel_tol = 0.0;
        self
    }
}

#[derive(Clone, Debug)]
pub struct PowerSums {
    /// ln S(e) per exponent.
    pub ln_sum: Vec<f64>,
    /// ln of the total bound on dropped subtrees (−inf when none).
    pub ln_dropped: Vec<f64>,
    pub nodes: u64,
    pub leaves: u64,
}

struct Search<'q, 'a> {
    q: &'q PowerSumQuery<'a>,
    lf: Vec<f64>,
    /// exponents > 0 and their positions in q.exps
    live: Vec<(usize, f64)>,
    sums: Vec<LogSum>,
    dropped: Vec<LogSum>,
    best: Vec<f64>,
    nodes: u64,
    leaves: u64,
}

pub fn power_sums(q: &PowerSumQuery) -> Result<PowerSums> {
    let m = q.m;
    let lf: Vec<f64> = std::iter::once(0.0)
        .chain((1..=m).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    let live: Vec<(usize, f64)> = q.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as f64)).collect();
    let ne = q.exps.len();
    let mut s = Search {
        q,
        lf,
        live,
        sums: vec![LogSum::default(); ne],
        dropped: vec![LogSum::default(); ne],
        best: vec![f64::NEG_INFINITY; ne],
        nodes: 0,
        leaves: 0,
    };
    // e = 0 counts Σ d² = m!
    for (i, &e) in q.exps.iter().enumerate() {
        if e == 0 {
            let mf = s.lf[m];
            if q.exclude_trivial {
                if mf > 0.0 {
                    s.sums[i].push(mf + (-(-mf).exp()).ln_1p());
                }
            } else {
                s.sums[i].push(mf);
            }
        }
    }
    if !s.live.is_empty() {
        if m == 0 {
            if !q.exclude_trivial {
                s.leaf(&[], 0);
            }
        } else {
            let lo = (1..=m).find(|&l| l * l >= m).unwrap();
            let mut rows = Vec::with_capacity(m);
            for first in (lo..=m).rev() {
                rows.push(first);
                s.node(&mut rows, first, first as i64 * (first as i64 - 1) / 2)?;
                rows.pop();
            }
        }
    }
    Ok(PowerSums {
        ln_sum: s.sums.iter().map(LogSum::ln_value).collect(),
        ln_dropped: s.dropped.iter().map(LogSum::ln_value).collect(),
        nodes: s.nodes,
        leaves: s.leaves,
    })
}

/// Content of the shape filled greedily with rows of length `len`.
fn greedy_content(cells: usize, len: usize) -> i64 {
    let (q, rem) = (cells / len, cells % len);
    let l = len as i64;
    let mut c = 0;
    for r in 0..q as i64 {
        c += l * (l - 1) / 2 - r * l;
    }
    let rem = rem as i64;
    c + rem * (rem - 1) / 2 - q as i64 * rem
}

impl Search<'_, '_> {
    fn ln_abs_x(&self, c: i64) -> f64 {
        (self.q.x0 + self.q.x1 * c as f64).abs().ln()
    }

    fn floor(&self, i: usize) -> f64 {
        let rel = if self.q.rel_tol > 0.0 { self.best[i] + self.q.rel_tol.ln() } else { f64::NEG_INFINITY };
        match self.q.floors {
            Some(f) => rel.max(f[i]),
            None => rel,
        }
    }

    fn leaf(&mut self, rows: &[usize], content: i64) {
        self.leaves += 1;
        let m = self.q.m;
        let ld2 = 2.0 * ln_dim(rows);
        let first = rows.first().copied().unwrap_or(0);
        let paired = first > rows.len();
        let is_trivial = rows.len() == 1 && first == m;
        let own = !(self.q.exclude_trivial && is_trivial);
        let (lp, ln) = (self.ln_abs_x(content), self.ln_abs_x(-content));
        for &(i, e) in &self.live {
            if own {
                let t = ld2 + e * lp;
                self.sums[i].push(t);
                self.best[i] = self.best[i].max(t);
            }
            if paired {
                let t = ld2 + e * ln;
                self.sums[i].push(t);
                self.best[i] = self.best[i].max(t);
            }
        }
    }

    fn node(&mut self, rows: &mut Vec<usize>, cells: usize, content: i64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.q.max_nodes {
            return Err(Error::CapExceeded {
                what: "partition search nodes",
                value: format!("> {}", self.q.max_nodes),
                cap: self.q.max_nodes as u128,
                flag: "max-nodes",
            });
        }
        let m = self.q.m;
        let b = m - cells;
        if b == 0 {
            self.leaf(rows, content);
            return Ok(());
        }
        let i = rows.len();
        let last = *rows.last().unwrap();
        let height = rows[0] - i;
        debug_assert!(b <= last * height);

        if self.q.rel_tol > 0.0 || self.q.floors.is_some() {
            let shift = -(i as i64) * b as i64;
            let cmax = content + greedy_content(b, last) + shift;
            let cmin = content - greedy_content(b, height) + shift;
            let lx = [cmax, cmin, -cmax, -cmin].iter().map(|&c| self.ln_abs_x(c)).fold(f64::NEG_INFINITY, f64::max);
            let ln_binom = self.lf[m] - self.lf[cells] - self.lf[b];
            let base = 2.0 * ln_binom + 2.0 * ln_dim(rows) + self.lf[b] + std::f64::consts::LN_2;
            let prune = self.live.iter().all(|&(idx, e)| base + e * lx < self.floor(idx));
            if prune {
                for &(idx, e) in &self.live {
                    self.dropped[idx].push(base + e * lx);
                }
                return Ok(());
            }
        }

        for r in (1..=last.min(b)).rev() {
            if b - r > r * (height - 1) {
                continue;
            }
            let c = r as i64 * (r as i64 - 1) / 2 - i as i64 * r as i64;
            rows.push(r);
            self.node(rows, cells + r, content + c)?;
            rows.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{partitions, Partition};

    fn brute(m: usize, x0: f64, x1: f64, e: u64, skip_trivial: bool) -> f64 {
        partitions(m)
            .filter(|l| !(skip_trivial && *l == Partition::row(m)))
            .map(|l| {
                let d = ln_dim(l.parts()).exp();
                d * d * (x0 + x1 * l.content() as f64).abs().powi(e as i32)
            })
            .sum()
    }

    #[test]
    fn exact_mode_matches_enumeration() {
        for m in 0..=14 {
            let exps = [0u64, 1, 2, 7, 20];
            for (x0, x1) in [(0.3, 0.01), (1.0 / m.max(1) as f64, 2.0 / (m * m).max(1) as f64), (-0.2, 0.05)] {
                for skip in [false, true] {
                    if skip && m == 0 {
                        continue;
                    }
                    let mut q = PowerSumQuery::new(m, x0, x1, &exps).exact();
                    q.exclude_trivial = skip;
                    let got = power_sums(&q).unwrap();
                    for (i, &e) in exps.iter().enumerate() {
                        let want = brute(m, x0, x1, e, skip);
                        let v = got.ln_sum[i].exp();
                        assert!((v - want).abs() <= 1e-10 * want.max(1e-300), "m={m} e={e} {v} vs {want}");
                        assert_eq!(got.ln_dropped[i], f64::NEG_INFINITY);
                    }
                }
            }
        }
    }

    #[test]
    fn pruned_mode_is_certified() {
        let m = 40;
        let exps = [40u64, 150, 400];
        let (x0, x1) = (1.0 / m as f64, 2.0 / (m * m) as f64);
        let exact = power_sums(&PowerSumQuery::new(m, x0, x1, &exps).exact()).unwrap();
        let mut q = PowerSumQuery::new(m, x0, x1, &exps);
        q.rel_tol = 1e-12;
        let pruned = power_sums(&q).unwrap();
        assert!(pruned.nodes < exact.nodes);
        for i in 0..exps.len() {
            let (lo, hi) = (pruned.ln_sum[i].exp(), exact.ln_sum[i].exp());
            let slack = pruned.ln_dropped[i].exp();
            assert!(lo <= hi * (1.0 + 1e-12) && hi <= (lo + slack) * (1.0 + 1e-12), "e={} {lo} {hi} {slack}", exps[i]);
            assert!(slack <= 1e-6 * hi);
        }
    }

    #[test]
    fn greedy_shapes() {
        assert_eq!(greedy_content(5, 5), 10);
        assert_eq!(greedy_content(5, 3), Partition::new(vec![3, 2]).unwrap().content());
        assert_eq!(-greedy_content(4, 2), Partition::new(vec![2, 2]).unwrap().content());
    }

    #[test]
    fn handles_two_hundred() {
        let m = 200;
        let k = 530u64;
        let exps = [2 * k];
        let q = PowerSumQuery::new(m, 1.0 / m as f64, 2.0 / (m * m) as f64, &exps);
        let r = power_sums(&PowerSumQuery { exclude_trivial: true, ..q }).unwrap();
        assert!(r.ln_sum[0].is_finite());
        assert!(r.ln_dropped[0] < r.ln_sum[0] - 50.0);
    }
}
