//! Monte Carlo for the three walks, plus the event-skeleton coupling
//! experiments that only track which positions or pairs have fired.
//!
//! Every trial draws from its own ChaCha8 stream (seed, trial index), so
//! results do not depend on thread scheduling.

use std::sync::Arc;

use num_rational::BigRational;
use petgraph::unionfind::UnionFind;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{wreath_multiply_unchecked, GroupTable, WreathElement, WreathIndexer};
use crate::scalar::rat;
use crate::walks::WalkKind;

pub const RNG_NAME: &str = "ChaCha8";

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One draw from the step measure, realized the way the shuffle is
/// described: pick positions p, q; if they differ, transpose and randomize
/// per `kind`; otherwise randomize position p (nothing for `Sym`).
pub fn sample_draw<R: Rng + ?Sized>(n: usize, kind: WalkKind, g: &GroupTable, rng: &mut R) -> WreathElement {
    let p = rng.gen_range(0..n);
    let q = rng.gen_range(0..n);
    let mut w = WreathElement::identity(n);
    if p == q {
        if kind != WalkKind::Sym {
            w.coords[p] = rng.gen_range(0..g.order);
        }
        return w;
    }
    w.perm.swap(p, q);
    match kind {
        WalkKind::Sym => {}
        WalkKind::Independent => {
            w.coords[p] = rng.gen_range(0..g.order);
            w.coords[q] = rng.gen_range(0..g.order);
        }
        WalkKind::Paired => {
            let x = rng.gen_range(0..g.order);
            w.coords[p] = x;
            w.coords[q] = g.inv[x];
        }
    }
    w
}

/// Left-multiplies `state` by one draw.
pub fn sample_step<R: Rng + ?Sized>(state: &WreathElement, kind: WalkKind, g: &GroupTable, rng: &mut R) -> WreathElement {
    let d = sample_draw(state.n(), kind, g, rng);
    wreath_multiply_unchecked(&d, state, g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    Discrete,
    /// Poisson(t) steps for horizon t.
    Continuized,
}

impl std::str::FromStr for SimMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discrete" => Ok(SimMode::Discrete),
            "continuized" => Ok(SimMode::Continuized),
            _ => Err(Error::Unsupported(format!("unknown mode '{s}' (expected discrete or continuized)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub kind: WalkKind,
    /// Base group; ignored for `Sym`.
    pub group: Arc<GroupTable>,
    pub n: usize,
    /// Step count, or time horizon in continuized mode.
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
}

/// Final states of every trial as wreath element indices.
pub fn simulate_endpoints(cfg: &SimConfig) -> Result<Vec<usize>> {
    if cfg.trials == 0 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    if cfg.n < 2 {
        return Err(Error::NTooSmall("simulation", 2));
    }
    let g = cfg.group.as_ref();
    let g_order = if cfg.kind == WalkKind::Sym { 1 } else { g.order };
    let idx = WreathIndexer::new(g_order, cfg.n);
    Ok((0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let steps = match cfg.mode {
                SimMode::Discrete => cfg.steps,
                SimMode::Continuized if cfg.steps == 0 => 0,
                SimMode::Continuized => Poisson::new(cfg.steps as f64).unwrap().sample(&mut rng) as u64,
            };
            let mut state = WreathElement::identity(cfg.n);
            for _ in 0..steps {
                state = sample_step(&state, cfg.kind, g, &mut rng);
            }
            idx.index(&state)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Plug-in TV between the empirical law of `samples` and `reference`, with a
/// delete-one jackknife standard error.
pub fn tv_with_jackknife(samples: &[usize], reference: &[f64]) -> Estimate {
    let exact = reference;
    let nt = samples.len() as f64;
    let mut counts = vec![0u64; exact.len()];
    for &s in samples {
        counts[s] += 1;
    }
    let tv = 0.5 * counts.iter().zip(exact).map(|(&c, &p)| (c as f64 / nt - p).abs()).sum::<f64>();
    if samples.len() < 2 {
        return Estimate { value: tv, stderr: f64::NAN };
    }
    let m = nt - 1.0;
    let base: f64 = counts.iter().zip(exact).map(|(&c, &p)| (c as f64 / m - p).abs()).sum();
    // leave-one-out value only depends on the state removed
    let loo = |s: usize| {
        let (c, p) = (counts[s] as f64, exact[s]);
        0.5 * (base - (c / m - p).abs() + ((c - 1.0) / m - p).abs())
    };
    let mut mean = 0.0;
    for (s, &c) in counts.iter().enumerate() {
        if c > 0 {
            mean += c as f64 * loo(s);
        }
    }
    mean /= nt;
    let mut ss = 0.0;
    for (s, &c) in counts.iter().enumerate() {
        if c > 0 {
            ss += c as f64 * (loo(s) - mean).powi(2);
        }
    }
    Estimate { value: tv, stderr: ((nt - 1.0) / nt * ss).sqrt() }
}

/// Plug-in TV from the empirical law of the endpoints to uniform, the
/// estimate of the walk's distance to stationarity.
pub fn empirical_tv(cfg: &SimConfig, max_order: usize) -> Result<Estimate> {
    let g_order = if cfg.kind == WalkKind::Sym { 1 } else { cfg.group.order };
    let order = WreathIndexer::new(g_order, cfg.n).order();
    if order > max_order {
        return Err(Error::CapExceeded { what: "group order", value: order.to_string(), cap: max_order as u128, flag: "max-order" });
    }
    let uniform = vec![1.0 / order as f64; order];
    Ok(tv_with_jackknife(&simulate_endpoints(cfg)?, &uniform))
}

pub const MAX_COUPLING_N: usize = 10_000;
pub const MAX_COUPLING_TRIALS: u64 = 1_000_000;

fn coupling_caps(n: usize, trials: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::NTooSmall("coupling", 2));
    }
    if n > MAX_COUPLING_N {
        return Err(Error::CapExceeded { what: "coupling n", value: n.to_string(), cap: MAX_COUPLING_N as u128, flag: "n" });
    }
    if trials == 0 || trials > MAX_COUPLING_TRIALS {
        return Err(Error::CapExceeded { what: "coupling trials", value: trials.to_string(), cap: MAX_COUPLING_TRIALS as u128, flag: "trials" });
    }
    Ok(())
}

/// ½ n log n + cn.
pub fn cutoff_time(n: usize, c: f64) -> f64 {
    let nf = n as f64;
    0.5 * nf * nf.ln() + c * nf
}

/// Connectivity time T of the pair-event graph and the first position event
/// T* after it, for one trial of the continuized paired walk. Events come at
/// total rate 1; each is a uniform pair with probability (n-1)/n, otherwise
/// a uniform position.
pub fn coupling_trial<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (f64, f64) {
    let mut uf = UnionFind::<usize>::new(n);
    let mut components = n;
    let mut t = 0.0;
    let pair_p = (n - 1) as f64 / n as f64;
    while components > 1 {
        let dt: f64 = Exp1.sample(rng);
        t += dt;
        if rng.gen::<f64>() < pair_p {
            let p = rng.gen_range(0..n);
            let mut q = rng.gen_range(0..n - 1);
            if q >= p {
                q += 1;
            }
            if uf.union(p, q) {
                components -= 1;
            }
        }
    }
    let big_t = t;
    loop {
        let dt: f64 = Exp1.sample(rng);
        t += dt;
        if rng.gen::<f64>() >= pair_p {
            return (big_t, t);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingRow {
    pub c: f64,
    pub threshold: f64,
    pub tail: Estimate,
    pub limit: f64,
}

#[derive(Clone, Debug)]
pub struct CouplingReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub t: Vec<f64>,
    pub t_star: Vec<f64>,
    /// P{T > ½ n log n + cn} per c.
    pub rows_t: Vec<CouplingRow>,
    /// P{T* > ½ n log n + cn} per c.
    pub rows_t_star: Vec<CouplingRow>,
}

fn tail(samples: &[f64], threshold: f64) -> Estimate {
    let nt = samples.len() as f64;
    let p = samples.iter().filter(|&&x| x > threshold).count() as f64 / nt;
    Estimate { value: p, stderr: (p * (1.0 - p) / nt).sqrt() }
}

/// Limit of P{T > ½ n log n + cn}.
pub fn connectivity_limit(c: f64) -> f64 {
    1.0 - (-(-2.0 * c).exp()).exp()
}

/// Limit of P{T* > ½ n log n + cn}: T* - T is exponential with mean n.
pub fn t_star_limit(c: f64) -> f64 {
    // ∫_0^∞ e^{-u} (1 - exp(-e^{-2(c-u)})) du by composite Simpson; the
    // integrand is below e^{-u} so [0, 60] suffices.
    let f = |u: f64| (-u).exp() * connectivity_limit(c - u);
    let (a, b, m) = (0.0, 60.0, 60_000);
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn coupling_experiment(n: usize, trials: u64, c_values: &[f64], seed: u64) -> Result<CouplingReport> {
    coupling_caps(n, trials)?;
    let pairs: Vec<(f64, f64)> = (0..trials).into_par_iter().map(|i| coupling_trial(n, &mut trial_rng(seed, i))).collect();
    let (t, t_star): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let rows = |xs: &[f64], limit: fn(f64) -> f64| {
        c_values
            .iter()
            .map(|&c| {
                let th = cutoff_time(n, c);
                CouplingRow { c, threshold: th, tail: tail(xs, th), limit: limit(c) }
            })
            .collect()
    };
    Ok(CouplingReport { n, trials, seed, rows_t: rows(&t, connectivity_limit), rows_t_star: rows(&t_star, t_star_limit), t, t_star })
}

/// Chance that a given position is randomized in one step of the
/// independent walk: it is p or q.
pub fn hit_probability(n: usize) -> BigRational {
    let n = n as i64;
    rat(2 * n - 1, n * n)
}

/// Steps until every position of the independent walk has been randomized
/// at least once.
pub fn discrete_coupling_time<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    let mut hit = vec![false; n];
    let mut left = n;
    let mut steps = 0;
    while left > 0 {
        steps += 1;
        let p = rng.gen_range(0..n);
        let q = rng.gen_range(0..n);
        for x in [p, q] {
            if !hit[x] {
                hit[x] = true;
                left -= 1;
            }
        }
    }
    steps
}

/// Empirical P{T > k} for each k.
pub fn discrete_coupling_tail(n: usize, ks: &[u64], trials: u64, seed: u64) -> Result<Vec<Estimate>> {
    coupling_caps(n, trials)?;
    let times: Vec<f64> = (0..trials).into_par_iter().map(|i| discrete_coupling_time(n, &mut trial_rng(seed, i)) as f64).collect();
    Ok(ks.iter().map(|&k| tail(&times, k as f64)).collect())
}

/// n(1 - 1/n)^{2k}, the union bound on the same tail.
pub fn discrete_coupling_bound(n: usize, k: u64) -> f64 {
    let nf = n as f64;
    nf * (2.0 * k as f64 * (1.0 - 1.0 / nf).ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u32> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(trial_rng(7, 3).gen::<u64>(), trial_rng(7, 4).gen::<u64>());
    }

    #[test]
    fn zero_steps_is_point_mass() {
        let g = Arc::new(build_group("Z:2").unwrap());
        let cfg = SimConfig { kind: WalkKind::Independent, group: g, n: 2, steps: 0, trials: 100, seed: 1, mode: SimMode::Discrete };
        let e = empirical_tv(&cfg, 5000).unwrap();
        assert!((e.value - 0.875).abs() < 1e-12);
    }

    #[test]
    fn coupling_order() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..200 {
            let (t, ts) = coupling_trial(30, &mut rng);
            assert!(ts >= t && t >= 0.0);
        }
    }

    #[test]
    fn limits() {
        assert!((connectivity_limit(0.0) - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!((connectivity_limit(1.0) - 0.126_576).abs() < 1e-5);
        for c in [1.0, 2.0, 3.0] {
            let l = t_star_limit(c);
            assert!(l > connectivity_limit(c) && l <= 2.0 * (-c).exp());
        }
    }

    #[test]
    fn hit_probability_by_enumeration() {
        for n in 1..8usize {
            let hits = (0..n * n).filter(|i| i / n == 0 || i % n == 0).count();
            assert_eq!(hit_probability(n), rat(hits as i64, (n * n) as i64));
        }
        let mut rng = trial_rng(0, 0);
        assert!(discrete_coupling_time(1, &mut rng) == 1);
    }

    #[test]
    fn jackknife_matches_direct() {
        let samples = vec![0, 0, 1, 2, 2, 2, 3];
        let exact = vec![0.25; 4];
        let e = tv_with_jackknife(&samples, &exact);
        let n = samples.len();
        let thetas: Vec<f64> = (0..n)
            .map(|i| {
                let rest: Vec<usize> = samples.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &s)| s).collect();
                tv_with_jackknife(&rest, &exact).value
            })
            .collect();
        let mean = thetas.iter().sum::<f64>() / n as f64;
        let se = ((n - 1) as f64 / n as f64 * thetas.iter().map(|t| (t - mean).powi(2)).sum::<f64>()).sqrt();
        assert!((e.stderr - se).abs() < 1e-12);
    }
}
