//! The acceptance suite: eleven end-to-end checks, each returning pass/fail
//! with a one-line detail. Shared by the `acceptance` test target and the
//! CLI's `selftest`.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bounds::{
    independent_slice_extreme, l2n_sq_collapsed_ln, l2n_sq_spectral, tv_lower_chebyshev_sym,
};
use crate::classes::{brute_force_class_count, class_count};
use crate::error::Result;
use crate::group::{build_group, build_wreath_table, GroupTable, DEFAULT_MAX_ORDER};
use crate::oracle::{build_transition_matrix, convolution_power, convolution_powers, exact_distances, procedural_measure, trace_moment_check};
use crate::partitions::{
    conjugate_partition, cycle_class_size, dim_partition, enumerate_partitions, factorial, hook_length_dim, mn_character,
    r_of_partition, Partition,
};
use crate::report::{simulate_table, SimRow};
use crate::reps::{compositions, enumerate_labels, DEFAULT_MAX_LABELS};
use crate::scalar::{rat, ratio_to_f64};
use crate::sim::{coupling_experiment, empirical_tv, SimConfig, SimMode};
use crate::thresholds::{mixing_threshold, table, Metric};
use crate::walks::{build_measure, eigenvalue, fourier_class_function, return_probability, spectrum, spectrum_of, spectrum_total, WalkKind};

pub const SEED: u64 = 20_240_917;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] criterion {:>2} {} ({:.2}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

type Check = fn() -> Result<(bool, String)>;

pub const CRITERIA: [(u32, &str, Check); 11] = [
    (1, "trace moments vs spectrum", trace_moments),
    (2, "fourier transform vs closed form", fourier),
    (3, "convolution vs spectral l2", convolution),
    (4, "counting identities", counting),
    (5, "partition layer", partition_layer),
    (6, "collapsed sum", collapsed),
    (7, "cutoff envelope", envelope),
    (8, "lower-bound witnesses", lower_bounds),
    (9, "coupling graph experiment", coupling),
    (10, "monte carlo tv", monte_carlo),
    (11, "threshold tables", thresholds),
];

pub fn run(id: u32) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run(c.0).unwrap()).collect()
}

fn group(spec: &str) -> Result<Arc<GroupTable>> {
    Ok(Arc::new(build_group(spec)?))
}

const SMALL: [(&str, usize); 4] = [("Z:2", 2), ("Z:2", 3), ("Z:3", 2), ("S:3", 2)];
const G_WALKS: [WalkKind; 2] = [WalkKind::Independent, WalkKind::Paired];

fn trace_moments() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut worst = BigRational::zero();
    let mut measure_ok = true;
    let mut runs = 0;
    for (spec, n) in SMALL {
        let g = group(spec)?;
        let table = build_wreath_table(g.clone(), n, DEFAULT_MAX_ORDER)?;
        for kind in G_WALKS {
            let p: Vec<BigRational> = procedural_measure(&table, kind)?;
            let walk = build_measure(kind, g.clone(), n)?;
            measure_ok &= walk.density_on(&table)? == p;
            let m = build_transition_matrix(&table, &p, DEFAULT_MAX_ORDER)?;
            let lines = spectrum_of(&walk, DEFAULT_MAX_LABELS)?;
            let spec_pairs: Vec<(BigRational, BigUint)> = lines.iter().map(|l| (l.value.clone(), l.multiplicity.clone())).collect();
            let r = trace_moment_check(&m, &spec_pairs, 6);
            if r.max_deviation > worst {
                worst = r.max_deviation;
            }
            runs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst.is_zero() && measure_ok && secs < 60.0;
    Ok((ok, format!("{runs} (group, walk) pairs, k=0..6, max deviation {worst}, step laws agree: {measure_ok}, {secs:.1}s of 60s")))
}

fn fourier() -> Result<(bool, String)> {
    let mut labels = 0;
    let mut worst: f64 = 0.0;
    let mut exact_mismatch = 0;
    for (spec, n) in SMALL {
        let g = group(spec)?;
        let ct = g.char_table()?;
        for kind in G_WALKS {
            let walk = build_measure(kind, g.clone(), n)?;
            for label in walk.labels(DEFAULT_MAX_LABELS)? {
                let ev = eigenvalue(&label, &walk);
                if let Some(chars) = ct.to_scalar::<BigRational>() {
                    let v = fourier_class_function(&walk, &label, &chars)?;
                    if v.re != ev || !v.im.is_zero() {
                        exact_mismatch += 1;
                    }
                } else {
                    let chars = ct.to_scalar::<f64>().unwrap();
                    let v = fourier_class_function(&walk, &label, &chars)?;
                    worst = worst.max((v.re - ratio_to_f64(&ev)).abs()).max(v.im.abs());
                }
                labels += 1;
            }
        }
    }
    Ok((exact_mismatch == 0 && worst <= 1e-9, format!("{labels} labels, exact mismatches {exact_mismatch}, float max |Δ| {worst:.1e}")))
}

fn convolution() -> Result<(bool, String)> {
    let g = group("Z:2")?;
    let table = build_wreath_table(g.clone(), 3, DEFAULT_MAX_ORDER)?;
    let mut bad = Vec::new();
    for kind in G_WALKS {
        let p: Vec<BigRational> = procedural_measure(&table, kind)?;
        let dists = convolution_powers(&p, 20, &table)?;
        let lines = spectrum(g.clone(), 3, kind, DEFAULT_MAX_LABELS)?;
        for k in 1..=20u32 {
            let d = exact_distances(&dists[k as usize]);
            if d.l2_normalized_sq != l2n_sq_spectral::<BigRational>(&lines, k) {
                bad.push(format!("{kind} l2 k={k}"));
            }
            if return_probability::<BigRational>(&lines, k) != dists[k as usize][0] {
                bad.push(format!("{kind} return k={k}"));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "Z2 wr S3, both walks, k=1..20: all 80 exact equalities hold".into() } else { format!("mismatches: {}", bad.join(", ")) }))
}

fn counting() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut cases = 0;
    for (spec, nmax) in [("Z:2", 6usize), ("Z:3", 5), ("S:3", 4)] {
        let g = group(spec)?;
        for n in 1..=nmax {
            let order = BigUint::from(g.order).pow(n as u32) * factorial(n);
            let labels = enumerate_labels(&g, n, DEFAULT_MAX_LABELS)?.len();
            let classes = class_count(&g, n);
            let brute = brute_force_class_count(&g, n, 50_000)?;
            if BigUint::from(labels) != classes || BigUint::from(brute) != classes {
                bad.push(format!("{spec} n={n}: labels {labels}, classes {classes}, brute force {brute}"));
            }
            if n >= 2 {
                for kind in G_WALKS {
                    let total = spectrum_total(&spectrum(g.clone(), n, kind, DEFAULT_MAX_LABELS)?);
                    if total != order {
                        bad.push(format!("{spec} n={n} {kind}: multiplicities sum to {total}, order {order}"));
                    }
                }
            }
            cases += 1;
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{cases} (G, n) cases agree") } else { bad.join("; ") }))
}

fn partition_layer() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 1..=12usize {
        let parts = enumerate_partitions(n);
        let sum: BigUint = parts.iter().map(|l| dim_partition(l).pow(2)).sum();
        if sum != factorial(n) {
            bad.push(format!("sum d^2 at n={n}"));
        }
        for l in &parts {
            let c = conjugate_partition(l);
            if dim_partition(l) != hook_length_dim(l) {
                bad.push(format!("det vs hook at {l}"));
            }
            if dim_partition(&c) != dim_partition(l) {
                bad.push(format!("d(conjugate) at {l}"));
            }
            if n >= 2 && r_of_partition(&c)? != -r_of_partition(l)? {
                bad.push(format!("r(conjugate) at {l}"));
            }
        }
    }
    for n in 1..=6usize {
        let parts = enumerate_partitions(n);
        let nf = factorial(n);
        for a in &parts {
            for b in &parts {
                let mut s = num_bigint::BigInt::zero();
                for mu in &parts {
                    let chi = mn_character(a, mu.parts())? * mn_character(b, mu.parts())?;
                    s += num_bigint::BigInt::from(cycle_class_size(mu)) * chi;
                }
                let want = if a == b { nf.clone().into() } else { num_bigint::BigInt::zero() };
                if s != want {
                    bad.push(format!("orthogonality {a} x {b}"));
                }
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "n<=12 dims, hooks, conjugates; n<=6 character orthogonality".into() } else { bad.join("; ") }))
}

/// Σ over compositions of m into the nontrivial slots and partitions per
/// slot of (multinomial)² · Π d_j^{2 n_j} · Π d_λ².
fn collapsed_multiplicity(dims: &[u64], m: usize) -> BigUint {
    let rest = &dims[1..];
    let mut total = BigUint::zero();
    for comp in compositions(m, rest.len()) {
        let mut multi = factorial(m);
        let mut w = BigUint::one();
        for (&nj, &d) in comp.iter().zip(rest) {
            multi /= factorial(nj);
            let sq: BigUint = enumerate_partitions(nj).iter().map(|l| dim_partition(l).pow(2)).sum();
            w *= BigUint::from(d).pow(2 * nj as u32) * sq;
        }
        total += &multi * &multi * w;
    }
    total
}

fn collapsed() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (spec, nmax) in [("Z:2", 6usize), ("Z:3", 5)] {
        let g = group(spec)?;
        for n in 2..=nmax {
            let lines = spectrum(g.clone(), n, WalkKind::Independent, DEFAULT_MAX_LABELS)?;
            let ks: Vec<u64> = (0..=20).collect();
            let col = l2n_sq_collapsed_ln(g.order, n, &ks)?;
            for &k in &ks {
                let exact = ratio_to_f64(&l2n_sq_spectral::<BigRational>(&lines, k as u32));
                let rel = (col[k as usize].value() - exact).abs() / exact.max(1e-300);
                worst = worst.max(rel);
            }
        }
    }
    let mut bad = Vec::new();
    for spec in ["Z:2", "Z:3", "Z:4", "S:3", "S:4"] {
        let g = group(spec)?;
        let dims = g.irrep_dims()?;
        for n in 1..=8usize {
            for n1 in 0..=n {
                let m = n - n1;
                let want = BigUint::from(g.order - 1).pow(m as u32) * factorial(m);
                if collapsed_multiplicity(&dims, m) != want {
                    bad.push(format!("{spec} n={n} n1={n1}"));
                }
            }
        }
    }
    let ok = worst <= 1e-9 && bad.is_empty();
    Ok((ok, format!("max relative error {worst:.1e} over Z2 n<=6, Z3 n<=5, k<=20; multiplicity identity failures: {}", bad.len())))
}

fn envelope() -> Result<(bool, String)> {
    let start = Instant::now();
    // extreme |eigenvalue| per slot-0 size, first confirmed by enumeration
    for n in 2..=16usize {
        let nn = rat(1, (n * n) as i64);
        for n1 in 1..=n {
            let mut best = BigRational::zero();
            for l in enumerate_partitions(n1) {
                if n1 == n && l == Partition::row(n) {
                    continue;
                }
                let r = if n1 >= 2 { r_of_partition(&l)? } else { BigRational::zero() };
                let x = (rat(n1 as i64, 1) + rat((n1 * (n1 - 1)) as i64, 1) * r) * &nn;
                best = best.max(x.abs());
            }
            if best != independent_slice_extreme(n, n1) {
                return Ok((false, format!("slice extreme mismatch at n={n}, n1={n1}")));
            }
        }
    }
    for n in 2..=200usize {
        let env = rat((n as i64 - 1).pow(2), (n as i64).pow(2));
        if let Some(n1) = (0..=n).find(|&n1| independent_slice_extreme(n, n1) > env) {
            return Ok((false, format!("eigenvalue above (1-1/n)^2 at n={n}, n1={n1}")));
        }
    }
    let cs = [0.5, 1.0, 2.0];
    let mut worst: f64 = f64::NEG_INFINITY;
    for n in [25usize, 50, 100, 200] {
        for g_order in [2usize, 6, 720] {
            let nf = n as f64;
            let k0 = (0.5 * nf * nf.ln() + 0.25 * nf * ((g_order - 1) as f64).ln()).ceil() as u64;
            let mut ks = vec![k0];
            ks.extend(cs.iter().map(|c| k0 + (c * nf).ceil() as u64));
            let l2 = l2n_sq_collapsed_ln(g_order, n, &ks)?;
            for (i, &c) in cs.iter().enumerate() {
                // ln of upper(k0 + cn) / (e^{-4c} lower(k0))
                let gap = l2[i + 1].ln_upper() - (-4.0 * c + l2[0].ln);
                worst = worst.max(gap);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-6f64.ln_1p() && secs < 120.0;
    Ok((ok, format!("eigenvalues within (1-1/n)^2 for n<=200; worst ratio l2(k0+cn)/(e^-4c l2(k0)) = {:.6}; {secs:.1}s of 120s", worst.exp())))
}

fn lower_bounds() -> Result<(bool, String)> {
    let g = group("Z:2")?;
    let n = 3i64;
    let mut bad = Vec::new();
    for kind in G_WALKS {
        let lines = spectrum(g.clone(), 3, kind, DEFAULT_MAX_LABELS)?;
        for k in 0..=30u32 {
            let term = rat(n * n * (g.order as i64 - 1), 1) * rat(n - 1, n).pow(4 * k as i32);
            if term > l2n_sq_spectral::<BigRational>(&lines, k) {
                bad.push(format!("{kind} k={k}"));
            }
        }
    }
    let mut cheb = Vec::new();
    for c in [1.0f64, 2.0, 3.0] {
        let nf = 100.0f64;
        let k = (0.5 * nf * nf.ln() - c * nf).ceil().max(0.0) as u64;
        let v = tv_lower_chebyshev_sym(100, k)?;
        let floor = 1.0 - 2187.0 * (-2.0 * c).exp();
        if v < floor {
            bad.push(format!("chebyshev c={c}"));
        }
        cheb.push(format!("c={c}: k={k} bound {v:.4} vs {floor:.3}"));
    }
    Ok((bad.is_empty(), format!("dominant term below l2 for Z2 wr S3 k<=30 ({} failures); {}", bad.len(), cheb.join(", "))))
}

fn coupling() -> Result<(bool, String)> {
    let start = Instant::now();
    let r = coupling_experiment(200, 10_000, &[0.0, 1.0, 2.0], SEED)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for row in &r.rows_t[..2] {
        ok &= (row.tail.value - row.limit).abs() <= 0.05;
        parts.push(format!("P(T>t_{}) = {:.4} vs {:.4}", row.c, row.tail.value, row.limit));
    }
    for row in &r.rows_t_star[1..] {
        let env = 2.0 * (-row.c).exp();
        ok &= row.tail.value <= env + 0.03;
        parts.push(format!("P(T*>t_{}) = {:.4} <= {:.4}+0.03", row.c, row.tail.value, env));
    }
    ok &= r.t.iter().zip(&r.t_star).all(|(a, b)| b >= a);
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    Ok((ok, format!("{}; {secs:.1}s of 300s", parts.join(", "))))
}

fn monte_carlo() -> Result<(bool, String)> {
    let g = group("Z:2")?;
    let table = build_wreath_table(g.clone(), 2, DEFAULT_MAX_ORDER)?;
    let p: Vec<BigRational> = procedural_measure(&table, WalkKind::Independent)?;
    let exact_dist = convolution_power(&p, 20, &table)?;
    let exact_tv = ratio_to_f64(&exact_distances(&exact_dist).tv);
    let cfg = SimConfig { kind: WalkKind::Independent, group: g, n: 2, steps: 20, trials: 100_000, seed: SEED, mode: SimMode::Discrete };
    let csv = || -> Result<(String, f64, f64)> {
        let est = empirical_tv(&cfg, DEFAULT_MAX_ORDER)?;
        let row = SimRow { k: 20, estimate: est, exact_tv: Some(exact_tv), trials: cfg.trials, seed: cfg.seed };
        Ok((simulate_table(&[row]).to_csv(), est.value, est.stderr))
    };
    let (a, tv, se) = csv()?;
    let (b, _, _) = csv()?;
    let within = (tv - exact_tv).abs() <= 3.0 * se;
    Ok((within && a == b, format!("empirical {tv:.5} ± {se:.5} vs exact {exact_tv:.3e} ({:.2} se); reruns byte-identical: {}", (tv - exact_tv).abs() / se, a == b)))
}

const INDEPENDENT_ROWS: [&str; 20] = [
    "1/2 n log n",
    "1/2 n log n",
    "1/2 n log n",
    "1/2 n log n",
    "1/2 n log n + 1/4 n log(m-1)",
    "1/2 n log n + 1/4 n log(m-1)",
    "1/2 n log n",
    "1/2 n log n",
    "1/2 n log n + 1/4 n log(|m!|-1)",
    "1/2 n log n + 1/4 n log(|m!|-1)",
    "1/2 n log n",
    "1/2 n log n",
    "1/2 n log n + 1/4 n log(|G|-1)",
    "1/2 n log n + 1/4 n log(|G|-1)",
    "1/2 n log n",
    "1/2 n log n",
    "1/2 n log n + 1/4 n log(|G|-1)",
    "1/2 n log n + 1/4 n log(|G|-1)",
    "1/2 n log n",
    "1/2 n log n",
];

const PAIRED_ROWS: [&str; 20] = [
    "n log n",
    "1/2 n log n",
    "1/2 n log n (n -> inf)",
    "1/2 n log n",
    "n log n + n log(m-1)",
    "1/2 n log n + 1/4 n log(m-1)",
    "1/2 n log n (n -> inf)",
    "1/2 n log n",
    "max{1/2 n log delta_n, n log n + 1/2 n log(|m!|-1) + 1/2 n log(p(m)-1)}",
    "max{1/2 n log delta_n, 1/2 n log n + 1/4 n log(|m!|-1)}",
    "1/2 n log n (n -> inf)",
    "1/2 n log n",
    "n log n + n log(|G|-1)",
    "1/2 n log n + 1/4 n log(|G|-1)",
    "1/2 n log n (n -> inf)",
    "1/2 n log n",
    "max{1/2 n log delta_n, n log n + 1/2 n log(|G|-1) + 1/2 n log(s-1)}",
    "max{1/2 n log delta_n, 1/2 n log n + 1/4 n log(|G|-1)}",
    "1/2 n log n (n -> inf)",
    "1/2 n log n",
];

fn thresholds() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for (kind, want) in [(WalkKind::Independent, &INDEPENDENT_ROWS), (WalkKind::Paired, &PAIRED_ROWS)] {
        let rows = table(kind)?;
        if rows.len() != want.len() {
            bad.push(format!("{kind}: {} rows", rows.len()));
            continue;
        }
        for (r, w) in rows.iter().zip(want.iter()) {
            if r.descriptor() != *w {
                bad.push(format!("{kind} {} {} {}: '{}'", r.family, r.metric, r.side, r.descriptor()));
            }
        }
    }
    let z2 = mixing_threshold(&build_group("Z:2")?, 100, WalkKind::Independent, Metric::L2)?;
    let v = z2[0].steps;
    if (v - 50.0 * 100f64.ln()).abs() > 1e-9 {
        bad.push(format!("Z2 n=100 evaluates to {v}"));
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("40 rows match; Z2 n=100 l2 = {v:.2}") } else { bad.join("; ") }))
}
