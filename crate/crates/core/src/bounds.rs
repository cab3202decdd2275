//! ℓ² sums, upper and lower bounds on distance to uniform, and distance
//! curves.
//!
//! Throughout, l2n_sq(k) is |G≀S_n|·‖P^{*k} − U‖₂², which equals the sum of
//! multiplicity × eigenvalue^{2k} over the nontrivial spectrum. Large values
//! are carried as natural logs.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::classes::class_count;
use crate::error::{Error, Result};
use crate::group::{cyclic_group, GroupTable};
use crate::logsum::{ln_add, LogSum};
use crate::partitions::{ln_factorial, partition_count};
use crate::plancherel::{power_sums, PowerSumQuery, DEFAULT_REL_TOL};
use crate::scalar::{ln_abs_bigint, ln_abs_ratio, ratio_to_f64, Scalar};
use crate::walks::{spectrum, SpectralLine, WalkKind};

/// A nonnegative quantity exp(ln), possibly underestimated by at most
/// exp(ln_slack) because negligible terms were dropped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LnBound {
    pub ln: f64,
    pub ln_slack: f64,
}

impl LnBound {
    pub fn exact(ln: f64) -> Self {
        LnBound { ln, ln_slack: f64::NEG_INFINITY }
    }

    /// ln of the largest value consistent with the bound.
    pub fn ln_upper(&self) -> f64 {
        ln_add(self.ln, self.ln_slack)
    }

    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn scaled(&self, ln_factor: f64) -> Self {
        LnBound { ln: self.ln + ln_factor, ln_slack: self.ln_slack + ln_factor }
    }
}

fn sum_bounds(parts: impl IntoIterator<Item = LnBound>) -> LnBound {
    let (mut v, mut s) = (LogSum::default(), LogSum::default());
    for p in parts {
        v.push(p.ln);
        s.push(p.ln_slack);
    }
    LnBound { ln: v.ln_value(), ln_slack: s.ln_value() }
}

/// Σ over the nontrivial spectrum of multiplicity · value^{2k}, exactly.
pub fn l2n_sq_spectral<T: Scalar>(lines: &[SpectralLine], k: u32) -> T {
    let mut acc = -T::one();
    for l in lines {
        acc = acc + T::from_bigint(&l.multiplicity.clone().into()) * T::from_ratio(&l.value).powu(2 * k);
    }
    acc
}

/// ln of the same sum for arbitrary k.
pub fn l2n_sq_spectral_ln(lines: &[SpectralLine], k: u64) -> f64 {
    let mut acc = LogSum::default();
    for l in lines {
        let mut mult = l.multiplicity.clone();
        if l.value.is_one() {
            mult -= 1u32;
        }
        if mult.is_zero() || (l.value.is_zero() && k > 0) {
            continue;
        }
        let ln_v = if k == 0 { 0.0 } else { 2.0 * k as f64 * crate::scalar::ln_abs_ratio(&l.value) };
        acc.push(ln_abs_bigint(&mult.into()) + ln_v);
    }
    acc.ln_value()
}

fn ln_binom(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// ln[C(n, n1) · n!/n1! · (|G|-1)^{n-n1}], the number of irreps of G≀S_n
/// (counted with d²) sharing one λ1 in slot 0 after collapsing the others.
fn ln_outer(g_order: usize, n: usize, n1: usize) -> f64 {
    let tail = if n1 == n { 0.0 } else { (n - n1) as f64 * ((g_order - 1) as f64).ln() };
    ln_binom(n, n1) + ln_factorial(n) - ln_factorial(n1) + tail
}

/// Sums Σ_{n1} exp(outer(n1)) · S_{n1}(2k) where S_{n1} is a power sum over
/// partitions of n1 with eigenvalue x0(n1) + x1(n1)·content. `ref_ln[i]` is
/// the ln of some genuine term of the total for the i-th k, used to decide
/// what is negligible.
fn collapsed_sum(
    g_order: usize,
    n: usize,
    ks: &[u64],
    ref_ln: &[f64],
    affine: impl Fn(usize) -> (f64, f64) + Sync,
) -> Result<Vec<LnBound>> {
    let exps: Vec<u64> = ks.iter().map(|&k| 2 * k).collect();
    let slices: Vec<Result<Vec<LnBound>>> = (0..=n)
        .into_par_iter()
        .map(|n1| {
            if g_order == 1 && n1 < n {
                return Ok(vec![LnBound::exact(f64::NEG_INFINITY); ks.len()]);
            }
            let outer = ln_outer(g_order, n, n1);
            if n1 == 0 {
                // every eigenvalue in this slice is 0
                return Ok(exps.iter().map(|&e| LnBound::exact(if e == 0 { outer } else { f64::NEG_INFINITY })).collect());
            }
            let (x0, x1) = affine(n1);
            let floors: Vec<f64> = ref_ln.iter().map(|r| r - outer + DEFAULT_REL_TOL.ln()).collect();
            let q = PowerSumQuery { exclude_trivial: n1 == n, floors: Some(&floors), ..PowerSumQuery::new(n1, x0, x1, &exps) };
            let r = power_sums(&q)?;
            Ok(r.ln_sum.iter().zip(&r.ln_dropped).map(|(&v, &d)| LnBound { ln: v + outer, ln_slack: d + outer }).collect())
        })
        .collect();
    let slices = slices.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((0..ks.len()).map(|i| sum_bounds(slices.iter().map(|s| s[i]))).collect())
}

fn independent_reference(g_order: usize, n: usize, k: u64) -> f64 {
    let e = 2.0 * k as f64;
    let nf = n as f64;
    let mut r = f64::NEG_INFINITY;
    if g_order >= 2 {
        r = r.max(l2_dominant_term_ln(g_order, n, k));
    }
    if n >= 3 {
        r = r.max(2.0 * (nf - 1.0).ln() + e * ((nf - 2.0) / nf).ln());
    }
    r
}

/// l2n_sq for the independent walk from the collapsed double sum over
/// (n1, λ1). Only |G| enters.
pub fn l2n_sq_collapsed_ln(g_order: usize, n: usize, ks: &[u64]) -> Result<Vec<LnBound>> {
    if g_order == 0 || n < 2 {
        return Err(Error::NTooSmall("collapsed sum", 2));
    }
    let refs: Vec<f64> = ks.iter().map(|&k| independent_reference(g_order, n, k)).collect();
    let nn = (n * n) as f64;
    collapsed_sum(g_order, n, ks, &refs, |n1| (n1 as f64 / nn, 2.0 / nn))
}

pub fn l2n_sq_collapsed(g_order: usize, n: usize, k: u64) -> Result<f64> {
    Ok(l2n_sq_collapsed_ln(g_order, n, &[k])?[0].value())
}

/// l2n_sq for the random-transposition walk on S_n.
pub fn sym_l2n_sq_ln(n: usize, ks: &[u64]) -> Result<Vec<LnBound>> {
    if n < 2 {
        return Err(Error::NTooSmall("transposition walk", 2));
    }
    let exps: Vec<u64> = ks.iter().map(|&k| 2 * k).collect();
    let nf = n as f64;
    let q = PowerSumQuery { exclude_trivial: true, ..PowerSumQuery::new(n, 1.0 / nf, 2.0 / (nf * nf), &exps) };
    let r = power_sums(&q)?;
    Ok(r.ln_sum.iter().zip(&r.ln_dropped).map(|(&v, &d)| LnBound { ln: v, ln_slack: d }).collect())
}

/// Σ over nontrivial irreps of G of d^{2n}.
pub fn delta_n(g: &GroupTable, n: usize) -> Result<BigUint> {
    Ok(g.irrep_dims()?.iter().skip(1).map(|&d| BigUint::from(d).pow(2 * n as u32)).sum())
}

/// Upper bound on ¼·l2n_sq for the paired walk: slot 0 is kept exactly and
/// the other slots are relaxed through the conjugate-doubling step, with the
/// all-trivial-partition terms of the nontrivial slots added back.
pub fn paired_relaxed_bound_ln(g: &GroupTable, n: usize, ks: &[u64]) -> Result<Vec<LnBound>> {
    if n < 2 {
        return Err(Error::NTooSmall("paired bound", 2));
    }
    let s = g.num_classes();
    let ln_delta = ln_abs_bigint(&delta_n(g, n)?.into());
    let nf = n as f64;
    let ln_corr = |k: u64| ln_delta - 4f64.ln() + 2.0 * k as f64 * ((nf - 1.0) / nf).ln();
    let refs: Vec<f64> = ks
        .iter()
        .map(|&k| {
            // the [n-1] ⊗ (one nontrivial coordinate) term, relaxed
            let e = 2.0 * k as f64;
            let t = if g.order >= 2 { ln_outer(g.order, n, n - 1) + e * ((nf - 1.0) / nf).ln() } else { f64::NEG_INFINITY };
            if s >= 2 { t.max(ln_corr(k) - (0.5 * s as f64).ln()) } else { t }
        })
        .collect();
    let main = collapsed_sum(g.order, n, ks, &refs, |n1| (1.0 / nf, 2.0 / (nf * n1 as f64)))?;
    let half_s = (0.5 * s as f64).ln();
    Ok(main
        .iter()
        .zip(ks)
        .map(|(m, &k)| {
            let corr = if s >= 2 { ln_corr(k) } else { f64::NEG_INFINITY };
            sum_bounds([m.scaled(half_s), LnBound::exact(corr)])
        })
        .collect())
}

pub fn paired_relaxed_bound(g: &GroupTable, n: usize, k: u64) -> Result<f64> {
    Ok(paired_relaxed_bound_ln(g, n, &[k])?[0].value())
}

/// The two-stage coupling bound for the independent walk: permutation part
/// plus the probability that some coordinate has not yet been randomized.
pub fn tv_upper_coupling(n: usize, k: u64, sym_tv_upper: f64) -> f64 {
    let nf = n as f64;
    let tail = nf * (2.0 * k as f64 * (1.0 - 1.0 / nf).ln()).exp();
    (sym_tv_upper + tail).min(1.0)
}

/// ln of n²(|G|-1)(1-1/n)^{4k}, a single term of l2n_sq for both G-walks.
pub fn l2_dominant_term_ln(g_order: usize, n: usize, k: u64) -> f64 {
    let nf = n as f64;
    2.0 * nf.ln() + ((g_order - 1) as f64).ln() + 4.0 * k as f64 * (1.0 - 1.0 / nf).ln()
}

/// ln of the largest single-line witness below l2n_sq. For the paired walk
/// the labels with all n coordinates in one nontrivial slot and partition
/// [n] compete: eigenvalue (n-1)/(n d_j), multiplicity d_j^{2n}. For abelian
/// G that family is δ_n((n-1)/n)^{2k}.
pub fn l2_lower_dominant_ln(g: &GroupTable, n: usize, k: u64, kind: WalkKind) -> Result<f64> {
    let nf = n as f64;
    Ok(match kind {
        WalkKind::Sym => 2.0 * (nf - 1.0).ln() + 2.0 * k as f64 * (1.0 - 2.0 / nf).ln(),
        WalkKind::Independent => l2_dominant_term_ln(g.order, n, k),
        WalkKind::Paired => {
            let (kf, q) = (k as f64, ((nf - 1.0) / nf).ln());
            let terms: Vec<f64> = g.irrep_dims()?.iter().skip(1).map(|&d| (2.0 * nf - 2.0 * kf) * (d as f64).ln() + 2.0 * kf * q).collect();
            l2_dominant_term_ln(g.order, n, k).max(crate::logsum::ln_sum(&terms))
        }
    })
}

/// ½·√(dominant term): a lower bound on the normalized ℓ² distance, not on TV.
pub fn tv_lower_dominant(g: &GroupTable, n: usize, k: u64, kind: WalkKind) -> Result<f64> {
    Ok(0.5 * (0.5 * l2_lower_dominant_ln(g, n, k, kind)?).exp())
}

/// Mean and variance of the fixed-point count minus one after k steps of
/// the transposition walk, from the decomposition of its square.
pub fn fixed_point_moments(n: usize, k: u64) -> (f64, f64) {
    let nf = n as f64;
    let kf = k as f64;
    let q = (1.0 - 2.0 / nf).powf(kf);
    let b = (1.0 - 4.0 / nf).powf(kf);
    let e = (nf - 1.0) * q;
    let var = 1.0 + (nf - 1.0) * q + 0.5 * (nf - 1.0) * (nf - 2.0) * b - 0.5 * (nf * nf - nf + 2.0) * q * q;
    (e, var)
}

pub const CHEBYSHEV_GRID: usize = 64;

/// Chebyshev lower bound on TV for the transposition walk, maximized over a
/// geometric grid of cut points.
pub fn tv_lower_chebyshev_sym(n: usize, k: u64) -> Result<f64> {
    if n < 4 {
        return Err(Error::NTooSmall("chebyshev bound", 4));
    }
    let (e, var) = fixed_point_moments(n, k);
    if e <= 0.0 {
        return Ok(0.0);
    }
    let hi = e * (1.0 - 1e-3);
    let lo = hi * 1e-3;
    let mut best: f64 = 0.0;
    for i in 0..CHEBYSHEV_GRID {
        let a = lo * (hi / lo).powf(i as f64 / (CHEBYSHEV_GRID - 1) as f64);
        let v = 1.0 - 1.0 / (a * a) - var / ((e - a) * (e - a));
        best = best.max(v);
    }
    Ok(best.clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    FullSpectrum,
    Collapsed,
    Relaxed,
}

impl std::fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DistanceMode::FullSpectrum => "full-spectrum",
            DistanceMode::Collapsed => "collapsed",
            DistanceMode::Relaxed => "relaxed",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DistanceRow {
    pub k: u64,
    /// In relaxed mode this is an upper bound on l2n_sq, not the sum itself.
    pub l2n_sq: LnBound,
    /// The same sum as an exact rational, when small k allowed it.
    pub l2n_sq_exact: Option<BigRational>,
    pub tv_upper_spectral: f64,
    pub tv_upper_coupling: Option<f64>,
    pub l2_lower_dominant_ln: Option<f64>,
    pub tv_lower_chebyshev: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct DistanceCurve {
    pub kind: WalkKind,
    pub group: String,
    pub n: usize,
    pub mode: DistanceMode,
    pub rows: Vec<DistanceRow>,
}

/// Largest k for which full-spectrum sums are formed in exact arithmetic.
pub const EXACT_K_MAX: u64 = 64;

fn tv_from_l2(l2: &LnBound) -> f64 {
    (0.5 * (0.5 * l2.ln_upper()).exp()).min(1.0)
}

/// Picks the full spectrum when its label count fits under `max_labels`,
/// otherwise the collapsed sum (independent, sym) or the relaxed bound
/// (paired).
pub fn distance_curve(g: Arc<GroupTable>, n: usize, kind: WalkKind, ks: &[u64], max_labels: usize) -> Result<DistanceCurve> {
    if n < 2 {
        return Err(Error::NTooSmall("distance curve", 2));
    }
    let label_count = match kind {
        WalkKind::Sym => partition_count(n),
        _ => class_count(&g, n),
    };
    let full = label_count <= BigUint::from(max_labels);
    let mut exact: Vec<Option<BigRational>> = vec![];
    let (mode, l2): (DistanceMode, Vec<LnBound>) = if full {
        let lines = spectrum(g.clone(), n, kind, max_labels)?;
        let mut l2 = Vec::with_capacity(ks.len());
        for &k in ks {
            // exact rationals while the powers stay small
            if k <= EXACT_K_MAX {
                let v = l2n_sq_spectral::<BigRational>(&lines, k as u32);
                l2.push(LnBound::exact(ln_abs_ratio(&v)));
                exact.push(Some(v));
            } else {
                l2.push(LnBound::exact(l2n_sq_spectral_ln(&lines, k)));
                exact.push(None);
            }
        }
        (DistanceMode::FullSpectrum, l2)
    } else {
        match kind {
            WalkKind::Independent => (DistanceMode::Collapsed, l2n_sq_collapsed_ln(g.order, n, ks)?),
            WalkKind::Sym => (DistanceMode::Collapsed, sym_l2n_sq_ln(n, ks)?),
            WalkKind::Paired => {
                let four = 4f64.ln();
                (DistanceMode::Relaxed, paired_relaxed_bound_ln(&g, n, ks)?.iter().map(|b| b.scaled(four)).collect())
            }
        }
    };
    let sym_tv: Option<Vec<f64>> = match kind {
        WalkKind::Independent => Some(sym_l2n_sq_ln(n, ks)?.iter().map(tv_from_l2).collect()),
        _ => None,
    };
    let base = match kind {
        WalkKind::Sym => Arc::new(cyclic_group(1)?),
        _ => g.clone(),
    };
    let mut rows = Vec::with_capacity(ks.len());
    for (i, &k) in ks.iter().enumerate() {
        let dominant = if kind == WalkKind::Independent || kind == WalkKind::Paired {
            if base.order >= 2 {
                Some(l2_lower_dominant_ln(&base, n, k, kind)?)
            } else {
                None
            }
        } else {
            Some(l2_lower_dominant_ln(&base, n, k, kind)?)
        };
        let ex = exact.get(i).cloned().flatten();
        let tv_spec = match &ex {
            Some(v) => (0.5 * ratio_to_f64(v).sqrt()).min(1.0),
            None => tv_from_l2(&l2[i]),
        };
        rows.push(DistanceRow {
            k,
            l2n_sq: l2[i],
            l2n_sq_exact: ex,
            tv_upper_spectral: tv_spec,
            tv_upper_coupling: sym_tv.as_ref().map(|s| tv_upper_coupling(n, k, s[i])),
            l2_lower_dominant_ln: dominant,
            tv_lower_chebyshev: if kind == WalkKind::Sym && n >= 4 { Some(tv_lower_chebyshev_sym(n, k)?) } else { None },
        });
    }
    let group = if kind == WalkKind::Sym { format!("S_{n}") } else { g.name.clone() };
    Ok(DistanceCurve { kind, group, n, mode, rows })
}

/// Largest nontrivial |eigenvalue| of the independent walk restricted to
/// slot-0 size n1, from the closed form at the extreme contents. Used to
/// check the (1-1/n)² envelope without enumerating labels.
pub fn independent_slice_extreme(n: usize, n1: usize) -> BigRational {
    let nn = BigRational::from_integer(((n * n) as i64).into());
    let row = |m: usize| BigRational::from_integer((m as i64).pow(2).into()) / &nn;
    if n1 == 0 {
        return BigRational::zero();
    }
    let col = (BigRational::from_integer((n1 as i64).into()) - BigRational::from_integer(((n1 * (n1 - 1)) as i64).into())) / &nn;
    let col = if col < BigRational::zero() { -col } else { col };
    let top = if n1 == n {
        // [n-1, 1] is the largest nontrivial row-side value
        if n1 < 2 {
            return col;
        }
        let c = ((n1 - 1) * (n1 - 2) / 2) as i64 - 1;
        (BigRational::from_integer((n1 as i64).into()) + BigRational::from_integer((2 * c).into())) / &nn
    } else {
        row(n1)
    };
    if top > col {
        top
    } else {
        col
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::scalar::rat;

    #[test]
    fn collapsed_matches_spectral_small() {
        for (spec, nmax) in [("Z:2", 6usize), ("Z:3", 4)] {
            let g = Arc::new(build_group(spec).unwrap());
            for n in 2..=nmax {
                let lines = spectrum(g.clone(), n, WalkKind::Independent, 1_000_000).unwrap();
                let ks: Vec<u64> = (0..=20).collect();
                let col = l2n_sq_collapsed_ln(g.order, n, &ks).unwrap();
                for &k in &ks {
                    let exact: BigRational = l2n_sq_spectral(&lines, k as u32);
                    let e = crate::scalar::ratio_to_f64(&exact);
                    let c = col[k as usize].value();
                    assert!((c - e).abs() <= 1e-9 * e.max(1e-300), "{spec} n={n} k={k}: {c} vs {e}");
                }
            }
        }
    }

    #[test]
    fn spectral_ln_matches_exact() {
        let g = Arc::new(build_group("Z:2").unwrap());
        let lines = spectrum(g, 2, WalkKind::Independent, 100).unwrap();
        assert_eq!(l2n_sq_spectral::<BigRational>(&lines, 1), rat(1, 4));
        assert_eq!(l2n_sq_spectral::<BigRational>(&lines, 0), rat(7, 1));
        assert!((l2n_sq_spectral_ln(&lines, 1).exp() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_n(&build_group("S:3").unwrap(), 2).unwrap(), BigUint::from(17u32));
        assert_eq!(delta_n(&build_group("S:3").unwrap(), 3).unwrap(), BigUint::from(65u32));
        assert_eq!(delta_n(&build_group("Z:2").unwrap(), 9).unwrap(), BigUint::from(1u32));
        assert_eq!(delta_n(&build_group("Z:5").unwrap(), 4).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn chebyshev_edges() {
        let (e, _) = fixed_point_moments(10, 0);
        assert_eq!(e, 9.0);
        // the point mass has variance 0 for χ
        let (_, v) = fixed_point_moments(10, 0);
        assert!(v.abs() < 1e-12);
        assert_eq!(tv_lower_chebyshev_sym(50, 1_000_000).unwrap(), 0.0);
        assert!(tv_lower_chebyshev_sym(100, 10).unwrap() > 0.9);
    }

    #[test]
    fn coupling_bound_shape() {
        assert_eq!(tv_upper_coupling(10, 0, 0.3), 1.0);
        let k = 500;
        let got = tv_upper_coupling(100, k, 0.01) - 0.01;
        assert!((got - 100.0 * 0.99f64.powi(1000)).abs() < 1e-15);
    }

    #[test]
    fn slice_extremes_within_envelope() {
        for n in 2..=60usize {
            let env = rat((n as i64 - 1).pow(2), (n as i64).pow(2));
            for n1 in 0..=n {
                assert!(independent_slice_extreme(n, n1) <= env, "n={n} n1={n1}");
            }
        }
    }
}
