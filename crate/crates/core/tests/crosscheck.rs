//! Spectral and bound machinery against the brute-force oracle and the
//! simulator against exact laws.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use wreath_core::bounds::{
    distance_curve, l2_lower_dominant_ln, l2n_sq_spectral, tv_lower_chebyshev_sym, tv_upper_coupling, DistanceMode,
};
use wreath_core::classes::{support_class_of, SupportClass};
use wreath_core::group::{build_group, build_wreath_table, cyclic_group, WreathIndexer, DEFAULT_MAX_ORDER};
use wreath_core::oracle::{continuized_law, convolution_powers, exact_distances, procedural_measure};
use wreath_core::scalar::{rat, ratio_to_f64};
use wreath_core::sim::{
    coupling_experiment, discrete_coupling_bound, discrete_coupling_tail, empirical_tv, hit_probability, sample_draw, trial_rng, SimConfig, SimMode,
};
use wreath_core::walks::{return_probability, spectrum, WalkKind};
use wreath_core::GroupTable;

fn lines_as_map(g: &str, n: usize, kind: WalkKind) -> BTreeMap<String, u64> {
    let lines = spectrum(Arc::new(build_group(g).unwrap()), n, kind, 1_000_000).unwrap();
    lines.iter().map(|l| (l.value.to_string(), l.multiplicity.to_string().parse().unwrap())).collect()
}

#[test]
fn small_spectra() {
    let want: BTreeMap<String, u64> = [("1", 1), ("1/4", 4), ("0", 3)].iter().map(|(a, b)| (a.to_string(), *b)).collect();
    assert_eq!(lines_as_map("Z:2", 2, WalkKind::Independent), want);
    let want: BTreeMap<String, u64> = [("1", 1), ("1/2", 1), ("1/4", 4), ("0", 1), ("-1/2", 1)].iter().map(|(a, b)| (a.to_string(), *b)).collect();
    assert_eq!(lines_as_map("Z:2", 2, WalkKind::Paired), want);
}

#[test]
fn return_probability_vs_convolution() {
    for (spec, n) in [("Z:2", 2), ("Z:3", 2), ("S:3", 2), ("Z:2", 3)] {
        let g = Arc::new(build_group(spec).unwrap());
        let table = build_wreath_table(g.clone(), n, DEFAULT_MAX_ORDER).unwrap();
        for kind in [WalkKind::Independent, WalkKind::Paired] {
            let lines = spectrum(g.clone(), n, kind, 1_000_000).unwrap();
            let p: Vec<BigRational> = procedural_measure(&table, kind).unwrap();
            let pw = convolution_powers(&p, 8, &table).unwrap();
            assert_eq!(return_probability::<BigRational>(&lines, 1), rat(1, (g.order * n) as i64));
            for k in 0..=8u32 {
                assert_eq!(return_probability::<BigRational>(&lines, k), pw[k as usize][0], "{spec} {n} {kind} k={k}");
            }
        }
    }
}

fn chi_square(g: &GroupTable, n: usize, kind: WalkKind, draws: u64, seed: u64) -> (f64, usize) {
    let table = build_wreath_table(Arc::new(g.clone()), n, DEFAULT_MAX_ORDER).unwrap();
    let p: Vec<f64> = procedural_measure(&table, kind).unwrap();
    let idx = WreathIndexer::new(g.order, n);
    let mut counts = vec![0u64; idx.order()];
    let mut rng = trial_rng(seed, 0);
    for _ in 0..draws {
        counts[idx.index(&sample_draw(n, kind, g, &mut rng))] += 1;
    }
    let mut stat = 0.0;
    let mut cells = 0;
    for (c, q) in counts.iter().zip(&p) {
        if *q == 0.0 {
            assert_eq!(*c, 0, "draw landed off the support");
            continue;
        }
        let e = q * draws as f64;
        stat += (*c as f64 - e).powi(2) / e;
        cells += 1;
    }
    (stat, cells - 1)
}

#[test]
fn one_step_law_goodness_of_fit() {
    for spec in ["Z:2", "Z:3"] {
        let g = build_group(spec).unwrap();
        for (i, kind) in [WalkKind::Independent, WalkKind::Paired].into_iter().enumerate() {
            let (stat, df) = chi_square(&g, 2, kind, 1_000_000, 11 + i as u64);
            let crit = ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - 1e-4);
            assert!(stat < crit, "{spec} {kind}: chi2 {stat} with {df} df exceeds {crit}");
        }
    }
}

#[test]
fn paired_draws_stay_in_the_trivial_product_class() {
    let g = build_group("S:3").unwrap();
    let mut rng = trial_rng(3, 0);
    let mut transpositions = 0;
    for _ in 0..20_000 {
        let w = sample_draw(4, WalkKind::Paired, &g, &mut rng);
        match support_class_of(&w, &g) {
            Some(SupportClass::V(k)) => {
                assert_eq!(k, 0);
                transpositions += 1;
            }
            Some(_) => {}
            None => panic!("{w} is off the support"),
        }
    }
    // p != q with probability 3/4
    assert!((transpositions as f64 / 20_000.0 - 0.75).abs() < 0.02);
}

#[test]
fn tv_sandwich_on_z2_wr_s3() {
    let g = Arc::new(build_group("Z:2").unwrap());
    let table = build_wreath_table(g.clone(), 3, DEFAULT_MAX_ORDER).unwrap();
    let ks: Vec<u64> = (0..=40).collect();
    let curve = distance_curve(g, 3, WalkKind::Independent, &ks, 1_000_000).unwrap();
    assert_eq!(curve.mode, DistanceMode::FullSpectrum);
    let p: Vec<BigRational> = procedural_measure(&table, WalkKind::Independent).unwrap();
    let pw = convolution_powers(&p, 40, &table).unwrap();
    for row in &curve.rows {
        let tv = ratio_to_f64(&exact_distances(&pw[row.k as usize]).tv);
        assert!(tv <= row.tv_upper_spectral * (1.0 + 1e-12), "k={}", row.k);
        assert!(tv <= row.tv_upper_coupling.unwrap() * (1.0 + 1e-12), "k={}", row.k);
        assert_eq!(row.l2n_sq_exact.as_ref().unwrap(), &exact_distances(&pw[row.k as usize]).l2_normalized_sq);
    }
    // the coupling bound is the sym bound plus the untouched-coordinate tail
    let extra = tv_upper_coupling(3, 5, 0.1) - 0.1;
    assert!((extra - 3.0 * (2.0f64 / 3.0).powi(10)).abs() < 1e-15);
}

#[test]
fn dominant_terms_are_summands() {
    for spec in ["Z:2", "Z:3", "S:3"] {
        let g = build_group(spec).unwrap();
        for n in 2..=4 {
            for kind in [WalkKind::Independent, WalkKind::Paired] {
                let lines = spectrum(Arc::new(g.clone()), n, kind, 1_000_000).unwrap();
                for k in 0..=40u32 {
                    let exact = ratio_to_f64(&l2n_sq_spectral::<BigRational>(&lines, k));
                    let lower = l2_lower_dominant_ln(&g, n, k as u64, kind).unwrap().exp();
                    assert!(lower <= exact * (1.0 + 1e-12), "{spec} n={n} {kind} k={k}: {lower} > {exact}");
                }
            }
        }
    }
}

#[test]
fn chebyshev_against_exact_sym_walk() {
    let triv = Arc::new(cyclic_group(1).unwrap());
    let table = build_wreath_table(triv, 6, DEFAULT_MAX_ORDER).unwrap();
    let p: Vec<BigRational> = procedural_measure(&table, WalkKind::Sym).unwrap();
    let pw = convolution_powers(&p, 30, &table).unwrap();
    for k in 0..=30u64 {
        let tv = ratio_to_f64(&exact_distances(&pw[k as usize]).tv);
        assert!(tv_lower_chebyshev_sym(6, k).unwrap() <= tv + 1e-12, "k={k}");
    }
}

#[test]
fn chebyshev_beats_the_fixed_alpha_value() {
    let nf = 100.0f64;
    for c in [1.0f64, 2.0, 3.0] {
        let k = (0.5 * nf * nf.ln() - c * nf).ceil().max(0.0) as u64;
        let fixed = 1.0 - 729.0 * (-2.0 * c).exp() - 1458.0 * (-4.0 * c).exp();
        assert!(tv_lower_chebyshev_sym(100, k).unwrap() >= fixed);
    }
    assert_eq!(tv_lower_chebyshev_sym(100, 100_000).unwrap(), 0.0);
}

#[test]
fn hit_probability_by_enumeration() {
    for n in 2..=7usize {
        let hits = (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).filter(|&(p, q)| p == 0 || q == 0).count();
        assert_eq!(hit_probability(n), rat(hits as i64, (n * n) as i64));
    }
}

#[test]
fn discrete_coupling_tail_below_bound() {
    let n = 100;
    let k = (0.5 * 100.0 * 100f64.ln() + 100.0).ceil() as u64;
    let tails = discrete_coupling_tail(n, &[0, k], 20_000, 4).unwrap();
    assert_eq!(tails[0].value, 1.0);
    assert!(tails[1].value <= discrete_coupling_bound(n, k) + 4.0 * tails[1].stderr.max(1e-3));
}

#[test]
fn coupling_is_reproducible_and_ordered() {
    let a = coupling_experiment(60, 500, &[0.0, 1.0], 9).unwrap();
    let b = coupling_experiment(60, 500, &[0.0, 1.0], 9).unwrap();
    assert_eq!(a.t, b.t);
    assert_eq!(a.rows_t_star, b.rows_t_star);
    assert!(a.t.iter().zip(&a.t_star).all(|(t, s)| s >= t));
}

#[test]
fn simulation_against_exact_laws() {
    let g = Arc::new(build_group("Z:2").unwrap());
    let table = build_wreath_table(g.clone(), 2, DEFAULT_MAX_ORDER).unwrap();
    let p: Vec<f64> = procedural_measure(&table, WalkKind::Independent).unwrap();
    let base = SimConfig { kind: WalkKind::Independent, group: g, n: 2, steps: 0, trials: 50_000, seed: 21, mode: SimMode::Discrete };
    let e = empirical_tv(&base, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!(e.value, 1.0 - 1.0 / 8.0);
    let pw = convolution_powers(&p, 3, &table).unwrap();
    for (mode, law) in [(SimMode::Discrete, pw[2].clone()), (SimMode::Continuized, continuized_law(&p, 2.0, &table).unwrap())] {
        let cfg = SimConfig { steps: 2, mode, ..base.clone() };
        let e = empirical_tv(&cfg, DEFAULT_MAX_ORDER).unwrap();
        let exact = exact_distances(&law).tv;
        // plug-in bias is at most ½ Σ sqrt(p(1-p)/N) here
        let bias: f64 = 0.5 * law.iter().map(|q| (q * (1.0 - q) / 50_000.0).sqrt()).sum::<f64>();
        assert!((e.value - exact).abs() <= 4.0 * e.stderr + bias, "{mode:?}: {} vs {exact}", e.value);
    }
}

#[test]
fn multiplicities_sum_to_order_for_sym() {
    let lines = spectrum(Arc::new(build_group("Z:2").unwrap()), 6, WalkKind::Sym, 1_000_000).unwrap();
    let total: BigUint = lines.iter().map(|l| &l.multiplicity).sum();
    assert_eq!(total, BigUint::from(720u32));
}
