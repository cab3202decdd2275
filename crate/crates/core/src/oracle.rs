//! Brute-force ground truth on small wreath products: the step measure built
//! by enumerating the shuffle's random choices, dense transition matrices,
//! sparse convolution powers, distances to uniform, and trace moments.
//!
//! Nothing here touches representation theory, so agreement with the
//! spectral side is a genuine cross-check.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupTable, WreathElement, WreathIndexer};
use crate::scalar::Scalar;
use crate::walks::WalkKind;

fn wreath_parts(table: &GroupTable) -> Result<(&GroupTable, usize)> {
    let info = table.wreath.as_ref().ok_or_else(|| Error::Unsupported(format!("{} is not a wreath product table", table.name)))?;
    Ok((&info.base, info.n))
}

/// The one-step law as a density over `table`, obtained by enumerating the
/// positions p, q and the group elements drawn for them.
pub fn procedural_measure<T: Scalar>(table: &GroupTable, kind: WalkKind) -> Result<Vec<T>> {
    let (base, n) = wreath_parts(table)?;
    let idx = WreathIndexer::new(base.order, n);
    let go = base.order;
    let mut dens = vec![T::zero(); table.order];
    let pq = T::from_usize(n * n).unwrap();
    let mut add = |coords: Vec<usize>, perm: Vec<usize>, w: T| {
        let i = idx.index(&WreathElement { coords, perm });
        dens[i] = dens[i].clone() + w;
    };
    for p in 0..n {
        for q in 0..n {
            let id: Vec<usize> = (0..n).collect();
            if p == q {
                if kind == WalkKind::Sym {
                    add(vec![0; n], id, T::one() / pq.clone());
                    continue;
                }
                let w = T::one() / (pq.clone() * T::from_usize(go).unwrap());
                for x in 0..go {
                    let mut c = vec![0; n];
                    c[p] = x;
                    add(c, id.clone(), w.clone());
                }
                continue;
            }
            let mut perm = id;
            perm.swap(p, q);
            match kind {
                WalkKind::Sym => add(vec![0; n], perm, T::one() / pq.clone()),
                WalkKind::Independent => {
                    let w = T::one() / (pq.clone() * T::from_usize(go * go).unwrap());
                    for x in 0..go {
                        for y in 0..go {
                            let mut c = vec![0; n];
                            c[p] = x;
                            c[q] = y;
                            add(c, perm.clone(), w.clone());
                        }
                    }
                }
                WalkKind::Paired => {
                    let w = T::one() / (pq.clone() * T::from_usize(go).unwrap());
                    for x in 0..go {
                        let mut c = vec![0; n];
                        c[p] = x;
                        c[q] = base.inv[x];
                        add(c, perm.clone(), w.clone());
                    }
                }
            }
        }
    }
    Ok(dens)
}

/// Dense matrix with entry (g, h) = P(h·g⁻¹), the chance of moving from g
/// to h by left multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<T> {
    pub order: usize,
    pub entries: Vec<T>,
}

impl<T: Scalar> TransitionMatrix<T> {
    pub fn get(&self, g: usize, h: usize) -> &T {
        &self.entries[g * self.order + h]
    }

    pub fn trace(&self) -> T {
        (0..self.order).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn row_sums_one(&self) -> bool {
        (0..self.order).all(|g| (0..self.order).fold(T::zero(), |a, h| a + self.get(g, h).clone()).close(&T::one(), 1e-12))
    }

    pub fn column_sums_one(&self) -> bool {
        (0..self.order).all(|h| (0..self.order).fold(T::zero(), |a, g| a + self.get(g, h).clone()).close(&T::one(), 1e-12))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.get(g, h) == self.get(h, g)))
    }
}

pub fn build_transition_matrix<T: Scalar>(table: &GroupTable, measure: &[T], max_order: usize) -> Result<TransitionMatrix<T>> {
    let order = table.order;
    if order > max_order {
        return Err(Error::CapExceeded { what: "group order", value: order.to_string(), cap: max_order as u128, flag: "max-order" });
    }
    if measure.len() != order {
        return Err(Error::SizeMismatch(format!("measure has {} entries for a group of order {order}", measure.len())));
    }
    let entries = (0..order * order)
        .into_par_iter()
        .map(|i| {
            let (g, h) = (i / order, i % order);
            measure[table.mul(h, table.inv[g])].clone()
        })
        .collect();
    Ok(TransitionMatrix { order, entries })
}

fn support<T: Scalar>(measure: &[T]) -> Vec<(usize, T)> {
    measure.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, p)| (i, p.clone())).collect()
}

pub const MAX_CONVOLUTION_STEPS: u64 = 10_000;

/// P^{*k} from the identity: k sparse convolutions with the measure.
pub fn convolution_power<T: Scalar>(measure: &[T], k: u64, table: &GroupTable) -> Result<Vec<T>> {
    Ok(convolution_powers(measure, k, table)?.pop().unwrap())
}

/// P^{*0}, P^{*1}, …, P^{*k}.
pub fn convolution_powers<T: Scalar>(measure: &[T], k: u64, table: &GroupTable) -> Result<Vec<Vec<T>>> {
    if k > MAX_CONVOLUTION_STEPS {
        return Err(Error::CapExceeded { what: "convolution steps", value: k.to_string(), cap: MAX_CONVOLUTION_STEPS as u128, flag: "k" });
    }
    if measure.len() != table.order {
        return Err(Error::SizeMismatch(format!("measure has {} entries for a group of order {}", measure.len(), table.order)));
    }
    let supp = support(measure);
    let inv_supp: Vec<(usize, T)> = supp.iter().map(|(s, p)| (table.inv[*s], p.clone())).collect();
    let mut dist = vec![T::zero(); table.order];
    dist[0] = T::one();
    let mut out = vec![dist.clone()];
    for _ in 0..k {
        // (P * D)(g) = Σ_s P(s) D(s⁻¹g)
        dist = (0..table.order)
            .into_par_iter()
            .map(|g| inv_supp.iter().fold(T::zero(), |acc, (si, p)| acc + p.clone() * dist[table.mul(*si, g)].clone()))
            .collect();
        out.push(dist.clone());
    }
    Ok(out)
}

/// The continuized law Σ_k e^{-t} t^k/k! P^{*k}, truncated where the Poisson
/// tail falls below 1e-16 (at most `MAX_CONVOLUTION_STEPS` terms).
pub fn continuized_law(measure: &[f64], t: f64, table: &GroupTable) -> Result<Vec<f64>> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Unsupported(format!("time horizon must be finite and nonnegative, got {t}")));
    }
    let last = (t + 12.0 * t.sqrt() + 40.0).ceil() as u64;
    if last > MAX_CONVOLUTION_STEPS {
        return Err(Error::CapExceeded { what: "continuized truncation", value: last.to_string(), cap: MAX_CONVOLUTION_STEPS as u128, flag: "k" });
    }
    let inv_supp: Vec<(usize, f64)> = support(measure).iter().map(|(s, p)| (table.inv[*s], *p)).collect();
    let mut dist = vec![0.0; table.order];
    dist[0] = 1.0;
    let mut law = vec![0.0; table.order];
    let mut ln_fact = 0.0;
    for k in 0..=last {
        if k > 0 {
            ln_fact += (k as f64).ln();
            dist = (0..table.order).into_par_iter().map(|g| inv_supp.iter().map(|(si, p)| p * dist[table.mul(*si, g)]).sum()).collect();
        }
        let ln_w = if t == 0.0 { if k == 0 { 0.0 } else { f64::NEG_INFINITY } } else { -t + k as f64 * t.ln() - ln_fact };
        let w = ln_w.exp();
        for (l, d) in law.iter_mut().zip(&dist) {
            *l += w * d;
        }
    }
    Ok(law)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Distances<T> {
    pub tv: T,
    pub l1: T,
    pub l2_sq: T,
    /// order · ‖P − U‖₂²
    pub l2_normalized_sq: T,
}

impl<T: Scalar> Distances<T> {
    pub fn l2(&self) -> f64 {
        self.l2_sq.to_f64().sqrt()
    }
}

pub fn exact_distances<T: Scalar>(dist: &[T]) -> Distances<T> {
    let order = T::from_usize(dist.len()).unwrap();
    let u = T::one() / order.clone();
    let (mut l1, mut l2) = (T::zero(), T::zero());
    for p in dist {
        let d = p.clone() - u.clone();
        l1 = l1 + d.abs();
        l2 = l2 + d.clone() * d;
    }
    let two = T::one() + T::one();
    Distances { tv: l1.clone() / two, l1, l2_normalized_sq: l2.clone() * order, l2_sq: l2 }
}

#[derive(Clone, Debug)]
pub struct TraceReport {
    /// tr(M^k) for k = 0..=k_max.
    pub traces: Vec<BigRational>,
    /// Σ mult · value^k for the same k.
    pub moments: Vec<BigRational>,
    pub max_deviation: BigRational,
}

impl TraceReport {
    pub fn exact_match(&self) -> bool {
        self.max_deviation.is_zero()
    }
}

/// Compares tr(M^k), with M^k formed by repeated multiplication, against the
/// power sums of a claimed spectrum given as (value, multiplicity) pairs.
pub fn trace_moment_check(m: &TransitionMatrix<BigRational>, spectrum: &[(BigRational, BigUint)], k_max: u32) -> TraceReport {
    let order = m.order;
    // column-sparse view of M
    let cols: Vec<Vec<(usize, BigRational)>> = (0..order)
        .map(|h| (0..order).filter(|&j| !m.get(j, h).is_zero()).map(|j| (j, m.get(j, h).clone())).collect())
        .collect();
    let mut power: Vec<BigRational> = (0..order * order).map(|i| if i / order == i % order { BigRational::from_integer(1.into()) } else { BigRational::zero() }).collect();
    let mut traces = Vec::new();
    let mut moments = Vec::new();
    let mut max_dev = BigRational::zero();
    for k in 0..=k_max {
        if k > 0 {
            power = (0..order * order)
                .into_par_iter()
                .map(|i| {
                    let (g, h) = (i / order, i % order);
                    cols[h].iter().fold(BigRational::zero(), |acc, (j, v)| acc + &power[g * order + j] * v)
                })
                .collect();
        }
        let tr = (0..order).fold(BigRational::zero(), |acc, i| acc + &power[i * order + i]);
        let mom = spectrum.iter().fold(BigRational::zero(), |acc, (v, mult)| acc + BigRational::from_integer(mult.clone().into()) * v.pow(k as i32));
        let dev = (&tr - &mom).abs();
        if dev > max_dev {
            max_dev = dev;
        }
        traces.push(tr);
        moments.push(mom);
    }
    TraceReport { traces, moments, max_deviation: max_dev }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, build_wreath_table, DEFAULT_MAX_ORDER};
    use crate::scalar::rat;
    use std::sync::Arc;

    fn wreath(spec: &str, n: usize) -> GroupTable {
        build_wreath_table(Arc::new(build_group(spec).unwrap()), n, DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn continuized_is_poisson_mixture() {
        let t = wreath("Z:2", 2);
        let p: Vec<f64> = procedural_measure(&t, WalkKind::Independent).unwrap();
        let law = continuized_law(&p, 2.0, &t).unwrap();
        let pw = convolution_powers(&p, 80, &t).unwrap();
        let mut want = vec![0.0; t.order];
        let mut w = (-2.0f64).exp();
        for (k, d) in pw.iter().enumerate() {
            if k > 0 {
                w *= 2.0 / k as f64;
            }
            for (x, y) in want.iter_mut().zip(d) {
                *x += w * y;
            }
        }
        for (a, b) in law.iter().zip(&want) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(continuized_law(&p, 0.0, &t).unwrap()[0], 1.0);
    }

    #[test]
    fn matrix_basics() {
        let t = wreath("Z:2", 2);
        let p: Vec<BigRational> = procedural_measure(&t, WalkKind::Independent).unwrap();
        let m = build_transition_matrix(&t, &p, DEFAULT_MAX_ORDER).unwrap();
        assert!(m.row_sums_one() && m.column_sums_one());
        assert_eq!(m.trace(), rat(2, 1));
        assert_eq!(p[0], rat(1, 4));
    }

    #[test]
    fn walks_are_symmetric() {
        let t = wreath("Z:2", 3);
        for kind in [WalkKind::Independent, WalkKind::Paired] {
            let p: Vec<BigRational> = procedural_measure(&t, kind).unwrap();
            assert!(build_transition_matrix(&t, &p, DEFAULT_MAX_ORDER).unwrap().is_symmetric());
        }
        let s = wreath("Z:1", 4);
        let p: Vec<BigRational> = procedural_measure(&s, WalkKind::Sym).unwrap();
        assert!(build_transition_matrix(&s, &p, DEFAULT_MAX_ORDER).unwrap().is_symmetric());
    }

    #[test]
    fn convolution_edges() {
        let t = wreath("Z:3", 2);
        let p: Vec<BigRational> = procedural_measure(&t, WalkKind::Paired).unwrap();
        let d0 = convolution_power(&p, 0, &t).unwrap();
        assert_eq!(d0[0], rat(1, 1));
        assert_eq!(convolution_power(&p, 1, &t).unwrap(), p);
        let tv0 = exact_distances(&d0).tv;
        assert_eq!(tv0, rat(17, 18));
        let d5 = convolution_power(&p, 5, &t).unwrap();
        let total = d5.iter().fold(BigRational::zero(), |a, x| a + x);
        assert_eq!(total, rat(1, 1));
        assert!(d5.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn trace_zero_moment_is_order() {
        let t = wreath("Z:2", 2);
        let p: Vec<BigRational> = procedural_measure(&t, WalkKind::Independent).unwrap();
        let m = build_transition_matrix(&t, &p, DEFAULT_MAX_ORDER).unwrap();
        let spec = vec![(rat(1, 1), BigUint::from(1u32)), (rat(1, 4), BigUint::from(4u32)), (rat(0, 1), BigUint::from(3u32))];
        let r = trace_moment_check(&m, &spec, 6);
        assert!(r.exact_match(), "{:?}", r);
        assert_eq!(r.traces[0], rat(8, 1));
    }

    #[test]
    fn cap() {
        let t = wreath("Z:2", 3);
        let p: Vec<BigRational> = procedural_measure(&t, WalkKind::Independent).unwrap();
        assert!(matches!(build_transition_matrix(&t, &p, 10), Err(Error::CapExceeded { .. })));
    }
}
