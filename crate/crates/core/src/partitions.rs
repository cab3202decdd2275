//! Integer partitions and the symmetric-group data attached to them:
//! dimensions, the transposition ratio r(λ), conjugation and
//! Murnaghan-Nakayama character values.
//!
//! Partitions are ordered reverse-lexicographically everywhere: `[n]` first,
//! `[1^n]` last.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates weak decrease and positivity.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::SizeMismatch(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::SizeMismatch(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `[n]` (empty for n = 0).
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition `[1^n]`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Sum of contents j - i over all cells (0-based row i, column j).
    pub fn content(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let l = l as i64;
                l * (l - 1) / 2 - i as i64 * l
            })
            .sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join("."))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split('.')
            .map(|p| p.parse::<usize>().map_err(|_| Error::SizeMismatch(format!("bad partition {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Lazy reverse-lexicographic enumeration of the partitions of n.
pub struct Partitions {
    next: Option<Vec<usize>>,
}

pub fn partitions(n: usize) -> Partitions {
    Partitions { next: Some(if n == 0 { Vec::new() } else { vec![n] }) }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        // successor: decrement the last part > 1, then refill greedily
        let mut nxt = cur.clone();
        let mut rem = 0;
        while let Some(&1) = nxt.last() {
            nxt.pop();
            rem += 1;
        }
        if let Some(last) = nxt.last_mut() {
            *last -= 1;
            rem += 1;
            let cap = *last;
            while rem > 0 {
                let p = rem.min(cap);
                nxt.push(p);
                rem -= p;
            }
            self.next = Some(nxt);
        }
        Some(Partition { parts: cur })
    }
}

pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    partitions(n).collect()
}

/// p(0..=n) by Euler's pentagonal recurrence.
pub fn partition_counts(n: usize) -> Vec<BigUint> {
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::one());
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let plus = k % 2 == 1;
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if plus {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p.into_iter().map(|v| v.to_biguint().expect("p(n) is positive")).collect()
}

pub fn partition_count(n: usize) -> BigUint {
    partition_counts(n).pop().unwrap()
}

pub fn conjugate_partition(lambda: &Partition) -> Partition {
    let first = lambda.first();
    let parts = (0..first).map(|j| lambda.parts.iter().take_while(|&&l| l > j).count()).collect();
    Partition { parts }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// d_λ = n! det(1/(λ_i - i + j)!), with 1/m! = 0 for m < 0.
pub fn dim_partition(lambda: &Partition) -> BigUint {
    let d = det_dim(lambda);
    debug_assert_eq!(d, hook_length_dim(lambda), "determinant and hook formulas disagree on {lambda}");
    d
}

fn det_dim(lambda: &Partition) -> BigUint {
    let k = lambda.len();
    if k == 0 {
        return BigUint::one();
    }
    let n = lambda.size();
    let fact: Vec<BigInt> = (0..=n + k).map(|m| BigInt::from(factorial(m))).collect();
    let mut a: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let m = lambda.parts[i] as i64 - i as i64 + j as i64;
                    if m < 0 {
                        BigRational::zero()
                    } else {
                        BigRational::new(BigInt::one(), fact[m as usize].clone())
                    }
                })
                .collect()
        })
        .collect();
    let det = determinant(&mut a);
    let d = det * BigRational::from_integer(fact[n].clone());
    assert!(d.is_integer() && !d.is_negative(), "determinant dimension is not a natural number");
    d.to_integer().to_biguint().unwrap()
}

fn determinant(a: &mut [Vec<BigRational>]) -> BigRational {
    let k = a.len();
    let mut det = BigRational::one();
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..k {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..k {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// n! / Π hooks. Independent check on [`dim_partition`].
pub fn hook_length_dim(lambda: &Partition) -> BigUint {
    let conj = conjugate_partition(lambda);
    let mut hooks = BigUint::one();
    for (i, &l) in lambda.parts.iter().enumerate() {
        for j in 0..l {
            hooks *= (l - j + conj.parts[j] - i - 1) as u64;
        }
    }
    factorial(lambda.size()) / hooks
}

/// ln d_λ via hook lengths, for partitions far too large for exact work.
pub fn ln_dim(parts: &[usize]) -> f64 {
    let n: usize = parts.iter().sum();
    let first = parts.first().copied().unwrap_or(0);
    let mut col = vec![0usize; first];
    for &l in parts {
        for c in col.iter_mut().take(l) {
            *c += 1;
        }
    }
    let mut s = ln_factorial(n);
    for (i, &l) in parts.iter().enumerate() {
        for j in 0..l {
            s -= ((l - j + col[j] - i - 1) as f64).ln();
        }
    }
    s
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// r(λ) = Σ_j [λ_j² - (2j - 1)λ_j] / (n(n - 1)), j counted from 1.
pub fn r_of_partition(lambda: &Partition) -> Result<BigRational> {
    let n = lambda.size() as i64;
    if n < 2 {
        return Err(Error::NTooSmall("r(lambda)", 2));
    }
    let num: i64 = lambda
        .parts
        .iter()
        .enumerate()
        .map(|(idx, &l)| {
            let (l, j) = (l as i64, idx as i64 + 1);
            l * l - (2 * j - 1) * l
        })
        .sum();
    Ok(BigRational::new(num.into(), (n * (n - 1)).into()))
}

/// χ_λ on the class of cycle type μ (any order of μ's parts), by rim-hook
/// removal on the beta-set of λ.
pub fn mn_character(lambda: &Partition, mu: &[usize]) -> Result<i64> {
    if lambda.size() != mu.iter().sum::<usize>() {
        return Err(Error::SizeMismatch(format!(
            "|lambda| = {} but cycle type {mu:?} has size {}",
            lambda.size(),
            mu.iter().sum::<usize>()
        )));
    }
    let mut mu: Vec<usize> = mu.iter().copied().filter(|&m| m > 0).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    let k = lambda.len();
    let beta: Vec<usize> = lambda.parts.iter().enumerate().map(|(i, &l)| l + k - 1 - i).collect();
    Ok(mn_beta(beta, &mu))
}

fn mn_beta(beta: Vec<usize>, mu: &[usize]) -> i64 {
    let Some((&h, rest)) = mu.split_first() else {
        return 1;
    };
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < h || beta.contains(&(b - h)) {
            continue;
        }
        let target = b - h;
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_beta(nb, rest);
    }
    total
}

/// Cycle type of a permutation given in one-line form, parts descending.
pub fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition { parts }
}

/// Size of the S_n class with cycle type μ: n! / Π_i i^{m_i} m_i!.
pub fn cycle_class_size(mu: &Partition) -> BigUint {
    let n = mu.size();
    let mut z = BigUint::one();
    let mut i = 0;
    while i < mu.parts.len() {
        let p = mu.parts[i];
        let m = mu.parts[i..].iter().take_while(|&&q| q == p).count();
        z *= BigUint::from(p).pow(m as u32) * factorial(m);
        i += m;
    }
    factorial(n) / z
}

#[cfg(test)]
pub(crate) fn biguint_to_f64(v: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_order() {
        let got: Vec<String> = enumerate_partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["4", "3.1", "2.2", "2.1.1", "1.1.1.1"]);
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(1), vec![p(&[1])]);
    }

    #[test]
    fn counts_match_enumeration() {
        let counts = partition_counts(30);
        for n in 0..=30 {
            assert_eq!(BigUint::from(partitions(n).count()), counts[n], "n = {n}");
        }
        assert_eq!(partition_count(100).to_string(), "190569292");
        assert_eq!(partition_count(200).to_string(), "3972999029388");
    }

    #[test]
    fn named_dimensions() {
        assert_eq!(dim_partition(&p(&[5])), BigUint::one());
        assert_eq!(dim_partition(&p(&[3, 1])), BigUint::from(3u32));
        assert_eq!(dim_partition(&p(&[2, 2])), BigUint::from(2u32));
        for n in 4..12 {
            assert_eq!(dim_partition(&p(&[n - 1, 1])), BigUint::from(n - 1));
            assert_eq!(dim_partition(&p(&[n - 2, 2])), BigUint::from(n * (n - 3) / 2));
        }
        assert_eq!(dim_partition(&Partition::empty()), BigUint::one());
    }

    #[test]
    fn ratio_values() {
        assert_eq!(r_of_partition(&p(&[4])).unwrap(), BigRational::one());
        assert_eq!(r_of_partition(&p(&[3, 1])).unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(r_of_partition(&Partition::column(6)).unwrap(), -BigRational::one());
        assert!(r_of_partition(&p(&[1])).is_err());
        for lam in enumerate_partitions(7) {
            let via_content = BigRational::new((2 * lam.content()).into(), 42.into());
            assert_eq!(r_of_partition(&lam).unwrap(), via_content);
        }
    }

    #[test]
    fn conjugation() {
        assert_eq!(conjugate_partition(&p(&[3, 1])), p(&[2, 1, 1]));
        assert_eq!(conjugate_partition(&p(&[2, 2])), p(&[2, 2]));
        assert_eq!(conjugate_partition(&p(&[5])), Partition::column(5));
        assert_eq!(conjugate_partition(&Partition::empty()), Partition::empty());
    }

    #[test]
    fn mn_examples() {
        assert_eq!(mn_character(&p(&[4]), &[2, 1, 1]).unwrap(), 1);
        assert_eq!(mn_character(&p(&[1, 1, 1]), &[3]).unwrap(), 1);
        assert_eq!(mn_character(&p(&[1, 1, 1]), &[2, 1]).unwrap(), -1);
        for n in 3..9 {
            let mut tau = vec![2];
            tau.extend(std::iter::repeat_n(1, n - 2));
            assert_eq!(mn_character(&p(&[n - 1, 1]), &tau).unwrap(), n as i64 - 3);
        }
        assert!(mn_character(&p(&[2]), &[1]).is_err());
    }

    #[test]
    fn ln_dim_matches_exact() {
        for lam in enumerate_partitions(9) {
            let exact = biguint_to_f64(&dim_partition(&lam)).ln();
            assert!((ln_dim(lam.parts()) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn display_round_trip() {
        for lam in enumerate_partitions(6).into_iter().chain([Partition::empty()]) {
            assert_eq!(lam.to_string().parse::<Partition>().unwrap(), lam);
        }
        assert!("1.2".parse::<Partition>().is_err());
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 1..8 {
            let total: BigUint = partitions(n).map(|mu| cycle_class_size(&mu)).sum();
            assert_eq!(total, factorial(n));
        }
    }
}
