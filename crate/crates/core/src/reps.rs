//! Irreducible representations of G≀S_n: labels, dimensions, and character
//! values on the classes that carry the walk measures.

use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::classes::class_count;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::partitions::{dim_partition, factorial, partitions, r_of_partition, Partition};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_LABELS: usize = 2_000_000;

/// A type composition (n_1..n_s) with one partition of n_j per slot. Slot 0
/// belongs to the trivial irrep of G.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepLabel {
    pub type_comp: Vec<usize>,
    pub parts: Vec<Partition>,
}

impl IrrepLabel {
    pub fn new(parts: Vec<Partition>) -> Self {
        IrrepLabel { type_comp: parts.iter().map(Partition::size).collect(), parts }
    }

    pub fn n(&self) -> usize {
        self.type_comp.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        let n = self.n();
        self.type_comp[0] == n && self.parts[0] == Partition::row(n)
    }

    pub fn trivial(s: usize, n: usize) -> Self {
        let mut parts = vec![Partition::empty(); s];
        parts[0] = Partition::row(n);
        Self::new(parts)
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comp: Vec<String> = self.type_comp.iter().map(|x| x.to_string()).collect();
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})[{}]", comp.join(","), parts.join("|"))
    }
}

/// Compositions of n into s nonnegative parts, lexicographically decreasing.
pub fn compositions(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=left).rev() {
            cur.push(first);
            rec(left - first, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        rec(n, s, &mut Vec::with_capacity(s), &mut out);
    }
    out
}

/// All labels for s base irreps, composition-major then slot by slot in
/// partition order.
pub fn labels_for(s: usize, n: usize, max_labels: usize) -> Result<Vec<IrrepLabel>> {
    let count = crate::classes::class_count_for(s, n);
    check_label_cap(&count, max_labels)?;
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    for comp in compositions(n, s) {
        let slots: Vec<Vec<Partition>> = comp.iter().map(|&m| partitions(m).collect()).collect();
        let mut idx = vec![0usize; s];
        'labels: loop {
            out.push(IrrepLabel { type_comp: comp.clone(), parts: (0..s).map(|j| slots[j][idx[j]].clone()).collect() });
            // odometer, last slot fastest
            let mut j = s;
            loop {
                if j == 0 {
                    break 'labels;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < slots[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
    Ok(out)
}

fn check_label_cap(count: &BigUint, max_labels: usize) -> Result<()> {
    if *count > BigUint::from(max_labels) {
        return Err(Error::CapExceeded { what: "label count", value: count.to_string(), cap: max_labels as u128, flag: "max-labels" });
    }
    Ok(())
}

pub fn enumerate_labels(g: &GroupTable, n: usize, max_labels: usize) -> Result<Vec<IrrepLabel>> {
    g.char_table()?;
    if n == 0 {
        return Err(Error::NTooSmall("label enumeration", 1));
    }
    check_label_cap(&class_count(g, n), max_labels)?;
    labels_for(g.num_classes(), n, max_labels)
}

/// Multinomial(n; n_1..n_s) · Π d_j^{n_j} · Π d_{λ_j}.
pub fn irrep_dimension_with(label: &IrrepLabel, dims: &[u64]) -> BigUint {
    let mut d = factorial(label.n());
    for (j, (&nj, lam)) in label.type_comp.iter().zip(&label.parts).enumerate() {
        d /= factorial(nj);
        d *= BigUint::from(dims[j]).pow(nj as u32) * dim_partition(lam);
    }
    d
}

pub fn irrep_dimension(label: &IrrepLabel, g: &GroupTable) -> Result<BigUint> {
    Ok(irrep_dimension_with(label, &g.irrep_dims()?))
}

/// Character values of one irrep on the support classes.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportCharacter<T> {
    pub dim: BigUint,
    /// At the identity; equals `dim`.
    pub chi_e: T,
    /// Index k - 1 holds the value on the u-class of G-class k, k = 1..s-1.
    pub chi_u: Vec<Complex<T>>,
    /// Index k holds the value on the v-class of G-class k, k = 0..s-1.
    pub chi_v: Vec<Complex<T>>,
}

pub fn support_characters<T: Scalar>(label: &IrrepLabel, g: &GroupTable) -> Result<SupportCharacter<T>> {
    let chars = g
        .char_table()?
        .to_scalar::<T>()
        .ok_or_else(|| Error::Unsupported(format!("{} has float characters; use a float scalar", g.name)))?;
    support_characters_with(label, &chars)
}

/// As [`support_characters`] with a pre-converted character table.
pub fn support_characters_with<T: Scalar>(label: &IrrepLabel, chars: &[Vec<Complex<T>>]) -> Result<SupportCharacter<T>> {
    let n = label.n();
    if n < 2 {
        return Err(Error::NTooSmall("support characters", 2));
    }
    let s = chars.len();
    let dims: Vec<u64> = chars.iter().map(|row| row[0].re.to_f64().round() as u64).collect();
    let dim = irrep_dimension_with(label, &dims);
    let d = T::from_bigint(&dim.clone().into());
    let zero = Complex::new(T::zero(), T::zero());
    let mut chi_u = vec![zero.clone(); s.saturating_sub(1)];
    let mut chi_v = vec![zero; s];
    let nn = T::from_usize(n).unwrap();
    let pairs = T::from_usize(n * (n - 1)).unwrap();
    for (j, (&nj, lam)) in label.type_comp.iter().zip(&label.parts).enumerate() {
        if nj == 0 {
            continue;
        }
        let dj = chars[j][0].re.clone();
        let wu = d.clone() * T::from_usize(nj).unwrap() / (nn.clone() * dj.clone());
        let wv = if nj >= 2 {
            let r = T::from_ratio(&r_of_partition(lam)?);
            // the swap on ρ_j ⊗ ρ_j has trace χ_j(ab), hence χ_j/d_j² per slot
            d.clone() * T::from_usize(nj * (nj - 1)).unwrap() * r / (pairs.clone() * dj.clone() * dj)
        } else {
            T::zero()
        };
        for k in 0..s {
            let c = &chars[j][k];
            if k >= 1 {
                chi_u[k - 1] = chi_u[k - 1].clone() + c.clone().scale(wu.clone());
            }
            chi_v[k] = chi_v[k].clone() + c.clone().scale(wv.clone());
        }
    }
    Ok(SupportCharacter { chi_e: d, dim, chi_u, chi_v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::scalar::rat;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn z2_n2_labels() {
        let z2 = build_group("Z:2").unwrap();
        let got: Vec<String> = enumerate_labels(&z2, 2, DEFAULT_MAX_LABELS).unwrap().iter().map(|l| l.to_string()).collect();
        assert_eq!(got, ["(2,0)[2|-]", "(2,0)[1.1|-]", "(1,1)[1|1]", "(0,2)[-|2]", "(0,2)[-|1.1]"]);
        assert_eq!(enumerate_labels(&z2, 3, DEFAULT_MAX_LABELS).unwrap().len(), 10);
        let s3 = build_group("S:3").unwrap();
        assert_eq!(enumerate_labels(&s3, 1, DEFAULT_MAX_LABELS).unwrap().len(), 3);
        assert!(matches!(enumerate_labels(&z2, 30, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn slot_order_is_last_fastest() {
        let labels = labels_for(3, 4, DEFAULT_MAX_LABELS).unwrap();
        let two_two: Vec<String> = labels.iter().filter(|l| l.type_comp == [2, 2, 0]).map(|l| l.to_string()).collect();
        assert_eq!(two_two, ["(2,2,0)[2|2|-]", "(2,2,0)[2|1.1|-]", "(2,2,0)[1.1|2|-]", "(2,2,0)[1.1|1.1|-]"]);
    }

    #[test]
    fn dimensions() {
        let z2 = build_group("Z:2").unwrap();
        for n in 2..7 {
            let lab = IrrepLabel::new(vec![Partition::row(n - 1), Partition::row(1)]);
            assert_eq!(irrep_dimension(&lab, &z2).unwrap(), BigUint::from(n));
            assert_eq!(irrep_dimension(&IrrepLabel::trivial(2, n), &z2).unwrap(), BigUint::one());
        }
    }

    #[test]
    fn named_characters() {
        let z2 = build_group("Z:2").unwrap();
        let triv: SupportCharacter<BigRational> = support_characters(&IrrepLabel::trivial(2, 4), &z2).unwrap();
        assert_eq!(triv.dim, BigUint::one());
        assert!(triv.chi_u.iter().chain(&triv.chi_v).all(|c| c.re == rat(1, 1) && c.im == rat(0, 1)));
        let mixed = IrrepLabel::new(vec![Partition::row(1), Partition::row(1)]);
        let c: SupportCharacter<BigRational> = support_characters(&mixed, &z2).unwrap();
        assert_eq!(c.dim, BigUint::from(2u32));
        assert!(c.chi_v.iter().all(|v| v.re == rat(0, 1) && v.im == rat(0, 1)));
        let sign = IrrepLabel::new(vec![Partition::column(2), Partition::empty()]);
        let c: SupportCharacter<BigRational> = support_characters(&sign, &z2).unwrap();
        assert_eq!(c.chi_v[0].re, rat(-1, 1));
        let z3 = build_group("Z:3").unwrap();
        assert!(support_characters::<BigRational>(&IrrepLabel::trivial(3, 2), &z3).is_err());
        assert!(support_characters::<f64>(&IrrepLabel::trivial(3, 2), &z3).is_ok());
    }

    #[test]
    fn compositions_order() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(3, 1), vec![vec![3]]);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
    }
}
