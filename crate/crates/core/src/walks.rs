//! Walk measures, their Fourier scalars, closed-form eigenvalues and
//! spectra.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::classes::{support_class_of, support_classes, SupportClass};
use crate::error::{Error, Result};
use crate::group::{cyclic_group, GroupTable};
use crate::partitions::{enumerate_partitions, r_of_partition, Partition};
use crate::reps::{irrep_dimension_with, labels_for, support_characters_with, IrrepLabel};
use crate::scalar::{rat, rat_int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkKind {
    /// Random transpositions on S_n.
    Sym,
    /// Transpose two coordinates, randomize both independently.
    Independent,
    /// Transpose two coordinates, randomize them by g and g⁻¹.
    Paired,
}

impl FromStr for WalkKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(WalkKind::Sym),
            "independent" => Ok(WalkKind::Independent),
            "paired" => Ok(WalkKind::Paired),
            _ => Err(Error::Unsupported(format!("unknown walk {s:?} (sym|independent|paired)"))),
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Sym => "sym",
            WalkKind::Independent => "independent",
            WalkKind::Paired => "paired",
        })
    }
}

/// A class-function probability on G≀S_n given per support class as the
/// mass of each single element. The symmetric-group walk lives on the
/// wreath product over the trivial group.
#[derive(Clone, Debug)]
pub struct WalkMeasure {
    pub kind: WalkKind,
    pub group: Arc<GroupTable>,
    pub n: usize,
    pub class_probs: BTreeMap<SupportClass, BigRational>,
}

pub fn build_measure(kind: WalkKind, g: Arc<GroupTable>, n: usize) -> Result<WalkMeasure> {
    if n < 2 {
        return Err(Error::NTooSmall("walk measure", 2));
    }
    let nn = n as i64;
    let mut probs = BTreeMap::new();
    let group = match kind {
        WalkKind::Sym => {
            probs.insert(SupportClass::Identity, rat(1, nn));
            probs.insert(SupportClass::V(0), rat(2, nn * nn));
            Arc::new(cyclic_group(1)?)
        }
        WalkKind::Independent | WalkKind::Paired => {
            let go = g.order as i64;
            probs.insert(SupportClass::Identity, rat(1, go * nn));
            for k in 1..g.num_classes() {
                probs.insert(SupportClass::U(k), rat(1, go * nn * nn));
            }
            if kind == WalkKind::Independent {
                for k in 0..g.num_classes() {
                    probs.insert(SupportClass::V(k), rat(2, go * go * nn * nn));
                }
            } else {
                probs.insert(SupportClass::V(0), rat(2, go * nn * nn));
            }
            g
        }
    };
    Ok(WalkMeasure { kind, group, n, class_probs: probs })
}

impl WalkMeasure {
    pub fn prob_of_class(&self, tag: SupportClass) -> BigRational {
        self.class_probs.get(&tag).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Per-element mass of a structured element.
    pub fn prob_of(&self, w: &crate::group::WreathElement) -> BigRational {
        support_class_of(w, &self.group).map(|t| self.prob_of_class(t)).unwrap_or_else(BigRational::zero)
    }

    /// Σ class size × per-element mass; exactly 1 for a valid measure.
    pub fn total_mass(&self) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for c in support_classes(&self.group, self.n)? {
            total += self.prob_of_class(c.tag) * BigRational::from_integer(c.size.into());
        }
        Ok(total)
    }

    /// The measure as a density on a wreath table for the same (G, n).
    pub fn density_on(&self, table: &GroupTable) -> Result<Vec<BigRational>> {
        let info = table
            .wreath
            .as_ref()
            .filter(|w| w.n == self.n && w.base.order == self.group.order)
            .ok_or_else(|| Error::Unsupported(format!("table {} does not match the walk's group", table.name)))?;
        Ok(info.elements.iter().map(|w| self.prob_of(w)).collect())
    }

    pub fn labels(&self, max_labels: usize) -> Result<Vec<IrrepLabel>> {
        match self.kind {
            WalkKind::Sym => Ok(enumerate_partitions(self.n).into_iter().map(|p| IrrepLabel::new(vec![p])).collect()),
            _ => {
                self.group.char_table()?;
                labels_for(self.group.num_classes(), self.n, max_labels)
            }
        }
    }
}

fn r_term(lam: &Partition) -> BigRational {
    if lam.size() < 2 {
        BigRational::zero()
    } else {
        r_of_partition(lam).expect("size checked")
    }
}

/// Closed-form eigenvalue of the walk at an irrep label.
pub fn eigenvalue(label: &IrrepLabel, measure: &WalkMeasure) -> BigRational {
    let n = measure.n as i64;
    let nsq = rat(1, n * n);
    let slot = |j: usize| {
        let nj = label.type_comp[j] as i64;
        rat_int(nj * (nj - 1)) * &nsq * r_term(&label.parts[j])
    };
    match measure.kind {
        WalkKind::Sym => rat(1, n) + rat(n - 1, n) * r_term(&label.parts[0]),
        WalkKind::Independent => rat_int(label.type_comp[0]) * &nsq + slot(0),
        WalkKind::Paired => {
            // all mass sits on cycle product e, where slot j contributes 1/d_j
            let dims = measure.group.irrep_dims().expect("labels exist only with a character table");
            let mut v = rat_int(label.type_comp[0]) * &nsq;
            for (j, &d) in dims.iter().enumerate() {
                v += slot(j) / rat_int(d as i64);
            }
            v
        }
    }
}

/// (1/d) Σ_i P_i |C_i| χ(C_i) over the support classes.
pub fn fourier_class_function<T: Scalar>(measure: &WalkMeasure, label: &IrrepLabel, chars: &[Vec<Complex<T>>]) -> Result<Complex<T>> {
    let ch = support_characters_with(label, chars)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for c in support_classes(&measure.group, measure.n)? {
        let p = measure.prob_of_class(c.tag);
        if p.is_zero() {
            continue;
        }
        let w = T::from_ratio(&(p * BigRational::from_integer(c.size.into())));
        let chi = match c.tag {
            SupportClass::Identity => Complex::new(ch.chi_e.clone(), T::zero()),
            SupportClass::U(k) => ch.chi_u[k - 1].clone(),
            SupportClass::V(k) => ch.chi_v[k].clone(),
        };
        acc = acc + chi.scale(w);
    }
    Ok(acc.unscale(ch.chi_e))
}

/// An eigenvalue with its multiplicity Σ d_ρ² over the labels sharing it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralLine {
    pub value: BigRational,
    pub multiplicity: BigUint,
    pub witness: Option<IrrepLabel>,
}

/// Exact spectrum, descending by value, deduplicated exactly.
pub fn spectrum(g: Arc<GroupTable>, n: usize, kind: WalkKind, max_labels: usize) -> Result<Vec<SpectralLine>> {
    let measure = build_measure(kind, g, n)?;
    spectrum_of(&measure, max_labels)
}

pub fn spectrum_of(measure: &WalkMeasure, max_labels: usize) -> Result<Vec<SpectralLine>> {
    let labels = measure.labels(max_labels)?;
    let dims = match measure.kind {
        WalkKind::Sym => vec![1],
        _ => measure.group.irrep_dims()?,
    };
    let per_label: Vec<(BigRational, BigUint)> = labels
        .par_iter()
        .map(|l| {
            let d = irrep_dimension_with(l, &dims);
            (eigenvalue(l, measure), &d * &d)
        })
        .collect();
    let mut lines: BTreeMap<BigRational, SpectralLine> = BTreeMap::new();
    for (label, (value, mult)) in labels.into_iter().zip(per_label) {
        lines
            .entry(value.clone())
            .and_modify(|l| l.multiplicity += &mult)
            .or_insert(SpectralLine { value, multiplicity: mult, witness: Some(label) });
    }
    Ok(lines.into_values().rev().collect())
}

pub fn spectrum_total(lines: &[SpectralLine]) -> BigUint {
    lines.iter().map(|l| &l.multiplicity).sum()
}

/// (1/|G≀S_n|) Σ mult · value^k, the k-step return probability.
pub fn return_probability<T: Scalar>(lines: &[SpectralLine], k: u32) -> T {
    let mut acc = T::zero();
    for l in lines {
        acc = acc + T::from_bigint(&l.multiplicity.clone().into()) * T::from_ratio(&l.value).powu(k);
    }
    acc / T::from_bigint(&spectrum_total(lines).into())
}

/// Return probability for large k, evaluated in the log domain.
pub fn return_probability_ln(lines: &[SpectralLine], k: u64) -> f64 {
    let mut acc = crate::logsum::SignedLogSum::default();
    for l in lines {
        acc.push_term(crate::scalar::ln_abs_bigint(&l.multiplicity.clone().into()), &l.value, k);
    }
    let total = crate::scalar::ln_abs_bigint(&spectrum_total(lines).into());
    acc.scaled(-total)
}
