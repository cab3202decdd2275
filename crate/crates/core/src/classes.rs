//! Cycle products, type matrices, and conjugacy-class counting and sizes in
//! G≀S_n.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::{wreath_inverse, wreath_multiply_unchecked, GroupTable, WreathElement, WreathIndexer};
use crate::partitions::{factorial, partition_counts};

/// One entry per cycle of π: its length and the G-class of the product of
/// the coordinates read along the cycle.
///
/// Each cycle is read starting at its smallest index i as
/// x_i · x_{π⁻¹(i)} · x_{π⁻²(i)} ⋯, which is the coordinate the cycle
/// contributes to the element's power (x;π)^len. Reading forwards along π
/// gives the reversed product, which is not conjugate in general for
/// nonabelian G.
pub fn cycle_products(w: &WreathElement, g: &GroupTable) -> Vec<(usize, usize)> {
    let n = w.n();
    let mut pre = vec![0; n];
    for (i, &p) in w.perm.iter().enumerate() {
        pre[p] = i;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut prod, mut len, mut i) = (0usize, 0usize, start);
        while !seen[i] {
            seen[i] = true;
            prod = g.mul(prod, w.coords[i]);
            len += 1;
            i = pre[i];
        }
        out.push((len, g.class_of[prod]));
    }
    out
}

/// Sparse s×n type matrix: `entries[(i, j)]` counts cycles of length j whose
/// product lies in G-class i (classes 0-based, lengths 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeMatrix {
    pub s: usize,
    pub n: usize,
    pub entries: BTreeMap<(usize, usize), usize>,
}

impl TypeMatrix {
    pub fn get(&self, class: usize, len: usize) -> usize {
        self.entries.get(&(class, len)).copied().unwrap_or(0)
    }

    /// Column sums: the cycle type of the underlying permutation, indexed by
    /// length 1..=n.
    pub fn cycle_type_counts(&self) -> Vec<usize> {
        let mut v = vec![0; self.n + 1];
        for (&(_, j), &a) in &self.entries {
            v[j] += a;
        }
        v
    }

    pub fn identity(s: usize, n: usize) -> Self {
        TypeMatrix { s, n, entries: BTreeMap::from([((0, 1), n)]) }
    }
}

impl fmt::Display for TypeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|(&(i, j), a)| format!("a[{},{}]={a}", i + 1, j)).collect();
        f.write_str(&cells.join(" "))
    }
}

pub fn type_matrix(w: &WreathElement, g: &GroupTable) -> TypeMatrix {
    let mut entries = BTreeMap::new();
    for (len, class) in cycle_products(w, g) {
        *entries.entry((class, len)).or_insert(0) += 1;
    }
    TypeMatrix { s: g.num_classes(), n: w.n(), entries }
}

/// Σ over compositions (n_1..n_s) of n of Π p(n_j).
pub fn class_count_for(s: usize, n: usize) -> BigUint {
    let p = partition_counts(n);
    let mut acc: Vec<BigUint> = vec![BigUint::from(0u32); n + 1];
    acc[0] = BigUint::one();
    for _ in 0..s {
        let mut next = vec![BigUint::from(0u32); n + 1];
        for (a, va) in acc.iter().enumerate() {
            if va.bits() == 0 {
                continue;
            }
            for b in 0..=n - a {
                next[a + b] += va * &p[b];
            }
        }
        acc = next;
    }
    acc.swap_remove(n)
}

pub fn class_count(g: &GroupTable, n: usize) -> BigUint {
    class_count_for(g.num_classes(), n)
}

/// |G|^n n! / Π_{i,j} (j|G|/|C_i|)^{a_ij} a_ij!.
pub fn class_size(t: &TypeMatrix, g: &GroupTable) -> BigUint {
    let go = BigUint::from(g.order);
    let num = go.pow(t.n as u32) * factorial(t.n);
    let sizes = g.class_sizes();
    let mut den = BigRational::one();
    for (&(i, j), &a) in &t.entries {
        let base = BigRational::new((j * g.order).into(), sizes[i].into());
        den *= num_traits::pow(base, a) * BigRational::from_integer(factorial(a).into());
    }
    let q = BigRational::from_integer(num.into()) / den;
    assert!(q.is_integer(), "class size of {t} is not an integer");
    q.to_integer().to_biguint().unwrap()
}

/// The classes carrying mass in the walk measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SupportClass {
    Identity,
    /// One coordinate in G-class k (k ≥ 1), permutation trivial.
    U(usize),
    /// A transposition whose cycle product lies in G-class k.
    V(usize),
}

impl fmt::Display for SupportClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportClass::Identity => f.write_str("e"),
            SupportClass::U(k) => write!(f, "u{}", k + 1),
            SupportClass::V(k) => write!(f, "v{}", k + 1),
        }
    }
}

impl SupportClass {
    /// A representative type matrix.
    pub fn type_matrix(&self, s: usize, n: usize) -> TypeMatrix {
        let mut entries = BTreeMap::new();
        match *self {
            SupportClass::Identity => {
                entries.insert((0, 1), n);
            }
            SupportClass::U(k) => {
                if n > 1 {
                    entries.insert((0, 1), n - 1);
                }
                entries.insert((k, 1), 1);
            }
            SupportClass::V(k) => {
                if n > 2 {
                    entries.insert((0, 1), n - 2);
                }
                entries.insert((k, 2), 1);
            }
        }
        TypeMatrix { s, n, entries }
    }
}

/// Classifies an element into a support class, or `None` off the support.
pub fn support_class_of(w: &WreathElement, g: &GroupTable) -> Option<SupportClass> {
    let moved: Vec<usize> = (0..w.n()).filter(|&i| w.perm[i] != i).collect();
    match moved.len() {
        0 => {
            let hot: Vec<usize> = (0..w.n()).filter(|&i| w.coords[i] != 0).collect();
            match hot.as_slice() {
                [] => Some(SupportClass::Identity),
                [i] => Some(SupportClass::U(g.class_of[w.coords[*i]])),
                _ => None,
            }
        }
        2 => {
            let (p, q) = (moved[0], moved[1]);
            let clean = (0..w.n()).all(|i| i == p || i == q || w.coords[i] == 0);
            clean.then(|| SupportClass::V(g.class_of[g.mul(w.coords[p], w.coords[q])]))
        }
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct SupportClassInfo {
    pub tag: SupportClass,
    pub size: BigUint,
    pub representative: String,
}

/// Identity, then u-classes k = 2..s, then v-classes k = 1..s.
pub fn support_classes(g: &GroupTable, n: usize) -> Result<Vec<SupportClassInfo>> {
    if n < 2 {
        return Err(Error::NTooSmall("support classes", 2));
    }
    let s = g.num_classes();
    let tags = std::iter::once(SupportClass::Identity)
        .chain((1..s).map(SupportClass::U))
        .chain((0..s).map(SupportClass::V));
    Ok(tags
        .map(|tag| {
            let t = tag.type_matrix(s, n);
            SupportClassInfo { tag, size: class_size(&t, g), representative: t.to_string() }
        })
        .collect())
}

/// Counts conjugacy classes of G≀S_n without a multiplication table: orbits
/// of conjugation by a generating set, over structured elements.
pub fn brute_force_class_count(g: &GroupTable, n: usize, max_order: usize) -> Result<usize> {
    Ok(brute_force_classes(g, n, max_order)?.len())
}

/// Conjugacy classes of G≀S_n as lists of dense indices (see
/// [`WreathIndexer`]), ordered by smallest member.
pub fn brute_force_classes(g: &GroupTable, n: usize, max_order: usize) -> Result<Vec<Vec<usize>>> {
    let ix = WreathIndexer::new(g.order, n);
    let order = (g.order as u128).pow(n as u32) * (1..=n as u128).product::<u128>();
    if order > max_order as u128 {
        return Err(Error::CapExceeded { what: "wreath order", value: order.to_string(), cap: max_order as u128, flag: "max-order" });
    }
    let order = order as usize;
    let mut gens = Vec::new();
    if n >= 2 {
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        gens.push(WreathElement { coords: vec![0; n], perm: swap });
        gens.push(WreathElement { coords: vec![0; n], perm: (0..n).map(|i| (i + 1) % n).collect() });
    }
    for x in 1..g.order {
        let mut coords = vec![0; n];
        coords[0] = x;
        gens.push(WreathElement { coords, perm: (0..n).collect() });
    }
    let gen_pairs: Vec<(WreathElement, WreathElement)> = gens.iter().map(|s| (s.clone(), wreath_inverse(s, g))).collect();

    let mut parent: Vec<usize> = (0..order).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for idx in 0..order {
        let x = ix.element(idx);
        for (s, s_inv) in &gen_pairs {
            let y = wreath_multiply_unchecked(&wreath_multiply_unchecked(s, &x, g), s_inv, g);
            let (a, b) = (find(&mut parent, idx), find(&mut parent, ix.index(&y)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for idx in 0..order {
        let r = find(&mut parent, idx);
        groups.entry(r).or_default().push(idx);
    }
    Ok(groups.into_values().collect())
}

/// Groups a list of elements by type matrix, keeping first-seen order.
pub fn group_by_type_matrix(elements: &[WreathElement], g: &GroupTable) -> Vec<Vec<usize>> {
    let mut order: Vec<TypeMatrix> = Vec::new();
    let mut map: HashMap<TypeMatrix, Vec<usize>> = HashMap::new();
    for (i, w) in elements.iter().enumerate() {
        let t = type_matrix(w, g);
        map.entry(t.clone())
            .or_insert_with(|| {
                order.push(t);
                Vec::new()
            })
            .push(i);
    }
    order.into_iter().map(|t| map.remove(&t).unwrap()).collect()
}

/// Checks that every class size divides the group order.
pub fn sizes_divide(order: &BigUint, sizes: &[BigUint]) -> bool {
    sizes.iter().all(|s| order.is_multiple_of(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, build_wreath_table, DEFAULT_MAX_ORDER};
    use std::sync::Arc;

    fn el(c: &[usize], p: &[usize]) -> WreathElement {
        WreathElement::new(c.to_vec(), p.to_vec()).unwrap()
    }

    #[test]
    fn cycle_product_examples() {
        let z2 = build_group("Z:2").unwrap();
        let n = 5;
        let id = WreathElement::identity(n);
        assert_eq!(cycle_products(&id, &z2), vec![(1, 0); n]);
        let u = el(&[0, 0, 1, 0, 0], &[0, 1, 2, 3, 4]);
        let mut cp = cycle_products(&u, &z2);
        cp.sort();
        assert_eq!(cp, vec![(1, 0), (1, 0), (1, 0), (1, 0), (1, 1)]);
        let odd = el(&[1, 0, 0, 0, 0], &[1, 0, 2, 3, 4]);
        let t = type_matrix(&odd, &z2);
        assert_eq!((t.get(0, 1), t.get(1, 2)), (3, 1));
        let even = el(&[1, 1, 0, 0, 0], &[1, 0, 2, 3, 4]);
        let t = type_matrix(&even, &z2);
        assert_eq!((t.get(0, 1), t.get(0, 2)), (3, 1));
        assert_eq!(type_matrix(&id, &z2), TypeMatrix::identity(2, n));
    }

    #[test]
    fn counts() {
        let z2 = build_group("Z:2").unwrap();
        let s3 = build_group("S:3").unwrap();
        assert_eq!(class_count(&z2, 1), BigUint::from(2u32));
        assert_eq!(class_count(&s3, 1), BigUint::from(3u32));
        assert_eq!(class_count(&z2, 2), BigUint::from(5u32));
        assert_eq!(class_count(&z2, 3), BigUint::from(10u32));
    }

    #[test]
    fn support_sizes() {
        let z2 = build_group("Z:2").unwrap();
        for n in 2..7 {
            let sizes: Vec<BigUint> = support_classes(&z2, n).unwrap().into_iter().map(|c| c.size).collect();
            let n = n as u32;
            assert_eq!(sizes, vec![1u32, n, n * (n - 1), n * (n - 1)].into_iter().map(BigUint::from).collect::<Vec<_>>());
        }
        let z3 = build_group("Z:3").unwrap();
        let info = support_classes(&z3, 4).unwrap();
        let v_sizes: Vec<_> = info.iter().filter(|c| matches!(c.tag, SupportClass::V(_))).map(|c| c.size.clone()).collect();
        assert_eq!(v_sizes, vec![BigUint::from(18u32); 3]);
        let s3 = build_group("S:3").unwrap();
        for n in 2..6usize {
            for c in support_classes(&s3, n).unwrap() {
                let want = match c.tag {
                    SupportClass::Identity => 1,
                    SupportClass::U(k) => n * s3.classes[k].len(),
                    SupportClass::V(k) => n * (n - 1) / 2 * 6 * s3.classes[k].len(),
                };
                assert_eq!(c.size, BigUint::from(want), "{}", c.tag);
            }
        }
        assert!(support_classes(&z2, 1).is_err());
    }

    #[test]
    fn type_matrices_are_conjugacy_classes() {
        let s3 = Arc::new(build_group("S:3").unwrap());
        let z2 = Arc::new(build_group("Z:2").unwrap());
        let z3 = Arc::new(build_group("Z:3").unwrap());
        // S3 wr S3 exercises 3-cycles with nonabelian coordinates
        for (g, n) in [(z2.clone(), 2), (z2, 3), (z3, 2), (s3.clone(), 2), (s3, 3)] {
            let t = build_wreath_table(g.clone(), n, DEFAULT_MAX_ORDER).unwrap();
            let mut by_type = group_by_type_matrix(&t.wreath.as_ref().unwrap().elements, &g);
            by_type.sort();
            assert_eq!(by_type, t.classes, "{}", t.name);
            assert_eq!(BigUint::from(t.num_classes()), class_count(&g, n));
            let total: BigUint = t.classes.iter().map(|c| class_size(&type_matrix(&t.wreath.as_ref().unwrap().elements[c[0]], &g), &g)).sum();
            assert_eq!(total, BigUint::from(t.order));
            for c in &t.classes {
                let w = &t.wreath.as_ref().unwrap().elements[c[0]];
                assert_eq!(class_size(&type_matrix(w, &g), &g), BigUint::from(c.len()));
            }
            let bf = brute_force_classes(&g, n, DEFAULT_MAX_ORDER).unwrap();
            assert_eq!(bf, t.classes);
        }
    }

    #[test]
    fn cycle_product_is_power_coordinate() {
        let s3 = build_group("S:3").unwrap();
        let a = 1;
        let b = (1..6).find(|&b| s3.mul(a, b) != s3.mul(b, a)).unwrap();
        let w = el(&[a, b, 0], &[1, 2, 0]);
        let w2 = wreath_multiply_unchecked(&w, &w, &s3);
        let pow3 = wreath_multiply_unchecked(&w2, &w, &s3);
        assert!(pow3.perm.iter().enumerate().all(|(i, &p)| i == p));
        assert_eq!(cycle_products(&w, &s3), vec![(3, s3.class_of[pow3.coords[0]])]);
    }
}
