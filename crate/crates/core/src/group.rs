//! Finite groups as multiplication tables, the built-in constructors, and
//! wreath-product element arithmetic.
//!
//! Permutations are stored in one-line form on `0..n`, so `perm[i]` is the
//! image of `i`; composition is right to left.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::partitions::{cycle_type, enumerate_partitions, mn_character, Partition};
use crate::scalar::{rat_int, Scalar};

pub const DEFAULT_MAX_ORDER: usize = 5000;
const CHAR_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum CharacterTable {
    /// Gaussian-rational entries.
    Exact(Vec<Vec<Complex<BigRational>>>),
    /// Float entries, compared with a 1e-9 tolerance.
    Float(Vec<Vec<Complex<f64>>>),
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        match self {
            CharacterTable::Exact(t) => t.len(),
            CharacterTable::Float(t) => t.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CharacterTable::Exact(_))
    }

    pub fn value_f64(&self, irrep: usize, class: usize) -> Complex<f64> {
        match self {
            CharacterTable::Exact(t) => {
                let v = &t[irrep][class];
                Complex::new(f64::from_ratio(&v.re), f64::from_ratio(&v.im))
            }
            CharacterTable::Float(t) => t[irrep][class],
        }
    }

    /// Irrep degrees, read off the identity column.
    pub fn dims(&self) -> Vec<u64> {
        (0..self.num_irreps()).map(|j| self.value_f64(j, 0).re.round() as u64).collect()
    }

    pub fn is_real(&self) -> bool {
        match self {
            CharacterTable::Exact(t) => t.iter().flatten().all(|c| c.im.is_zero()),
            CharacterTable::Float(t) => t.iter().flatten().all(|c| c.im.abs() < 1e-12),
        }
    }

    /// The table in scalar type `T`; `None` when a float table is requested
    /// in an exact type.
    pub fn to_scalar<T: Scalar>(&self) -> Option<Vec<Vec<Complex<T>>>> {
        match self {
            CharacterTable::Exact(t) => Some(
                t.iter()
                    .map(|row| row.iter().map(|c| Complex::new(T::from_ratio(&c.re), T::from_ratio(&c.im))).collect())
                    .collect(),
            ),
            CharacterTable::Float(t) => {
                if T::is_exact() {
                    return None;
                }
                Some(
                    t.iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| Complex::new(T::from_f64(c.re).unwrap(), T::from_f64(c.im).unwrap()))
                                .collect()
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Structural data kept for tables built from a wreath product.
#[derive(Clone, Debug)]
pub struct WreathInfo {
    pub base: Arc<GroupTable>,
    pub n: usize,
    pub elements: Vec<WreathElement>,
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    pub name: String,
    pub order: usize,
    mult: Vec<u32>,
    pub inv: Vec<usize>,
    pub labels: Vec<String>,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub char_table: Option<CharacterTable>,
    pub wreath: Option<WreathInfo>,
}

impl GroupTable {
    /// Validates the table and computes inverses and classes.
    pub fn from_mult(name: impl Into<String>, order: usize, mult: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        validate_mult(order, &mult)?;
        let inv = (0..order)
            .map(|a| (0..order).find(|&b| mult[a * order + b] == 0).expect("latin square has an inverse"))
            .collect();
        let labels = labels.unwrap_or_else(|| (0..order).map(|i| i.to_string()).collect());
        if labels.len() != order {
            return Err(Error::InvalidTable(format!("{} labels for order {order}", labels.len())));
        }
        let mut g = GroupTable {
            name: name.into(),
            order,
            mult,
            inv,
            labels,
            classes: Vec::new(),
            class_of: Vec::new(),
            char_table: None,
            wreath: None,
        };
        g.classes = conjugacy_classes(&g);
        g.class_of = vec![0; order];
        for (c, members) in g.classes.iter().enumerate() {
            for &x in members {
                g.class_of[x] = c;
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    pub fn char_table(&self) -> Result<&CharacterTable> {
        self.char_table.as_ref().ok_or(Error::MissingCharTable)
    }

    pub fn irrep_dims(&self) -> Result<Vec<u64>> {
        Ok(self.char_table()?.dims())
    }

    /// Attaches a character table after checking it.
    pub fn with_char_table(mut self, table: CharacterTable) -> Result<Self> {
        validate_char_table(&self, &table)?;
        self.char_table = Some(table);
        Ok(self)
    }
}

fn validate_mult(order: usize, mult: &[u32]) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidTable("order must be positive".into()));
    }
    if mult.len() != order * order {
        return Err(Error::InvalidTable(format!("table has {} entries, expected {}", mult.len(), order * order)));
    }
    if mult.iter().any(|&x| x as usize >= order) {
        return Err(Error::InvalidTable("entry out of range".into()));
    }
    for a in 0..order {
        if mult[a] as usize != a || mult[a * order] as usize != a {
            return Err(Error::InvalidTable(format!("element 0 is not an identity (fails at {a})")));
        }
    }
    let mut seen = vec![usize::MAX; order];
    for a in 0..order {
        for b in 0..order {
            let x = mult[a * order + b] as usize;
            if seen[x] == a {
                return Err(Error::InvalidTable(format!("row {a} repeats element {x}")));
            }
            seen[x] = a;
        }
    }
    seen.fill(usize::MAX);
    for b in 0..order {
        for a in 0..order {
            let x = mult[a * order + b] as usize;
            if seen[x] == b {
                return Err(Error::InvalidTable(format!("column {b} repeats element {x}")));
            }
            seen[x] = b;
        }
    }
    let m = |a: usize, b: usize| mult[a * order + b] as usize;
    // Light's test: checking middle factors from a generating set suffices.
    let middles: Vec<usize> = if order <= 256 { (0..order).collect() } else { generating_set(order, mult) };
    for &s in &middles {
        for x in 0..order {
            let xs = m(x, s);
            for y in 0..order {
                if m(xs, y) != m(x, m(s, y)) {
                    return Err(Error::InvalidTable(format!("not associative: ({x}*{s})*{y} != {x}*({s}*{y})")));
                }
            }
        }
    }
    Ok(())
}

fn generating_set(order: usize, mult: &[u32]) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut inside = vec![false; order];
    inside[0] = true;
    for cand in 1..order {
        if inside[cand] {
            continue;
        }
        gens.push(cand);
        inside.fill(false);
        inside[0] = true;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &s in &gens {
                let y = mult[x * order + s] as usize;
                if !inside[y] {
                    inside[y] = true;
                    queue.push(y);
                }
            }
        }
    }
    gens
}

/// Conjugacy classes by closing each element under all conjugations; classes
/// are listed by ascending minimal element, members ascending.
pub fn conjugacy_classes(g: &GroupTable) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; g.order];
    let mut classes = Vec::new();
    for x in 0..g.order {
        if assigned[x] {
            continue;
        }
        let mut class = Vec::new();
        for h in 0..g.order {
            let y = g.mul(g.mul(h, x), g.inv[h]);
            if !assigned[y] {
                assigned[y] = true;
                class.push(y);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

fn validate_char_table(g: &GroupTable, table: &CharacterTable) -> Result<()> {
    let s = g.num_classes();
    let rows = table.num_irreps();
    if rows != s {
        return Err(Error::InvalidCharTable(format!("{rows} rows but {s} classes")));
    }
    let width_ok = match table {
        CharacterTable::Exact(t) => t.iter().all(|r| r.len() == s),
        CharacterTable::Float(t) => t.iter().all(|r| r.len() == s),
    };
    if !width_ok {
        return Err(Error::InvalidCharTable(format!("every row needs {s} entries")));
    }
    let v = |i, k| table.value_f64(i, k);
    for k in 0..s {
        if (v(0, k) - Complex::new(1.0, 0.0)).norm() > CHAR_TOL {
            return Err(Error::InvalidCharTable("row 0 is not the trivial character".into()));
        }
    }
    let sizes = g.class_sizes();
    for i in 0..s {
        for j in i..s {
            let ip: Complex<f64> = (0..s).map(|k| v(i, k) * v(j, k).conj() * sizes[k] as f64).sum();
            let want = if i == j { g.order as f64 } else { 0.0 };
            if (ip - Complex::new(want, 0.0)).norm() > CHAR_TOL * g.order as f64 {
                return Err(Error::InvalidCharTable(format!("rows {i} and {j} fail orthogonality ({ip})")));
            }
        }
    }
    let dim_sq: f64 = (0..s).map(|i| v(i, 0).re.powi(2)).sum();
    if (dim_sq - g.order as f64).abs() > CHAR_TOL * g.order as f64 {
        return Err(Error::InvalidCharTable(format!("sum of squared degrees is {dim_sq}, not {}", g.order)));
    }
    if let CharacterTable::Exact(t) = table {
        // orthogonality above is float; repeat it exactly for exact tables
        for i in 0..s {
            for j in i..s {
                let mut ip = Complex::new(BigRational::zero(), BigRational::zero());
                for k in 0..s {
                    ip += t[i][k].clone() * t[j][k].conj() * Complex::new(rat_int(sizes[k]), BigRational::zero());
                }
                let want = if i == j { rat_int(g.order) } else { BigRational::zero() };
                if ip != Complex::new(want, BigRational::zero()) {
                    return Err(Error::InvalidCharTable(format!("rows {i} and {j} fail exact orthogonality")));
                }
            }
        }
    }
    Ok(())
}

pub fn build_group(spec: &str) -> Result<GroupTable> {
    let bad = || Error::BadGroupSpec(spec.to_string());
    if let Some(path) = spec.strip_prefix("file:") {
        return load_group_file(path);
    }
    let (kind, m) = spec.split_once(':').ok_or_else(bad)?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "Z" if m >= 1 => cyclic_group(m),
        "S" if (1..=6).contains(&m) => symmetric_group(m),
        _ => Err(bad()),
    }
}

pub fn cyclic_group(m: usize) -> Result<GroupTable> {
    let mult = (0..m).flat_map(|a| (0..m).map(move |b| ((a + b) % m) as u32)).collect();
    let g = GroupTable::from_mult(format!("Z:{m}"), m, mult, None)?;
    let table = if matches!(m, 1 | 2 | 4) {
        // i^(4jk/m) is a Gaussian integer for these m
        let unit = |e: usize| -> Complex<BigRational> {
            let (re, im) = match (e * 4 / m) % 4 {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            Complex::new(rat_int(re), rat_int(im))
        };
        CharacterTable::Exact((0..m).map(|j| (0..m).map(|k| unit((j * k) % m)).collect()).collect())
    } else {
        CharacterTable::Float(
            (0..m)
                .map(|j| {
                    (0..m)
                        .map(|k| {
                            let theta = 2.0 * std::f64::consts::PI * ((j * k) % m) as f64 / m as f64;
                            Complex::new(theta.cos(), theta.sin())
                        })
                        .collect()
                })
                .collect(),
        )
    };
    g.with_char_table(table)
}

/// S_m realized as the wreath product of the trivial group with S_m, so its
/// elements carry permutation structure; characters by Murnaghan-Nakayama.
pub fn symmetric_group(m: usize) -> Result<GroupTable> {
    let trivial = Arc::new(cyclic_group(1)?);
    let mut g = build_wreath_table(trivial, m, DEFAULT_MAX_ORDER)?;
    g.name = format!("S:{m}");
    let elements = &g.wreath.as_ref().unwrap().elements;
    g.labels = elements.iter().map(|w| one_line(&w.perm)).collect();
    let reps: Vec<Partition> = g.classes.iter().map(|c| cycle_type(&elements[c[0]].perm)).collect();
    let rows = enumerate_partitions(m)
        .iter()
        .map(|lam| {
            reps.iter()
                .map(|mu| Ok(Complex::new(rat_int(mn_character(lam, mu.parts())?), BigRational::zero())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    g.with_char_table(CharacterTable::Exact(rows))
}

fn one_line(perm: &[usize]) -> String {
    perm.iter().map(|&p| (p + 1).to_string()).collect::<Vec<_>>().join("")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    order: usize,
    mult: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    char_table: Option<Vec<Vec<[f64; 2]>>>,
}

pub fn load_group_file(path: &str) -> Result<GroupTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_string(), source })?;
    parse_group_json(&text, &format!("file:{path}"))
}

pub fn parse_group_json(text: &str, name: &str) -> Result<GroupTable> {
    let f: GroupFile = serde_json::from_str(text)?;
    if f.mult.len() != f.order || f.mult.iter().any(|r| r.len() != f.order) {
        return Err(Error::InvalidTable(format!("mult must be {0}x{0}", f.order)));
    }
    let mult = f.mult.iter().flatten().map(|&x| x as u32).collect();
    let g = GroupTable::from_mult(name, f.order, mult, f.labels)?;
    match f.char_table {
        None => Ok(g),
        Some(rows) => {
            let t = rows.iter().map(|r| r.iter().map(|&[re, im]| Complex::new(re, im)).collect()).collect();
            g.with_char_table(CharacterTable::Float(t))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    pub coords: Vec<usize>,
    pub perm: Vec<usize>,
}

impl WreathElement {
    pub fn identity(n: usize) -> Self {
        WreathElement { coords: vec![0; n], perm: (0..n).collect() }
    }

    pub fn new(coords: Vec<usize>, perm: Vec<usize>) -> Result<Self> {
        if coords.len() != perm.len() {
            return Err(Error::SizeMismatch(format!("{} coordinates for a permutation of {}", coords.len(), perm.len())));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::SizeMismatch(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(WreathElement { coords, perm })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0) && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", c.join(","), one_line(&self.perm))
    }
}

pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// (y;σ)(x;π) = (y_i x_{σ⁻¹(i)}; σπ).
pub fn wreath_multiply(a: &WreathElement, b: &WreathElement, g: &GroupTable) -> Result<WreathElement> {
    if a.n() != b.n() {
        return Err(Error::MismatchedN(a.n(), b.n()));
    }
    Ok(wreath_multiply_unchecked(a, b, g))
}

pub(crate) fn wreath_multiply_unchecked(a: &WreathElement, b: &WreathElement, g: &GroupTable) -> WreathElement {
    let n = a.n();
    let mut coords = vec![0; n];
    for (j, &img) in a.perm.iter().enumerate() {
        // σ(j) = img, so σ⁻¹(img) = j
        coords[img] = g.mul(a.coords[img], b.coords[j]);
    }
    let perm = b.perm.iter().map(|&p| a.perm[p]).collect();
    WreathElement { coords, perm }
}

/// (x;π)⁻¹ = (x_{π(i)}⁻¹; π⁻¹).
pub fn wreath_inverse(a: &WreathElement, g: &GroupTable) -> WreathElement {
    let coords = a.perm.iter().map(|&p| g.inv[a.coords[p]]).collect();
    WreathElement { coords, perm: invert_perm(&a.perm) }
}

/// Dense indexing of G≀S_n: coordinates major (as a base-|G| numeral),
/// lexicographic permutation rank minor.
#[derive(Clone, Debug)]
pub struct WreathIndexer {
    pub g_order: usize,
    pub n: usize,
    nfact: usize,
}

impl WreathIndexer {
    pub fn new(g_order: usize, n: usize) -> Self {
        WreathIndexer { g_order, n, nfact: (1..=n).product() }
    }

    pub fn order(&self) -> usize {
        self.g_order.pow(self.n as u32) * self.nfact
    }

    pub fn index(&self, w: &WreathElement) -> usize {
        let c = w.coords.iter().fold(0, |acc, &x| acc * self.g_order + x);
        c * self.nfact + perm_rank(&w.perm)
    }

    pub fn element(&self, idx: usize) -> WreathElement {
        let (mut c, r) = (idx / self.nfact, idx % self.nfact);
        let mut coords = vec![0; self.n];
        for slot in coords.iter_mut().rev() {
            *slot = c % self.g_order;
            c /= self.g_order;
        }
        WreathElement { coords, perm: perm_unrank(self.n, r) }
    }
}

pub fn perm_rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&q| q < perm[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

pub fn perm_unrank(n: usize, mut rank: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    digits.iter().map(|&d| pool.remove(d)).collect()
}

pub fn build_wreath_table(g: Arc<GroupTable>, n: usize, max_order: usize) -> Result<GroupTable> {
    let order = (g.order as u128).checked_pow(n as u32).and_then(|x| x.checked_mul((1..=n as u128).product()));
    match order {
        Some(o) if o <= max_order as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "wreath order",
                value: order.map_or_else(|| "overflow".into(), |o| o.to_string()),
                cap: max_order as u128,
                flag: "max-order",
            })
        }
    }
    let ix = WreathIndexer::new(g.order, n);
    let order = ix.order();
    let elements: Vec<WreathElement> = (0..order).map(|i| ix.element(i)).collect();
    let mut mult = vec![0u32; order * order];
    for (a, ea) in elements.iter().enumerate() {
        for (b, eb) in elements.iter().enumerate() {
            mult[a * order + b] = ix.index(&wreath_multiply_unchecked(ea, eb, &g)) as u32;
        }
    }
    let labels = elements.iter().map(|e| e.to_string()).collect();
    let mut t = GroupTable::from_mult(format!("{}wrS{n}", g.name), order, mult, Some(labels))?;
    t.wreath = Some(WreathInfo { base: g, n, elements });
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: usize) -> Arc<GroupTable> {
        Arc::new(cyclic_group(m).unwrap())
    }

    #[test]
    fn builtins() {
        let z2 = build_group("Z:2").unwrap();
        assert_eq!(z2.order, 2);
        assert_eq!(z2.classes, vec![vec![0], vec![1]]);
        let one = Complex::new(rat_int(1), BigRational::zero());
        let mone = Complex::new(rat_int(-1), BigRational::zero());
        assert_eq!(z2.char_table, Some(CharacterTable::Exact(vec![vec![one.clone(), one.clone()], vec![one.clone(), mone]])));

        let s3 = build_group("S:3").unwrap();
        assert_eq!(s3.order, 6);
        assert_eq!(s3.class_sizes(), vec![1, 3, 2]);
        let mut dims = s3.irrep_dims().unwrap();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);

        let z1 = build_group("Z:1").unwrap();
        assert_eq!((z1.order, z1.num_classes()), (1, 1));
        assert_eq!(z1.char_table, Some(CharacterTable::Exact(vec![vec![one]])));

        assert_eq!(build_group("Z:4").unwrap().num_classes(), 4);
        assert!(build_group("Z:5").unwrap().char_table.as_ref().is_some_and(|t| !t.is_exact()));
        for bad in ["Q:2", "Z:0", "S:7", "S:", "Z"] {
            assert!(matches!(build_group(bad), Err(Error::BadGroupSpec(_))), "{bad}");
        }
    }

    #[test]
    fn all_symmetric_tables_validate() {
        for m in 1..=5 {
            let s = symmetric_group(m).unwrap();
            assert_eq!(s.num_classes(), crate::partitions::partition_count(m).try_into().unwrap_or(0usize));
        }
    }

    #[test]
    fn wreath_examples() {
        let g = z(2);
        let a = WreathElement::new(vec![1, 0], vec![0, 1]).unwrap();
        let b = WreathElement::new(vec![0, 0], vec![1, 0]).unwrap();
        assert_eq!(wreath_multiply(&a, &b, &g).unwrap(), WreathElement::new(vec![1, 0], vec![1, 0]).unwrap());
        let e = WreathElement::identity(2);
        assert_eq!(wreath_multiply(&e, &b, &g).unwrap(), b);
        assert!(wreath_multiply(&e, &WreathElement::identity(3), &g).is_err());

        // ((a,e);(1 2))^{-1} = ((e,a^{-1});(1 2)) in Z_3 wr S_2
        let z3 = z(3);
        let x = WreathElement::new(vec![1, 0], vec![1, 0]).unwrap();
        assert_eq!(wreath_inverse(&x, &z3), WreathElement::new(vec![0, 2], vec![1, 0]).unwrap());
    }

    #[test]
    fn wreath_tables() {
        for (g, n, order, classes) in [(z(2), 2, 8, 5), (z(2), 3, 48, 10), (z(3), 2, 18, 9)] {
            let t = build_wreath_table(g.clone(), n, DEFAULT_MAX_ORDER).unwrap();
            assert_eq!(t.order, order);
            assert_eq!(t.num_classes(), classes);
            let ws = &t.wreath.as_ref().unwrap().elements;
            for (i, w) in ws.iter().enumerate() {
                let inv = wreath_inverse(w, &g);
                assert_eq!(wreath_inverse(&inv, &g), *w);
                assert_eq!(t.inv[i], WreathIndexer::new(g.order, n).index(&inv));
            }
        }
        let s3 = Arc::new(symmetric_group(3).unwrap());
        assert_eq!(build_wreath_table(s3.clone(), 2, DEFAULT_MAX_ORDER).unwrap().order, 72);
        assert!(matches!(build_wreath_table(s3, 4, DEFAULT_MAX_ORDER), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn ranks_round_trip() {
        for n in 0..6 {
            let total: usize = (1..=n).product();
            for r in 0..total {
                assert_eq!(perm_rank(&perm_unrank(n, r)), r);
            }
            if n > 1 {
                assert_eq!(perm_unrank(n, 0), (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn file_groups() {
        let json = r#"{"order": 3, "mult": [[0,1,2],[1,2,0],[2,0,1]], "labels": ["e","a","b"]}"#;
        let g = parse_group_json(json, "t").unwrap();
        assert_eq!(g.num_classes(), 3);
        assert!(g.char_table.is_none());

        let bad_assoc = r#"{"order": 3, "mult": [[0,1,2],[1,0,2],[2,2,0]]}"#;
        assert!(parse_group_json(bad_assoc, "t").is_err());
        let no_identity = r#"{"order": 2, "mult": [[1,0],[0,1]]}"#;
        assert!(parse_group_json(no_identity, "t").is_err());

        let z2 = r#"{"order": 2, "mult": [[0,1],[1,0]], "char_table": [[[1,0],[1,0]],[[1,0],[-1,0]]]}"#;
        assert!(parse_group_json(z2, "t").unwrap().char_table.is_some());
        let broken = r#"{"order": 2, "mult": [[0,1],[1,0]], "char_table": [[[1,0],[1,0]],[[1,0],[1,0]]]}"#;
        assert!(matches!(parse_group_json(broken, "t"), Err(Error::InvalidCharTable(_))));
    }

    #[test]
    fn light_test_catches_non_associative_large_loop() {
        // a Latin square with identity that is not a group: order 5 loop
        let rows = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]];
        let mult: Vec<u32> = rows.iter().flatten().map(|&x| x as u32).collect();
        assert!(GroupTable::from_mult("loop", 5, mult, None).is_err());
        let gens = generating_set(6, &symmetric_group(3).unwrap().mult);
        assert!(!gens.is_empty());
    }
}
