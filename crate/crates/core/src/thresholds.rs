//! Leading-order step counts for the two G-walks, per base-group family,
//! metric and side. Each entry is a small formula that renders to a fixed
//! descriptor string and evaluates numerically for a concrete (G, n).

use std::fmt;

use crate::bounds::delta_n;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::scalar::ln_abs_bigint;
use crate::walks::WalkKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    L2,
    Tv,
}

impl std::str::FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(Metric::L2),
            "tv" => Ok(Metric::Tv),
            _ => Err(Error::Unsupported(format!("unknown metric '{s}' (expected l2 or tv)"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::L2 => "l2",
            Metric::Tv => "tv",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Sufficient,
    Necessary,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Sufficient => "sufficient",
            Side::Necessary => "necessary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    Z2,
    Zm,
    Sm,
    Abelian,
    Nonabelian,
}

impl GroupFamily {
    pub const ALL: [GroupFamily; 5] = [GroupFamily::Z2, GroupFamily::Zm, GroupFamily::Sm, GroupFamily::Abelian, GroupFamily::Nonabelian];

    /// The most specific family. Symmetric groups are recognized by the
    /// name given by the builtin constructor.
    pub fn of(g: &GroupTable) -> Self {
        if g.order == 2 {
            return GroupFamily::Z2;
        }
        if is_cyclic(g) {
            return GroupFamily::Zm;
        }
        if g.name.starts_with("S:") {
            return GroupFamily::Sm;
        }
        if g.is_abelian() {
            GroupFamily::Abelian
        } else {
            GroupFamily::Nonabelian
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupFamily::Z2 => "Z2",
            GroupFamily::Zm => "Zm",
            GroupFamily::Sm => "Sm",
            GroupFamily::Abelian => "abelian",
            GroupFamily::Nonabelian => "nonabelian",
        })
    }
}

fn is_cyclic(g: &GroupTable) -> bool {
    (0..g.order).any(|x| {
        let mut p = x;
        for i in 1..=g.order {
            if p == 0 {
                return i == g.order;
            }
            p = g.mul(p, x);
        }
        false
    })
}

/// The quantity inside `n log(...)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogArg {
    N,
    MMinus1,
    MFactMinus1,
    PartitionsMinus1,
    GMinus1,
    SMinus1,
    Delta,
}

impl LogArg {
    fn render(self) -> &'static str {
        match self {
            LogArg::N => "n log n",
            LogArg::MMinus1 => "n log(m-1)",
            LogArg::MFactMinus1 => "n log(|m!|-1)",
            LogArg::PartitionsMinus1 => "n log(p(m)-1)",
            LogArg::GMinus1 => "n log(|G|-1)",
            LogArg::SMinus1 => "n log(s-1)",
            LogArg::Delta => "n log delta_n",
        }
    }
}

/// Everything a formula can depend on.
#[derive(Clone, Debug)]
pub struct ThresholdContext {
    pub n: usize,
    pub g_order: usize,
    pub num_classes: usize,
    pub ln_delta: f64,
}

impl ThresholdContext {
    pub fn new(g: &GroupTable, n: usize) -> Result<Self> {
        if g.order < 2 {
            return Err(Error::Unsupported("thresholds need a nontrivial base group".into()));
        }
        if n < 2 {
            return Err(Error::NTooSmall("threshold", 2));
        }
        Ok(ThresholdContext { n, g_order: g.order, num_classes: g.num_classes(), ln_delta: ln_abs_bigint(&delta_n(g, n)?.into()) })
    }

    fn ln_arg(&self, a: LogArg) -> f64 {
        let m1 = (self.g_order - 1) as f64;
        match a {
            LogArg::N => (self.n as f64).ln(),
            // for Z_m and S_m, m and |m!| are |G|, p(m) is the class count
            LogArg::MMinus1 | LogArg::MFactMinus1 | LogArg::GMinus1 => m1.ln(),
            LogArg::PartitionsMinus1 | LogArg::SMinus1 => ((self.num_classes - 1) as f64).ln(),
            LogArg::Delta => self.ln_delta,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    /// Σ (num/den) · n log(arg)
    Sum(Vec<(u32, u32, LogArg)>),
    Max(Vec<Formula>),
}

impl Formula {
    pub fn eval(&self, ctx: &ThresholdContext) -> f64 {
        match self {
            Formula::Sum(terms) => terms.iter().map(|&(p, q, a)| p as f64 / q as f64 * ctx.n as f64 * ctx.ln_arg(a)).sum(),
            Formula::Max(fs) => fs.iter().map(|f| f.eval(ctx)).fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Sum(terms) => {
                for (i, &(p, q, a)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match (p, q) {
                        (1, 1) => {}
                        (p, 1) => write!(f, "{p} ")?,
                        (p, q) => write!(f, "{p}/{q} ")?,
                    }
                    f.write_str(a.render())?;
                }
                Ok(())
            }
            Formula::Max(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "max{{{}}}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdRow {
    pub family: GroupFamily,
    pub metric: Metric,
    pub side: Side,
    pub formula: Formula,
    /// Holds only in the limit n → ∞.
    pub asymptotic: bool,
}

impl ThresholdRow {
    pub fn descriptor(&self) -> String {
        if self.asymptotic {
            format!("{} (n -> inf)", self.formula)
        } else {
            self.formula.to_string()
        }
    }
}

fn sum(terms: &[(u32, u32, LogArg)]) -> Formula {
    Formula::Sum(terms.to_vec())
}

fn half_nlogn() -> Formula {
    sum(&[(1, 2, LogArg::N)])
}

/// The second log term for a family: m-1, |m!|-1 or |G|-1.
fn order_arg(family: GroupFamily) -> Option<LogArg> {
    match family {
        GroupFamily::Z2 => None,
        GroupFamily::Zm => Some(LogArg::MMinus1),
        GroupFamily::Sm => Some(LogArg::MFactMinus1),
        GroupFamily::Abelian | GroupFamily::Nonabelian => Some(LogArg::GMinus1),
    }
}

/// ½ n log n + ¼ n log(order - 1), or ½ n log n for Z2.
fn l2_lower(family: GroupFamily) -> Formula {
    match order_arg(family) {
        None => half_nlogn(),
        Some(a) => sum(&[(1, 2, LogArg::N), (1, 4, a)]),
    }
}

pub fn table(kind: WalkKind) -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::new();
    for family in GroupFamily::ALL {
        let (l2_suff, l2_nec, tv_asym) = match kind {
            WalkKind::Independent => (l2_lower(family), l2_lower(family), false),
            WalkKind::Paired => {
                let suff = match family {
                    GroupFamily::Z2 => sum(&[(1, 1, LogArg::N)]),
                    GroupFamily::Zm | GroupFamily::Abelian => sum(&[(1, 1, LogArg::N), (1, 1, order_arg(family).unwrap())]),
                    GroupFamily::Sm => Formula::Max(vec![
                        sum(&[(1, 2, LogArg::Delta)]),
                        sum(&[(1, 1, LogArg::N), (1, 2, LogArg::MFactMinus1), (1, 2, LogArg::PartitionsMinus1)]),
                    ]),
                    GroupFamily::Nonabelian => Formula::Max(vec![
                        sum(&[(1, 2, LogArg::Delta)]),
                        sum(&[(1, 1, LogArg::N), (1, 2, LogArg::GMinus1), (1, 2, LogArg::SMinus1)]),
                    ]),
                };
                let nec = match family {
                    GroupFamily::Sm | GroupFamily::Nonabelian => Formula::Max(vec![sum(&[(1, 2, LogArg::Delta)]), l2_lower(family)]),
                    _ => l2_lower(family),
                };
                (suff, nec, true)
            }
            WalkKind::Sym => return Err(Error::Unsupported("threshold tables cover the G-walks only".into())),
        };
        let row = |metric, side, formula, asymptotic| ThresholdRow { family, metric, side, formula, asymptotic };
        rows.push(row(Metric::L2, Side::Sufficient, l2_suff, false));
        rows.push(row(Metric::L2, Side::Necessary, l2_nec, false));
        rows.push(row(Metric::Tv, Side::Sufficient, half_nlogn(), tv_asym));
        rows.push(row(Metric::Tv, Side::Necessary, half_nlogn(), false));
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct Threshold {
    pub row: ThresholdRow,
    pub steps: f64,
}

/// Sufficient and necessary step counts for `g` in the given metric.
pub fn mixing_threshold(g: &GroupTable, n: usize, kind: WalkKind, metric: Metric) -> Result<Vec<Threshold>> {
    let ctx = ThresholdContext::new(g, n)?;
    let family = GroupFamily::of(g);
    Ok(table(kind)?
        .into_iter()
        .filter(|r| r.family == family && r.metric == metric)
        .map(|row| Threshold { steps: row.formula.eval(&ctx), row })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn families() {
        assert_eq!(GroupFamily::of(&build_group("Z:2").unwrap()), GroupFamily::Z2);
        assert_eq!(GroupFamily::of(&build_group("Z:6").unwrap()), GroupFamily::Zm);
        assert_eq!(GroupFamily::of(&build_group("S:3").unwrap()), GroupFamily::Sm);
    }

    #[test]
    fn z2_value() {
        let g = build_group("Z:2").unwrap();
        let t = mixing_threshold(&g, 100, WalkKind::Independent, Metric::L2).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t[0].steps - 50.0 * 100f64.ln()).abs() < 1e-9);
        assert_eq!(t[0].row.descriptor(), "1/2 n log n");
    }

    #[test]
    fn sym_rejected() {
        assert!(table(WalkKind::Sym).is_err());
        assert!(mixing_threshold(&build_group("Z:1").unwrap(), 10, WalkKind::Independent, Metric::L2).is_err());
    }
}
