//! Tabular output. CSV with LF endings and a fixed header; JSON mirrors the
//! columns with a metadata object. Formatting is deterministic so identical
//! inputs give identical bytes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bounds::DistanceCurve;
use crate::sim::{CouplingRow, Estimate, RNG_NAME};
use crate::thresholds::Threshold;
use crate::walks::SpectralLine;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Empty,
    Text(String),
    Int(i128),
    Big(BigInt),
    /// Written as "p/q" (or "p" when integral).
    Rational(BigRational),
    Float(f64),
    /// A positive value given by its natural log, for numbers outside f64.
    Ln(f64),
}

/// Shortest round-trip decimal; scientific outside [1e-4, 1e15).
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// exp(ln) as a decimal, switching to mantissa·10^E text when it does not
/// fit in an f64.
pub fn format_ln(ln: f64) -> String {
    if ln == f64::NEG_INFINITY {
        return "0".into();
    }
    if ln.is_nan() {
        return "NaN".into();
    }
    if ln.abs() < 700.0 {
        return format_float(ln.exp());
    }
    let l10 = ln / std::f64::consts::LN_10;
    let mut e = l10.floor();
    let mut m = 10f64.powf(l10 - e);
    if m >= 9.999_999_999_5 {
        m /= 10.0;
        e += 1.0;
    }
    // ten significant digits; the log itself is not more accurate than that
    let ms = format!("{m:.9}");
    let ms = ms.trim_end_matches('0').trim_end_matches('.');
    format!("{ms}e{}", e as i64)
}

fn ln_in_range(ln: f64) -> bool {
    ln == f64::NEG_INFINITY || ln.abs() < 700.0
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Big(b) => b.to_string(),
            Cell::Rational(r) => r.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Ln(l) => format_ln(*l),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Empty => "null".into(),
            Cell::Int(_) | Cell::Big(_) => self.render(),
            Cell::Float(x) if x.is_finite() => self.render(),
            Cell::Float(_) => "null".into(),
            Cell::Ln(l) if ln_in_range(*l) => self.render(),
            _ => serde_json::to_string(&self.render()).unwrap(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Key/value pairs carried into JSON output.
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), meta: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"meta\": {");
        for (i, (k, v)) in self.meta.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            write!(out, "{sep}\n    {}: {}", serde_json::to_string(k).unwrap(), serde_json::to_string(v).unwrap()).unwrap();
        }
        out.push_str(if self.meta.is_empty() { "},\n  \"rows\": [" } else { "\n  },\n  \"rows\": [" });
        for (i, r) in self.rows.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let fields: Vec<String> = self.header.iter().zip(r).map(|(h, c)| format!("{}: {}", serde_json::to_string(h).unwrap(), c.json())).collect();
            write!(out, "{sep}\n    {{{}}}", fields.join(", ")).unwrap();
        }
        out.push_str(if self.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        out
    }
}

pub const SPECTRUM_FIXED: [&str; 3] = ["value_num", "value_den", "multiplicity"];
pub const DISTANCE_HEADER: [&str; 6] = ["k", "l2n_sq", "tv_upper_spectral", "tv_upper_coupling", "l2_lower_dominant", "tv_lower_chebyshev"];
pub const SIMULATE_HEADER: [&str; 7] = ["k", "empirical_tv", "stderr", "exact_tv", "trials", "seed", "rng"];
pub const COUPLING_HEADER: [&str; 7] = ["c", "threshold", "empirical_tail", "limit", "stderr", "trials", "seed"];
pub const THRESHOLD_HEADER: [&str; 4] = ["metric", "side", "descriptor", "steps"];

/// One row per spectral line, with the witness label spread over
/// `n{j},lambda{j}` column pairs.
pub fn spectrum_table(lines: &[SpectralLine], slots: usize) -> Table {
    let mut header: Vec<String> = SPECTRUM_FIXED.iter().map(|s| s.to_string()).collect();
    for j in 1..=slots {
        header.push(format!("n{j}"));
        header.push(format!("lambda{j}"));
    }
    let mut t = Table { header, rows: Vec::new(), meta: Vec::new() };
    for l in lines {
        let mut row = vec![Cell::Big(l.value.numer().clone()), Cell::Big(l.value.denom().clone()), Cell::Big(l.multiplicity.clone().into())];
        for j in 0..slots {
            match &l.witness {
                Some(w) if j < w.parts.len() => {
                    row.push(Cell::Int(w.type_comp[j] as i128));
                    row.push(Cell::Text(w.parts[j].to_string()));
                }
                _ => {
                    row.push(Cell::Empty);
                    row.push(Cell::Empty);
                }
            }
        }
        t.push(row);
    }
    t
}

pub fn distance_table(curve: &DistanceCurve) -> Table {
    let mut t = Table::new(&DISTANCE_HEADER)
        .with_meta("walk", curve.kind)
        .with_meta("group", &curve.group)
        .with_meta("n", curve.n)
        .with_meta("mode", curve.mode);
    for r in &curve.rows {
        t.push(vec![
            Cell::Int(r.k as i128),
            match r.l2n_sq_exact.as_ref().map(crate::scalar::ratio_to_f64) {
                Some(v) if v.is_finite() && (v == 0.0 || v.is_normal()) => Cell::Float(v),
                _ => Cell::Ln(r.l2n_sq.ln),
            },
            Cell::Float(r.tv_upper_spectral),
            r.tv_upper_coupling.map_or(Cell::Empty, Cell::Float),
            r.l2_lower_dominant_ln.map_or(Cell::Empty, |l| Cell::Ln(0.5f64.ln() + 0.5 * l)),
            r.tv_lower_chebyshev.map_or(Cell::Empty, Cell::Float),
        ]);
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimRow {
    pub k: u64,
    pub estimate: Estimate,
    pub exact_tv: Option<f64>,
    pub trials: u64,
    pub seed: u64,
}

pub fn simulate_table(rows: &[SimRow]) -> Table {
    let mut t = Table::new(&SIMULATE_HEADER).with_meta("rng", RNG_NAME);
    for r in rows {
        t.push(vec![
            Cell::Int(r.k as i128),
            Cell::Float(r.estimate.value),
            Cell::Float(r.estimate.stderr),
            r.exact_tv.map_or(Cell::Empty, Cell::Float),
            Cell::Int(r.trials as i128),
            Cell::Int(r.seed as i128),
            Cell::Text(RNG_NAME.into()),
        ]);
    }
    t
}

/// Coupling tails for either statistic.
pub fn coupling_table(rows: &[CouplingRow], trials: u64, seed: u64) -> Table {
    let mut t = Table::new(&COUPLING_HEADER).with_meta("rng", RNG_NAME);
    for r in rows {
        t.push(vec![
            Cell::Float(r.c),
            Cell::Float(r.threshold),
            Cell::Float(r.tail.value),
            Cell::Float(r.limit),
            Cell::Float(r.tail.stderr),
            Cell::Int(trials as i128),
            Cell::Int(seed as i128),
        ]);
    }
    t
}

pub fn threshold_table(rows: &[Threshold]) -> Table {
    let mut t = Table::new(&THRESHOLD_HEADER);
    for r in rows {
        t.push(vec![Cell::Text(r.row.metric.to_string()), Cell::Text(r.row.side.to_string()), Cell::Text(r.row.descriptor()), Cell::Float(r.steps)]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn floats() {
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1e-7), "1e-7");
        assert_eq!(format_float(2.5e20), "2.5e20");
        assert_eq!(format_float(230.25850929940458), "230.25850929940458");
    }

    #[test]
    fn huge_from_ln() {
        assert_eq!(format_ln(1000.0 * std::f64::consts::LN_10), "1e1000");
        assert_eq!(format_ln((2.5f64).ln() + 800.0 * std::f64::consts::LN_10), "2.5e800");
        assert_eq!(format_ln(4f64.ln()), "4");
        assert_eq!(format_ln(f64::NEG_INFINITY), "0");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["a", "b", "c"]).with_meta("seed", 7);
        t.push(vec![Cell::Rational(rat(1, 4)), Cell::Empty, Cell::Float(0.5)]);
        t.push(vec![Cell::Int(3), Cell::Text("x".into()), Cell::Ln(5000.0)]);
        assert_eq!(t.to_csv(), format!("a,b,c\n1/4,,0.5\n3,x,{}\n", format_ln(5000.0)));
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0]["a"], "1/4");
        assert!(v["rows"][0]["b"].is_null());
        assert_eq!(v["rows"][0]["c"], 0.5);
        assert_eq!(v["meta"]["seed"], "7");
    }
}
