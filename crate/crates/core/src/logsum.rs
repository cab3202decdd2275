//! Sums of terms spanning hundreds of orders of magnitude, kept as natural
//! logarithms. Reduction is a fixed pairwise tree over insertion order, so
//! results are reproducible bit for bit.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::scalar::ln_abs_ratio;

/// ln Σ exp(t) over `terms`; `-inf` for an empty or all-zero sum.
pub fn ln_sum(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    let scaled: Vec<f64> = terms.iter().map(|&t| (t - max).exp()).collect();
    max + pairwise(&scaled).ln()
}

fn pairwise(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        len if len <= 8 => v.iter().sum(),
        len => {
            let (a, b) = v.split_at(len / 2);
            pairwise(a) + pairwise(b)
        }
    }
}

/// ln(exp(a) + exp(b)).
pub fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[derive(Clone, Debug, Default)]
pub struct LogSum {
    terms: Vec<f64>,
}

impl LogSum {
    pub fn push(&mut self, ln_term: f64) {
        if ln_term > f64::NEG_INFINITY {
            self.terms.push(ln_term);
        }
    }

    pub fn ln_value(&self) -> f64 {
        ln_sum(&self.terms)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Positive and negative parts kept separately.
#[derive(Clone, Debug, Default)]
pub struct SignedLogSum {
    pos: LogSum,
    neg: LogSum,
}

impl SignedLogSum {
    pub fn push(&mut self, negative: bool, ln_abs: f64) {
        if negative {
            self.neg.push(ln_abs)
        } else {
            self.pos.push(ln_abs)
        }
    }

    /// Adds exp(ln_mult) · value^k.
    pub fn push_term(&mut self, ln_mult: f64, value: &BigRational, k: u64) {
        if value.is_zero() {
            if k == 0 {
                self.push(false, ln_mult);
            }
            return;
        }
        let negative = value.is_negative() && k % 2 == 1;
        self.push(negative, ln_mult + k as f64 * ln_abs_ratio(value));
    }

    /// exp(ln_scale) times the signed total.
    pub fn scaled(&self, ln_scale: f64) -> f64 {
        (self.pos.ln_value() + ln_scale).exp() - (self.neg.ln_value() + ln_scale).exp()
    }

    pub fn value(&self) -> f64 {
        self.scaled(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums() {
        assert_eq!(ln_sum(&[]), f64::NEG_INFINITY);
        assert!((ln_sum(&[0.0, 0.0]) - 2f64.ln()).abs() < 1e-15);
        let big = ln_sum(&[1000.0, 1000.0 + 3f64.ln()]);
        assert!((big - (1000.0 + 4f64.ln())).abs() < 1e-12);
        assert!((ln_add(1.0, 2.0) - (1f64.exp() + 2f64.exp()).ln()).abs() < 1e-15);
        let many: Vec<f64> = (0..1000).map(|_| 0.0).collect();
        assert!((ln_sum(&many) - 1000f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn signed() {
        let mut s = SignedLogSum::default();
        s.push_term(0.0, &BigRational::new((-1).into(), 2.into()), 3);
        s.push_term(0.0, &BigRational::new(1.into(), 1.into()), 3);
        assert!((s.value() - 0.875).abs() < 1e-15);
    }
}
