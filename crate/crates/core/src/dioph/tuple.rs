//! Real tuples given by expressions, with rigorous enclosures.

use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{Expr, Interval, Quadratic};
use crate::error::{Error, Result};

pub const MIN_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 16384;

#[derive(Clone, Debug, Serialize)]
pub struct RealTuple {
    pub label: String,
    pub sources: Vec<String>,
    pub precision_bits: u32,
    #[serde(skip)]
    exprs: Vec<Expr>,
    #[serde(skip)]
    entries: Vec<Interval>,
    #[serde(skip)]
    rationals: Vec<Option<BigRational>>,
    #[serde(skip)]
    quadratics: Vec<Option<Quadratic>>,
}

/// Evaluate with enough guard bits that the relative width is at most
/// `2^{-prec/2}`.
fn enclose(e: &Expr, prec: u32) -> Result<Interval> {
    let mut p = prec + 32;
    loop {
        let v = e.eval(p)?;
        if !v.is_finite() {
            return Err(Error::invalid(format!("entry {e} is not finite")));
        }
        if v.contains_zero() {
            if e.eval_rational().is_some_and(|q| num_traits::Zero::is_zero(&q)) {
                return Err(Error::invalid(format!("entry {e} is zero")));
            }
        } else {
            let rel = v.width().to_f64() / v.abs().lo_f64();
            if rel <= (-(prec as f64) / 2.0).exp2() {
                return Ok(v);
            }
        }
        if p >= 4 * MAX_PRECISION {
            return Err(Error::PrecisionExhausted { required_bits: p * 2 });
        }
        p *= 2;
    }
}

impl RealTuple {
    pub fn from_exprs(label: impl Into<String>, sources: &[&str], prec: u32) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::invalid("empty tuple"));
        }
        let exprs = sources.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::build(label.into(), sources.iter().map(|s| s.trim().to_string()).collect(), exprs, prec)
    }

    fn build(label: String, sources: Vec<String>, exprs: Vec<Expr>, prec: u32) -> Result<Self> {
        let prec = prec.max(MIN_PRECISION);
        if prec > MAX_PRECISION {
            return Err(Error::PrecisionExhausted { required_bits: prec });
        }
        let entries = exprs.iter().map(|e| enclose(e, prec)).collect::<Result<Vec<_>>>()?;
        let rationals = exprs.iter().map(|e| e.eval_rational()).collect();
        let quadratics = exprs.iter().map(|e| e.eval_quadratic()).collect();
        Ok(RealTuple { label, sources, precision_bits: prec, exprs, entries, rationals, quadratics })
    }

    /// Tuple file: one expression per line; blank lines and `#` comments skipped.
    pub fn from_file(path: &Path, prec: u32) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(
            path.file_stem().and_then(|s| s.to_str()).unwrap_or("tuple"),
            &text,
            prec,
        )
    }

    pub fn from_text(label: &str, text: &str, prec: u32) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        Self::from_exprs(label, &lines, prec)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Interval {
        &self.entries[i]
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    /// Exact rational value of entry `i`, when it has one.
    pub fn rational(&self, i: usize) -> Option<&BigRational> {
        self.rationals[i].as_ref()
    }

    pub fn quadratic(&self, i: usize) -> Option<&Quadratic> {
        self.quadratics[i].as_ref()
    }

    pub fn all_rational(&self, idx: &[usize]) -> Option<Vec<BigRational>> {
        idx.iter().map(|&i| self.rationals[i].clone()).collect()
    }

    /// Exact values in one common quadratic field, if the entries allow it.
    pub fn common_quadratic(&self, idx: &[usize]) -> Option<Vec<Quadratic>> {
        let qs: Vec<Quadratic> = idx.iter().map(|&i| self.quadratics[i].clone()).collect::<Option<_>>()?;
        let d = qs.iter().map(|q| q.d).find(|&d| d != 1).unwrap_or(1);
        if qs.iter().any(|q| q.d != 1 && q.d != d) {
            return None;
        }
        Some(qs.into_iter().map(|q| Quadratic::new(d, q.a, q.b)).collect())
    }

    pub fn at_precision(&self, prec: u32) -> Result<RealTuple> {
        if prec == self.precision_bits {
            return Ok(self.clone());
        }
        Self::build(self.label.clone(), self.sources.clone(), self.exprs.clone(), prec)
    }

    /// `aθ` for a nonzero rational `a`.
    pub fn scaled(&self, a: &BigRational) -> Result<RealTuple> {
        let exprs: Vec<Expr> = self
            .exprs
            .iter()
            .map(|e| Expr::Mul(Box::new(Expr::Num(a.clone())), Box::new(e.clone())))
            .collect();
        let sources = exprs.iter().map(|e| e.to_string()).collect();
        Self::build(format!("{}*{}", a, self.label), sources, exprs, self.precision_bits)
    }

    /// Entries reordered as `perm[0], perm[1], …`.
    pub fn permuted(&self, perm: &[usize]) -> Result<RealTuple> {
        let mut seen = vec![false; self.len()];
        for &p in perm {
            if p >= self.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("not a permutation"));
            }
        }
        let exprs = perm.iter().map(|&p| self.exprs[p].clone()).collect();
        let sources = perm.iter().map(|&p| self.sources[p].clone()).collect();
        Self::build(self.label.clone(), sources, exprs, self.precision_bits)
    }

    /// The tuple with entry `i` negated.
    pub fn negated_entry(&self, i: usize) -> Result<RealTuple> {
        let mut exprs = self.exprs.clone();
        exprs[i] = Expr::Neg(Box::new(exprs[i].clone()));
        let sources = exprs.iter().map(|e| e.to_string()).collect();
        Self::build(self.label.clone(), sources, exprs, self.precision_bits)
    }

    pub fn append_pi(&self) -> Result<RealTuple> {
        let mut exprs = self.exprs.clone();
        exprs.push(Expr::Pi);
        let mut sources = self.sources.clone();
        sources.push("pi".into());
        Self::build(format!("{}+pi", self.label), sources, exprs, self.precision_bits)
    }

    pub fn mids_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mid_f64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_file_text() {
        let t = RealTuple::from_text("g", "1   # one\n\nphi\n", 128).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.rational(0).is_some());
        assert!(t.rational(1).is_none());
        assert!(t.entry(1).contains_f64(1.618033988749895) || t.entry(1).width_f64() < 1e-30);
        assert_eq!(t.common_quadratic(&[0, 1]).unwrap()[0].d, 5);
    }

    #[test]
    fn enclosure_width_invariant() {
        let t = RealTuple::from_exprs("x", &["pi", "log(3)", "1/3"], 256).unwrap();
        for e in t.entries() {
            let rel = e.width().to_f64() / e.abs().lo_f64();
            assert!(rel <= 2f64.powi(-128));
        }
    }

    #[test]
    fn zero_entry_rejected() {
        assert!(RealTuple::from_exprs("z", &["1", "2-2"], 128).is_err());
        assert!(RealTuple::from_exprs("z", &[], 128).is_err());
    }

    #[test]
    fn transforms() {
        let t = RealTuple::from_exprs("t", &["1", "sqrt(2)"], 128).unwrap();
        let s = t.scaled(&BigRational::new(3.into(), 2.into())).unwrap();
        assert!(s.entry(0).contains_f64(1.5));
        let p = t.permuted(&[1, 0]).unwrap();
        assert_eq!(p.sources[1], "1");
        assert!(t.permuted(&[0, 0]).is_err());
        assert_eq!(t.append_pi().unwrap().len(), 3);
    }
}
