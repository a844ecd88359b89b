//! Integer-relation detection on `(θ_1, …, θ_m[, π])`.
//!
//! Relations are reported in the order: smallest max-norm, then
//! lexicographically smallest sign-normalised vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::linear_form::{box_size, form_value, max_norm, sign_normalise, SearchOptions};
use super::tuple::{RealTuple, MAX_PRECISION};
use crate::arith::{lll_reduce, Interval, Quadratic};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RelationOutcome {
    RelationFound {
        l: Vec<i64>,
        max_norm: u64,
        /// Confirmed in exact rational or quadratic arithmetic.
        verified_exactly: bool,
        /// Every smaller relation was ruled out.
        exhaustive: bool,
        residual: Interval,
        precision: u32,
    },
    NoRelationFound {
        height: u64,
        precision: u32,
        exhaustive: bool,
    },
}

impl RelationOutcome {
    pub fn relation(&self) -> Option<&[i64]> {
        match self {
            RelationOutcome::RelationFound { l, .. } => Some(l),
            _ => None,
        }
    }
}

fn exact_zero(theta: &RealTuple, l: &[i64]) -> Option<bool> {
    let idx: Vec<usize> = (0..theta.len()).collect();
    if let Some(qs) = theta.all_rational(&idx) {
        let s: BigRational = l.iter().zip(&qs).map(|(a, q)| q * BigInt::from(*a)).sum();
        return Some(s.is_zero());
    }
    let qs = theta.common_quadratic(&idx)?;
    let d = qs[0].d;
    let mut acc = Quadratic::rational(d, BigRational::zero());
    for (a, q) in l.iter().zip(&qs) {
        acc = crate::arith::FieldElem::add(&acc, &crate::arith::FieldElem::mul(q, &Quadratic::rational(d, BigRational::from_integer(BigInt::from(*a)))));
    }
    Some(crate::arith::FieldElem::is_zero(&acc))
}

fn decode(mut idx: u64, h: u64, m: usize) -> Vec<i64> {
    let base = 2 * h + 1;
    let mut l = vec![0i64; m];
    for pos in (0..m).rev() {
        l[pos] = (idx % base) as i64 - h as i64;
        idx /= base;
    }
    l
}

/// Candidates whose f64 value lies within the rigorous rounding bound of zero.
fn near_zero_candidates(theta: &RealTuple, h: u64) -> Vec<Vec<i64>> {
    let m = theta.len();
    let th = theta.mids_f64();
    let u = f64::EPSILON / 2.0;
    let err: f64 = th
        .iter()
        .enumerate()
        .map(|(i, t)| theta.entry(i).width_f64() + t.abs() * f64::EPSILON + (m as f64 + 2.0) * u * t.abs())
        .sum();
    let bound = h as f64 * err * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let total = box_size(h, m) as u64;
    let mut c: Vec<Vec<i64>> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let l = decode(i, h, m);
            let lead = l.iter().find(|&&x| x != 0).copied()?;
            if lead < 0 {
                return None;
            }
            let v: f64 = l.iter().zip(&th).map(|(a, b)| *a as f64 * b).sum();
            (v.abs() <= bound).then_some(l)
        })
        .collect();
    c.sort_by(|a, b| max_norm(a).cmp(&max_norm(b)).then_with(|| a.cmp(b)));
    c
}

fn residual(theta: &RealTuple, l: &[i64], prec: u32) -> Result<Interval> {
    let t = theta.at_precision(prec)?;
    let xs: Vec<&Interval> = t.entries().iter().collect();
    Ok(form_value(l, &xs))
}

/// Search for a nonzero `l` with `|l|_∞ ≤ h` and `l·θ = 0`.
pub fn regularity_probe(theta: &RealTuple, include_pi: bool, h: u64, opts: &SearchOptions) -> Result<RelationOutcome> {
    if h == 0 {
        return Err(Error::invalid("height bound must be at least 1"));
    }
    let theta = if include_pi { theta.append_pi()? } else { theta.clone() };
    let prec = opts.start_precision();
    let m = theta.len();
    if box_size(h, m) > opts.budget as u128 {
        return lattice_probe(&theta, h, prec);
    }
    let theta = theta.at_precision(prec)?;
    for l in near_zero_candidates(&theta, h) {
        if let Some(z) = exact_zero(&theta, &l) {
            if z {
                let residual = residual(&theta, &l, prec)?;
                return Ok(found(l, true, true, residual, prec));
            }
            continue;
        }
        // Confirm at double precision; a candidate that separates from zero is discarded.
        let full = (2 * prec).min(MAX_PRECISION);
        let r1 = residual(&theta, &l, prec)?;
        if !r1.contains_zero() {
            continue;
        }
        let r2 = residual(&theta, &l, full)?;
        if r2.contains_zero() {
            return Ok(found(l, false, true, r2, full));
        }
    }
    Ok(RelationOutcome::NoRelationFound { height: h, precision: prec, exhaustive: true })
}

fn found(l: Vec<i64>, exact: bool, exhaustive: bool, residual: Interval, precision: u32) -> RelationOutcome {
    RelationOutcome::RelationFound { max_norm: max_norm(&l), l, verified_exactly: exact, exhaustive, residual, precision }
}

/// Reduction of `[I | round(2^{prec/2}·θ)]`; never certifies absence.
fn lattice_probe(theta: &RealTuple, h: u64, prec: u32) -> Result<RelationOutcome> {
    let m = theta.len();
    let t = theta.at_precision(prec)?;
    let scale = Float::with_val(prec, 1) << (prec / 2);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut v = vec![BigInt::zero(); m + 1];
        v[i] = BigInt::from(1);
        let x = Float::with_val(prec, t.entry(i).mid() * &scale);
        let r = x.to_integer().ok_or_else(|| Error::invalid("non-finite entry"))?;
        v[m] = crate::arith::interval::rug_to_bigint(&r);
        basis.push(v);
    }
    let reduced = lll_reduce(&basis)?;
    let mut cands: Vec<Vec<i64>> = reduced
        .iter()
        .filter_map(|r| r[..m].iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
        .filter(|l| l.iter().any(|&x| x != 0) && max_norm(l) <= h)
        .map(|mut l| {
            sign_normalise(&mut l);
            l
        })
        .collect();
    cands.sort_by(|a, b| max_norm(a).cmp(&max_norm(b)).then_with(|| a.cmp(b)));
    for l in cands {
        if let Some(z) = exact_zero(&t, &l) {
            if z {
                let res = residual(&t, &l, prec)?;
                return Ok(found(l, true, false, res, prec));
            }
            continue;
        }
        let res = residual(&t, &l, prec)?;
        if res.contains_zero() {
            return Ok(found(l, false, false, res, prec));
        }
    }
    Ok(RelationOutcome::NoRelationFound { height: h, precision: prec, exhaustive: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(src: &[&str], p: u32) -> RealTuple {
        RealTuple::from_exprs("t", src, p).unwrap()
    }

    #[test]
    fn rational_relation_tie_break() {
        let r = regularity_probe(&tup(&["1", "2", "3"], 128), false, 10, &SearchOptions::default()).unwrap();
        assert_eq!(r.relation().unwrap(), &[1, 1, -1]);
    }

    #[test]
    fn logs_independent() {
        let o = SearchOptions { precision: 256, ..Default::default() };
        let r = regularity_probe(&tup(&["log(2)", "log(3)"], 256), false, 100, &o).unwrap();
        assert!(matches!(r, RelationOutcome::NoRelationFound { exhaustive: true, .. }));
    }

    #[test]
    fn golden_square() {
        let r = regularity_probe(&tup(&["1", "phi", "phi^2"], 128), false, 5, &SearchOptions::default()).unwrap();
        match r {
            RelationOutcome::RelationFound { l, verified_exactly, .. } => {
                assert_eq!(l, vec![1, 1, -1]);
                assert!(verified_exactly);
            }
            _ => panic!("expected a relation"),
        }
    }

    #[test]
    fn transcendental_relation_verified_numerically() {
        // log 6 = log 2 + log 3, invisible to exact arithmetic here.
        let r = regularity_probe(&tup(&["log(2)", "log(3)", "log(6)"], 128), false, 3, &SearchOptions::default()).unwrap();
        match r {
            RelationOutcome::RelationFound { l, verified_exactly, .. } => {
                assert_eq!(l, vec![1, 1, -1]);
                assert!(!verified_exactly);
            }
            _ => panic!("expected a relation"),
        }
    }

    #[test]
    fn pi_is_appended() {
        let r = regularity_probe(&tup(&["pi", "1"], 128), true, 2, &SearchOptions::default()).unwrap();
        assert_eq!(r.relation().unwrap(), &[1, 0, -1]);
    }

    #[test]
    fn lattice_mode_finds_relation() {
        let o = SearchOptions { budget: 10, precision: 256 };
        let r = regularity_probe(&tup(&["log(2)", "log(3)", "log(12)"], 256), false, 50, &o).unwrap();
        match r {
            RelationOutcome::RelationFound { l, exhaustive, .. } => {
                assert_eq!(l, vec![2, 1, -1]);
                assert!(!exhaustive);
            }
            _ => panic!("expected a relation"),
        }
    }
}
