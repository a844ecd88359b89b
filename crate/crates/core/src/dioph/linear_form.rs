//! Minimal values of integer linear forms `|Σ l_λ θ_{i_λ}|` over `0 < |l|_∞ ≤ D`.
//!
//! Only sign-normalised `l` (first nonzero entry positive) are enumerated:
//! `|l·θ|` is invariant under `l ↦ −l`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::expm1::log_expm1_sym;
use super::tuple::{RealTuple, MAX_PRECISION};
use crate::arith::{lll_reduce, FieldElem, Interval, Quadratic};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Reported `log_value` enclosures are at most this wide.
pub const LOG_WIDTH: f64 = 2.3283064365386963e-10; // 2^-32

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: u64,
    pub precision: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, precision: 128 }
    }
}

impl SearchOptions {
    pub fn start_precision(&self) -> u32 {
        self.precision.max(128)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearFormRecord {
    pub subset: Vec<usize>,
    pub l: Vec<i64>,
    pub height: u64,
    pub value: Interval,
    pub log_value: Interval,
    pub log_exp_value: Interval,
    /// Minimiser determined in exact arithmetic.
    pub exact: bool,
    /// Lattice-reduction mode: `value` is an upper bound on the true minimum.
    pub approximate: bool,
    /// Several candidates remained indistinguishable; lexicographic choice.
    pub numerical_tie: bool,
    pub precision: u32,
}

pub fn sign_normalise(l: &mut [i64]) {
    if l.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in l.iter_mut() {
            *x = -*x;
        }
    }
}

pub fn max_norm(l: &[i64]) -> u64 {
    l.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// `(2D+1)^μ`, saturating.
pub fn box_size(d: u64, mu: usize) -> u128 {
    let base = 2 * d as u128 + 1;
    let mut t: u128 = 1;
    for _ in 0..mu {
        t = t.saturating_mul(base);
    }
    t
}

fn decode(mut idx: u64, d: u64, mu: usize) -> Vec<i64> {
    let base = 2 * d + 1;
    let mut l = vec![0i64; mu];
    for pos in (0..mu).rev() {
        l[pos] = (idx % base) as i64 - d as i64;
        idx /= base;
    }
    l
}

fn positive_leading(l: &[i64]) -> bool {
    l.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// `|Σ l_i x_i|` as an interval.
pub fn form_value(l: &[i64], xs: &[&Interval]) -> Interval {
    let p = xs[0].prec();
    let mut acc = Interval::zero(p);
    for (li, x) in l.iter().zip(xs) {
        if *li != 0 {
            acc = acc.add(&x.mul_i64(*li));
        }
    }
    acc.abs()
}

fn rational_value(l: &[i64], qs: &[BigRational]) -> BigRational {
    l.iter().zip(qs).map(|(li, q)| q * BigInt::from(*li)).sum::<BigRational>().abs()
}

/// Sign of `a + b√d` for `d > 0`.
fn quad_sign(q: &Quadratic) -> Ordering {
    let sa = q.a.cmp(&BigRational::zero());
    let sb = q.b.cmp(&BigRational::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare a² with d·b².
    let lhs = &q.a * &q.a;
    let rhs = BigRational::from_integer(BigInt::from(q.d)) * &q.b * &q.b;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

fn quad_form(l: &[i64], qs: &[Quadratic]) -> Quadratic {
    let d = qs[0].d;
    let mut acc = Quadratic::rational(d, BigRational::zero());
    for (li, q) in l.iter().zip(qs) {
        acc = acc.add(&q.mul(&Quadratic::rational(d, BigRational::from_integer(BigInt::from(*li)))));
    }
    if quad_sign(&acc) == Ordering::Less {
        Quadratic::new(d, -acc.a, -acc.b)
    } else {
        acc
    }
}

/// Exhaustive f64 pass: indices of candidates that may attain the minimum.
fn prefilter(theta: &RealTuple, subset: &[usize], d: u64) -> Vec<u64> {
    let mu = subset.len();
    let th: Vec<f64> = subset.iter().map(|&i| theta.entry(i).mid_f64()).collect();
    let u = f64::EPSILON / 2.0;
    let err: f64 = subset
        .iter()
        .zip(&th)
        .map(|(&i, t)| theta.entry(i).width_f64() + t.abs() * f64::EPSILON + (mu as f64 + 2.0) * u * t.abs())
        .sum();
    let bound = d as f64 * err * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let total = box_size(d, mu) as u64;
    let eval = |idx: u64| -> Option<f64> {
        let l = decode(idx, d, mu);
        if !positive_leading(&l) {
            return None;
        }
        Some(l.iter().zip(&th).map(|(a, b)| *a as f64 * b).sum::<f64>().abs())
    };
    let min = (0..total)
        .into_par_iter()
        .filter_map(eval)
        .min_by(|a, b| a.total_cmp(b))
        .unwrap_or(f64::INFINITY);
    let cut = min + 2.0 * bound;
    (0..total).into_par_iter().filter(|&i| eval(i).is_some_and(|v| v <= cut)).collect()
}

fn finish(
    theta: &RealTuple,
    subset: &[usize],
    d: u64,
    l: Vec<i64>,
    mut prec: u32,
    exact_value: Option<BigRational>,
    flags: (bool, bool, bool),
) -> Result<LinearFormRecord> {
    let (exact, approximate, numerical_tie) = flags;
    loop {
        let value = match &exact_value {
            Some(q) => Interval::from_rational(prec, q),
            None => {
                let t = theta.at_precision(prec)?;
                let xs: Vec<&Interval> = subset.iter().map(|&i| t.entry(i)).collect();
                form_value(&l, &xs)
            }
        };
        let exact_zero = exact_value.as_ref().is_some_and(|q| Zero::is_zero(q));
        let log_value = if exact_zero { Interval::neg_infinity(prec) } else { value.ln() };
        let ok = exact_zero || (log_value.is_finite() && log_value.width_f64() <= LOG_WIDTH);
        if ok || prec >= MAX_PRECISION {
            let log_exp_value = log_expm1_sym(&value);
            return Ok(LinearFormRecord {
                subset: subset.to_vec(),
                l,
                height: d,
                value,
                log_value,
                log_exp_value,
                exact,
                approximate,
                numerical_tie,
                precision: prec,
            });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

fn check_args(theta: &RealTuple, subset: &[usize], d: u64) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::invalid("index subset must be nonempty"));
    }
    if d == 0 {
        return Err(Error::invalid("height bound D must be at least 1"));
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= theta.len()) {
        return Err(Error::invalid(format!("index {i} out of range for a tuple of length {}", theta.len())));
    }
    Ok(())
}

pub fn linear_form_min(theta: &RealTuple, subset: &[usize], d: u64, opts: &SearchOptions) -> Result<LinearFormRecord> {
    check_args(theta, subset, d)?;
    if box_size(d, subset.len()) > opts.budget as u128 {
        return lattice_min(theta, subset, d, opts);
    }
    let p0 = opts.start_precision();
    let mu = subset.len();
    let mut cands: Vec<Vec<i64>> = prefilter(theta, subset, d).into_iter().map(|i| decode(i, d, mu)).collect();

    if let Some(qs) = theta.all_rational(subset) {
        let mut best: Option<(BigRational, Vec<i64>)> = None;
        for l in cands {
            let v = rational_value(&l, &qs);
            if best.as_ref().map_or(true, |(b, _)| v < *b) {
                best = Some((v, l));
            }
        }
        let (v, l) = best.ok_or_else(|| Error::invalid("empty search box"))?;
        return finish(theta, subset, d, l, p0, Some(v), (true, false, false));
    }

    let quad = theta.common_quadratic(subset);
    let mut prec = p0;
    loop {
        let t = theta.at_precision(prec)?;
        let xs: Vec<&Interval> = subset.iter().map(|&i| t.entry(i)).collect();
        let vals: Vec<Interval> = cands.par_iter().map(|l| form_value(l, &xs)).collect();
        let min_hi = vals.iter().map(|v| v.hi().clone()).min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        let keep: Vec<usize> = (0..cands.len()).filter(|&i| *vals[i].lo() <= min_hi).collect();
        cands = keep.iter().map(|&i| cands[i].clone()).collect();
        if cands.len() == 1 {
            let l = cands.pop().unwrap();
            // A separated candidate may still be an exact relation.
            if let Some(qs) = &quad {
                if quad_form(&l, qs).is_zero() {
                    return finish(theta, subset, d, l, prec, Some(BigRational::zero()), (true, false, false));
                }
            }
            return finish(theta, subset, d, l, prec, None, (false, false, false));
        }
        if let Some(qs) = &quad {
            // Exact resolution inside ℚ(√d).
            let mut best: Option<(Quadratic, Vec<i64>)> = None;
            for l in cands {
                let v = quad_form(&l, qs);
                let better = best.as_ref().map_or(true, |(b, _)| quad_sign(&v.sub(b)) == Ordering::Less);
                if better {
                    best = Some((v, l));
                }
            }
            let (v, l) = best.unwrap();
            let exact_zero = v.is_zero().then(BigRational::zero);
            return finish(theta, subset, d, l, prec, exact_zero, (true, false, false));
        }
        if prec >= 2 * p0 {
            let l = cands.swap_remove(0);
            return finish(theta, subset, d, l, prec, None, (false, false, true));
        }
        prec *= 2;
    }
}

/// Lattice-reduction search, returning an upper bound on the minimum.
fn lattice_min(theta: &RealTuple, subset: &[usize], d: u64, opts: &SearchOptions) -> Result<LinearFormRecord> {
    let mu = subset.len();
    let th: Vec<f64> = subset.iter().map(|&i| theta.entry(i).mid_f64().abs()).collect();
    let tmax = th.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    // S ≈ D^μ / max|θ| balances the coefficient and residual parts.
    let log2_s = (mu as f64 * (d as f64).log2() - tmax.log2()).max(0.0).ceil() as u32;
    let prec = opts.start_precision().max(log2_s + 64).min(MAX_PRECISION);
    let t = theta.at_precision(prec)?;
    let scale = Float::with_val(prec, 1) << log2_s;
    let mut basis = Vec::with_capacity(mu);
    for (row, &i) in subset.iter().enumerate() {
        let mut v = vec![BigInt::zero(); mu + 1];
        v[row] = BigInt::from(1);
        let x = Float::with_val(prec, t.entry(i).mid() * &scale);
        let r = x.to_integer().ok_or_else(|| Error::invalid("non-finite entry"))?;
        v[mu] = crate::arith::interval::rug_to_bigint(&r);
        basis.push(v);
    }
    let reduced = lll_reduce(&basis)?;
    let mut cands: Vec<Vec<i64>> = Vec::new();
    for r in reduced.iter() {
        let l: Option<Vec<i64>> = r[..mu].iter().map(|x| x.to_i64()).collect();
        if let Some(mut l) = l {
            if l.iter().any(|&x| x != 0) && max_norm(&l) <= d {
                sign_normalise(&mut l);
                cands.push(l);
            }
        }
    }
    for i in 0..mu {
        let mut e = vec![0; mu];
        e[i] = 1;
        cands.push(e);
    }
    cands.sort();
    cands.dedup();
    let xs: Vec<&Interval> = subset.iter().map(|&i| t.entry(i)).collect();
    let mut best: Option<(Interval, Vec<i64>)> = None;
    for l in cands {
        let v = form_value(&l, &xs);
        if best.as_ref().map_or(true, |(b, _)| v.certainly_lt(b)) {
            best = Some((v, l));
        }
    }
    let (_, l) = best.unwrap();
    finish(theta, subset, d, l, prec, None, (false, true, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(src: &[&str]) -> RealTuple {
        RealTuple::from_exprs("t", src, 128).unwrap()
    }

    #[test]
    fn isolated_quadratic_relation_is_exact_zero() {
        let r = linear_form_min(&tup(&["5", "5*sqrt(5)", "2*phi"]), &[0, 1, 2], 5, &SearchOptions::default()).unwrap();
        assert_eq!(r.l, vec![1, 1, -5]);
        assert!(r.value.is_exact_zero() && r.log_value.is_neg_infinity() && r.exact);
        assert_eq!(r.precision, 128);
    }

    #[test]
    fn golden_ratio_height_five() {
        let r = linear_form_min(&tup(&["1", "phi"]), &[0, 1], 5, &SearchOptions::default()).unwrap();
        assert_eq!(r.l, vec![5, -3]);
        assert!((r.value.mid_f64() - 0.1458980337503155).abs() < 1e-15);
        assert!(!r.approximate);
        assert!(r.log_value.width_f64() <= LOG_WIDTH);
    }

    #[test]
    fn rational_dependence_is_exact_zero() {
        let r = linear_form_min(&tup(&["1", "2"]), &[0, 1], 2, &SearchOptions::default()).unwrap();
        assert_eq!(r.l, vec![2, -1]);
        assert!(r.value.is_exact_zero());
        assert!(r.log_value.is_neg_infinity());
    }

    #[test]
    fn sqrt_two() {
        let r = linear_form_min(&tup(&["1", "sqrt(2)"]), &[0, 1], 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.l, vec![3, -2]);
        assert!((r.value.mid_f64() - 0.1715728752538097).abs() < 1e-15);
    }

    #[test]
    fn transcendental_entries() {
        let r = linear_form_min(&tup(&["log(2)", "log(3)"]), &[0, 1], 10, &SearchOptions::default()).unwrap();
        assert!(!r.exact && !r.approximate);
        // Oracle: brute force in f64 over the same box.
        let (a, b) = (2f64.ln(), 3f64.ln());
        let mut best = f64::INFINITY;
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                if (x, y) != (0, 0) {
                    best = best.min((x as f64 * a + y as f64 * b).abs());
                }
            }
        }
        assert!((r.value.mid_f64() - best).abs() < 1e-12);
    }

    #[test]
    fn lattice_mode_is_flagged_and_bounded() {
        let opts = SearchOptions { budget: 100, precision: 128 };
        let r = linear_form_min(&tup(&["1", "phi"]), &[0, 1], 40, &opts).unwrap();
        assert!(r.approximate);
        assert!(max_norm(&r.l) <= 40);
        let exact = linear_form_min(&tup(&["1", "phi"]), &[0, 1], 40, &SearchOptions::default()).unwrap();
        assert!(!r.value.certainly_lt(&exact.value));
    }

    #[test]
    fn argument_errors() {
        let t = tup(&["1", "phi"]);
        assert!(linear_form_min(&t, &[], 3, &SearchOptions::default()).is_err());
        assert!(linear_form_min(&t, &[0, 5], 3, &SearchOptions::default()).is_err());
        assert!(linear_form_min(&t, &[0], 0, &SearchOptions::default()).is_err());
    }
}
