//! Bituple probes: `log|exp((l·θ_I)(r·κ_J)) − 1| ≥ −c(L^η + R^η)`.
//!
//! For real tuples the minimum over pairs `(l, r)` of `|l·θ_I|·|r·κ_J|` is the
//! product of the separate minima, and the subset choice factorises the same
//! way, so each side is searched independently.

use serde::Serialize;

use super::expm1::log_expm1_sym;
use super::genericity::{best_subset_record, certified_ge, threshold, Overall};
use super::linear_form::{LinearFormRecord, SearchOptions};
use super::tuple::{RealTuple, MAX_PRECISION};
use crate::arith::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BituplePoint {
    pub l_height: u64,
    pub r_height: u64,
    pub theta_best: LinearFormRecord,
    pub kappa_best: LinearFormRecord,
    pub product: Interval,
    pub log_exp_value: Interval,
    /// `−c(L^η + R^η)`.
    pub threshold: Interval,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BitupleReport {
    pub theta_label: String,
    pub kappa_label: String,
    pub mu: usize,
    pub nu: usize,
    pub eta: f64,
    pub c: f64,
    pub records: Vec<BituplePoint>,
    pub overall: Overall,
    pub empirical_c: f64,
}

#[derive(Clone, Debug)]
pub struct BitupleParams {
    pub mu: usize,
    pub nu: usize,
    pub eta: f64,
    pub c: f64,
    pub l_set: Vec<u64>,
    pub r_set: Vec<u64>,
}

fn point(theta: &RealTuple, kappa: &RealTuple, l: u64, r: u64, p: &BitupleParams, opts: &SearchOptions) -> Result<BituplePoint> {
    let mut o = opts.clone();
    loop {
        let a = best_subset_record(theta, p.mu, l, &o)?;
        let b = best_subset_record(kappa, p.nu, r, &o)?;
        let prec = a.precision.min(b.precision).max(o.start_precision());
        let product = a.value.with_prec(prec).mul(&b.value.with_prec(prec));
        let lev = if product.is_exact_zero() { Interval::neg_infinity(prec) } else { log_expm1_sym(&product) };
        let t = threshold(1.0, p.eta, l, prec).add(&threshold(1.0, p.eta, r, prec)).mul(&Interval::from_f64(prec, p.c));
        match certified_ge(&lev, &t) {
            Some(pass) => {
                return Ok(BituplePoint {
                    l_height: l,
                    r_height: r,
                    theta_best: a,
                    kappa_best: b,
                    product,
                    log_exp_value: lev,
                    threshold: t,
                    pass,
                })
            }
            None if o.start_precision() >= MAX_PRECISION => {
                return Err(Error::PrecisionExhausted { required_bits: 2 * MAX_PRECISION })
            }
            None => o.precision = (o.start_precision() * 2).min(MAX_PRECISION),
        }
    }
}

pub fn bituple_probe(theta: &RealTuple, kappa: &RealTuple, p: &BitupleParams, opts: &SearchOptions) -> Result<BitupleReport> {
    if p.l_set.is_empty() || p.r_set.is_empty() {
        return Err(Error::invalid("empty L or R set"));
    }
    if p.mu == 0 || p.mu > theta.len() || p.nu == 0 || p.nu > kappa.len() {
        return Err(Error::invalid("need 1 ≤ μ ≤ m and 1 ≤ ν ≤ n"));
    }
    if !(p.c > 0.0) || !p.eta.is_finite() || p.eta < 1.0 {
        return Err(Error::invalid("need c > 0 and η ≥ 1"));
    }
    let mut records = Vec::with_capacity(p.l_set.len() * p.r_set.len());
    for &l in &p.l_set {
        for &r in &p.r_set {
            records.push(point(theta, kappa, l, r, p, opts)?);
        }
    }
    let overall = if records.iter().all(|r| r.pass) { Overall::GenericUpToBudget } else { Overall::SpecialWitnesses };
    let empirical_c = records
        .iter()
        .map(|r| {
            let v = r.log_exp_value.lo_f64();
            let scale = (r.l_height as f64).powf(p.eta) + (r.r_height as f64).powf(p.eta);
            if v.is_infinite() {
                f64::INFINITY
            } else {
                (-v / scale).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    Ok(BitupleReport {
        theta_label: theta.label.clone(),
        kappa_label: kappa.label.clone(),
        mu: p.mu,
        nu: p.nu,
        eta: p.eta,
        c: p.c,
        records,
        overall,
        empirical_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(src: &[&str]) -> RealTuple {
        RealTuple::from_exprs("t", src, 128).unwrap()
    }

    #[test]
    fn golden_times_sqrt_two() {
        let p = BitupleParams { mu: 2, nu: 2, eta: 1.0, c: 1.0, l_set: vec![5], r_set: vec![3] };
        let r = bituple_probe(&tup(&["1", "phi"]), &tup(&["1", "sqrt(2)"]), &p, &SearchOptions::default()).unwrap();
        let pt = &r.records[0];
        // Oracle: direct product over all pairs in f64.
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let s2 = 2f64.sqrt();
        let mut best = f64::INFINITY;
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                for x in -3i64..=3 {
                    for y in -3i64..=3 {
                        let u = (a as f64 + b as f64 * phi).abs();
                        let v = (x as f64 + y as f64 * s2).abs();
                        if (a, b) != (0, 0) && (x, y) != (0, 0) {
                            best = best.min(u * v);
                        }
                    }
                }
            }
        }
        assert!((pt.product.mid_f64() - best).abs() < 1e-14);
        assert!((pt.product.mid_f64() - 0.025032).abs() < 1e-5);
        assert!(pt.pass);
    }

    #[test]
    fn singletons() {
        let p = BitupleParams { mu: 1, nu: 1, eta: 1.0, c: 1.0, l_set: vec![1], r_set: vec![1] };
        let r = bituple_probe(&tup(&["0.5"]), &tup(&["3"]), &p, &SearchOptions::default()).unwrap();
        assert!(r.records[0].product.contains_f64(1.5));
    }
}
