//! Budget-bounded genericity probes: is `log|exp(l·θ_I) − 1| ≥ −c·D^η` for
//! every nonzero `|l| ≤ D`, for some index subset `I` of size `μ`?

use rayon::prelude::*;
use serde::Serialize;

use super::linear_form::{linear_form_min, LinearFormRecord, SearchOptions};
use super::tuple::{RealTuple, MAX_PRECISION};
use crate::arith::Interval;
use crate::error::{Error, Result};
use crate::lattice::subsets;

#[derive(Clone, Debug, Serialize)]
pub struct ProbeParams {
    pub mu: usize,
    pub eta: f64,
    pub c: f64,
    pub d_set: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    GenericUpToBudget,
    SpecialWitnesses,
}

#[derive(Clone, Debug, Serialize)]
pub struct DRecord {
    pub d: u64,
    /// Record for the subset whose minimum is largest.
    pub best: LinearFormRecord,
    /// `−c·D^η`.
    pub threshold: Interval,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericityReport {
    pub label: String,
    pub mu: usize,
    pub eta: f64,
    pub c: f64,
    pub records: Vec<DRecord>,
    pub overall: Overall,
    /// Smallest `c` for which every tested `D` would pass.
    pub empirical_c: f64,
}

/// `−c·D^η` as an interval.
pub fn threshold(c: f64, eta: f64, d: u64, prec: u32) -> Interval {
    let dd = Interval::from_i64(prec, d as i64);
    let pow = dd.ln().mul(&Interval::from_f64(prec, eta)).exp();
    pow.mul(&Interval::from_f64(prec, c)).neg()
}

/// Certified comparison `value ≥ t`; `None` when the enclosures overlap.
pub fn certified_ge(value: &Interval, t: &Interval) -> Option<bool> {
    if value.is_neg_infinity() {
        return Some(false);
    }
    if value.lo() >= t.hi() {
        Some(true)
    } else if value.hi() < t.lo() {
        Some(false)
    } else {
        None
    }
}

/// Pick the record with the largest minimum; ties keep the earlier subset.
pub fn select_max(records: Vec<LinearFormRecord>) -> LinearFormRecord {
    let mut it = records.into_iter();
    let mut best = it.next().expect("at least one subset");
    for r in it {
        let greater = if r.value.overlaps(&best.value) {
            r.value.mid_f64() > best.value.mid_f64()
        } else {
            r.value.certainly_gt(&best.value)
        };
        if greater {
            best = r;
        }
    }
    best
}

/// Max over `μ`-subsets of the minimal linear form at height `d`.
pub fn best_subset_record(theta: &RealTuple, mu: usize, d: u64, opts: &SearchOptions) -> Result<LinearFormRecord> {
    let subs = subsets(theta.len(), mu);
    let recs = subs
        .par_iter()
        .map(|s| linear_form_min(theta, s, d, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(select_max(recs))
}

fn decide(theta: &RealTuple, mu: usize, d: u64, p: &ProbeParams, opts: &SearchOptions) -> Result<DRecord> {
    let mut o = opts.clone();
    loop {
        let best = best_subset_record(theta, mu, d, &o)?;
        let prec = best.precision.max(o.start_precision());
        let t = threshold(p.c, p.eta, d, prec);
        match certified_ge(&best.log_exp_value, &t) {
            Some(pass) => return Ok(DRecord { d, best, threshold: t, pass }),
            None if o.start_precision() >= MAX_PRECISION => {
                return Err(Error::PrecisionExhausted { required_bits: 2 * MAX_PRECISION })
            }
            None => o.precision = (o.start_precision() * 2).min(MAX_PRECISION),
        }
    }
}

pub fn genericity_probe(theta: &RealTuple, p: &ProbeParams, opts: &SearchOptions) -> Result<GenericityReport> {
    if p.d_set.is_empty() {
        return Err(Error::invalid("empty D set"));
    }
    if p.mu == 0 || p.mu > theta.len() {
        return Err(Error::invalid(format!("μ must lie in 1..={}", theta.len())));
    }
    if !(p.c > 0.0) || !p.eta.is_finite() || p.eta < 1.0 {
        return Err(Error::invalid("need c > 0 and η ≥ 1"));
    }
    let records = p
        .d_set
        .iter()
        .map(|&d| decide(theta, p.mu, d, p, opts))
        .collect::<Result<Vec<_>>>()?;
    let overall = if records.iter().all(|r| r.pass) { Overall::GenericUpToBudget } else { Overall::SpecialWitnesses };
    let empirical_c = records
        .iter()
        .map(|r| {
            let v = r.best.log_exp_value.lo_f64();
            if v.is_infinite() {
                f64::INFINITY
            } else {
                (-v / (r.d as f64).powf(p.eta)).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    Ok(GenericityReport { label: theta.label.clone(), mu: p.mu, eta: p.eta, c: p.c, records, overall, empirical_c })
}

/// Probe with an integer matrix `A` applied first: `θ ↦ Aθ`.
pub fn genericity_probe_transformed(
    theta: &RealTuple,
    a: &[Vec<i64>],
    p: &ProbeParams,
    opts: &SearchOptions,
) -> Result<GenericityReport> {
    let m = theta.len();
    if a.len() != m || a.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: a.len() });
    }
    let det = crate::arith::IntMatrix::from_i64_rows(a)?.det()?;
    if num_traits::Zero::is_zero(&det) {
        return Err(Error::invalid("transformation matrix is singular"));
    }
    let sources: Vec<String> = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(&theta.sources)
                .filter(|(c, _)| **c != 0)
                .map(|(c, s)| format!("({c})*({s})"))
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    let refs: Vec<&str> = sources.iter().map(|s| s.as_str()).collect();
    let t = RealTuple::from_exprs(format!("A*{}", theta.label), &refs, theta.precision_bits)?;
    genericity_probe(&t, p, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct GenEstimate {
    pub estimate: usize,
    /// Even `μ = 1` failed within the budget; the estimate is clamped to 1.
    pub clamped: bool,
    pub budget_relative: bool,
    pub reports: Vec<GenericityReport>,
}

/// Largest `μ` passing every `D`; passing is monotone in `μ`, so scan upward.
pub fn gen_estimate(theta: &RealTuple, eta: f64, c: f64, d_set: &[u64], opts: &SearchOptions) -> Result<GenEstimate> {
    let mut reports = Vec::new();
    let mut estimate = 0;
    for mu in 1..=theta.len() {
        let r = genericity_probe(theta, &ProbeParams { mu, eta, c, d_set: d_set.to_vec() }, opts)?;
        let pass = r.overall == Overall::GenericUpToBudget;
        reports.push(r);
        if !pass {
            break;
        }
        estimate = mu;
    }
    Ok(GenEstimate { estimate: estimate.max(1), clamped: estimate == 0, budget_relative: true, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(src: &[&str]) -> RealTuple {
        RealTuple::from_exprs("t", src, 128).unwrap()
    }

    #[test]
    fn golden_passes() {
        let p = ProbeParams { mu: 2, eta: 1.0, c: 3.0, d_set: (2..=20).collect() };
        let r = genericity_probe(&tup(&["1", "phi"]), &p, &SearchOptions::default()).unwrap();
        assert_eq!(r.overall, Overall::GenericUpToBudget);
        assert_eq!(r.records.len(), 19);
        assert!(r.empirical_c <= 3.0);
    }

    #[test]
    fn mu_one_trivial() {
        let p = ProbeParams { mu: 1, eta: 1.0, c: 1.0, d_set: vec![1] };
        let r = genericity_probe(&tup(&["0.5", "3"]), &p, &SearchOptions::default()).unwrap();
        // The larger single entry wins the existential choice.
        assert_eq!(r.records[0].best.subset, vec![1]);
        assert_eq!(r.records[0].best.l, vec![1]);
        assert!(r.records[0].pass);
    }

    #[test]
    fn dependence_lowers_estimate() {
        let g = gen_estimate(&tup(&["1", "2", "phi"]), 1.5, 1.0, &[2, 3], &SearchOptions::default()).unwrap();
        assert!(g.estimate < 3);
        let last = g.reports.last().unwrap();
        assert_eq!(last.overall, Overall::SpecialWitnesses);
        let one = gen_estimate(&tup(&["sqrt(3)"]), 1.0, 1.0, &[1, 2], &SearchOptions::default()).unwrap();
        assert_eq!(one.estimate, 1);
    }

    #[test]
    fn bad_params() {
        let t = tup(&["1", "phi"]);
        let o = SearchOptions::default();
        assert!(genericity_probe(&t, &ProbeParams { mu: 2, eta: 1.0, c: 1.0, d_set: vec![] }, &o).is_err());
        assert!(genericity_probe(&t, &ProbeParams { mu: 3, eta: 1.0, c: 1.0, d_set: vec![1] }, &o).is_err());
    }
}
