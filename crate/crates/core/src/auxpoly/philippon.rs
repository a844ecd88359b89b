//! Hypothesis auditor for the Philippon-type algebraic-independence
//! criterion. Every hypothesis gets a status; the conclusion is never drawn.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::evaluate::log_abs;
use super::poly::SparsePoly;
use crate::arith::{ComplexInterval, IntMatrix, Interval};
use crate::dioph::genericity::threshold;
use crate::dioph::RealTuple;
use crate::error::{Error, Result};
use crate::lattice::smith_normal_form;

const MAX_PRECISION: u32 = 16384;
const MAX_COMPONENTS: u64 = 4096;
const MAX_DESCENTS: usize = 20_000;
const ITERATIONS: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhilipponCase {
    AllLargeD,
    InfinitelyManyD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct PhilipponParams {
    pub c1: f64,
    pub c2: f64,
    pub big_c: f64,
    pub eta: f64,
    pub d: u64,
    pub case: PhilipponCase,
    /// A user-supplied lower bound for `log|z, Θ|` over the common zeros.
    pub zero_distance_bound: Option<f64>,
    pub seed: u64,
    pub starts: usize,
    pub precision: u32,
}

impl PhilipponParams {
    pub fn new(c1: f64, c2: f64, big_c: f64, eta: f64, d: u64) -> Self {
        PhilipponParams {
            c1,
            c2,
            big_c,
            eta,
            d,
            case: PhilipponCase::AllLargeD,
            zero_distance_bound: None,
            seed: 0,
            starts: 100,
            precision: 128,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyCheck {
    pub degree: u64,
    pub degree_status: Status,
    pub log_norm: Interval,
    pub norm_status: Status,
    pub log_value: Interval,
    pub value_status: Status,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    UserBound,
    /// `Θ` satisfies every equation exactly.
    ExactZero,
    /// Local minimisation over the cosets of the binomial zero set.
    CosetSearch,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceCheck {
    pub status: Status,
    pub method: DistanceMethod,
    /// `log` of the smallest distance found, or the supplied bound.
    pub log_distance: Option<f64>,
    /// `−3C·D^η`.
    pub target: Interval,
    /// A `Fail` from the search is certified (the distance is attained at an
    /// actual zero); a `Pass` is only as good as the local search.
    pub certified: bool,
    pub components: u64,
    pub free_dim: usize,
    pub descents: usize,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhilipponAudit {
    pub case: PhilipponCase,
    pub d: u64,
    pub eta: f64,
    pub polys: Vec<PolyCheck>,
    pub degree: Status,
    pub norm: Status,
    pub value: Status,
    pub distance: DistanceCheck,
    /// Always `false`: only hypothesis status is reported.
    pub conclusion_asserted: bool,
}

fn combine(it: impl Iterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in it {
        match s {
            Status::Fail => return Status::Fail,
            Status::Unknown => out = Status::Unknown,
            Status::Pass => {}
        }
    }
    out
}

/// `a ≤ b` certified, refuted or undecided.
fn compare_le(a: &Interval, b: &Interval) -> Status {
    if a.hi() <= b.lo() {
        Status::Pass
    } else if a.lo() > b.hi() {
        Status::Fail
    } else {
        Status::Unknown
    }
}

fn eval_exact(f: &SparsePoly, x: &[BigRational]) -> BigRational {
    let mut sum = BigRational::zero();
    for (e, c) in &f.terms {
        let mut t = BigRational::from_integer(c.clone());
        for (xi, &ei) in x.iter().zip(e) {
            t *= num_traits::pow(xi.clone(), ei as usize);
        }
        sum += t;
    }
    sum
}

fn eval_interval(f: &SparsePoly, x: &[Interval], p: u32) -> Interval {
    let mut sum = Interval::zero(p);
    for (e, c) in &f.terms {
        let mut t = Interval::from_bigint(p, c);
        for (xi, &ei) in x.iter().zip(e) {
            if ei != 0 {
                t = t.mul(&xi.powi(ei as i64));
            }
        }
        sum = sum.add(&t);
    }
    sum
}

/// `log|f(Θ)|` against `t`, escalating precision while the comparison straddles.
fn value_check(f: &SparsePoly, theta: &RealTuple, prm: &PhilipponParams) -> Result<(Interval, Status)> {
    let all: Vec<usize> = (0..theta.len()).collect();
    let mut p = prm.precision.max(128);
    if let Some(q) = theta.all_rational(&all) {
        if eval_exact(f, &q).is_zero() {
            return Ok((Interval::neg_infinity(p), Status::Pass));
        }
    }
    loop {
        let th = theta.at_precision(p)?;
        let lv = log_abs(&eval_interval(f, th.entries(), p));
        let t = threshold(prm.big_c, prm.eta, prm.d, p);
        let st = if lv.is_neg_infinity() { Status::Pass } else { compare_le(&lv, &t) };
        if st != Status::Unknown || p >= MAX_PRECISION {
            return Ok((lv, st));
        }
        p = (p * 2).min(MAX_PRECISION);
    }
}

fn poly_check(f: &SparsePoly, theta: &RealTuple, prm: &PhilipponParams) -> Result<PolyCheck> {
    let p = prm.precision.max(128);
    let degree = f.degree();
    let bound = BigRational::from_float(prm.c1).ok_or_else(|| Error::invalid("c1 must be finite"))? * BigInt::from(prm.d);
    let degree_status = if BigRational::from_integer(degree.into()) <= bound { Status::Pass } else { Status::Fail };
    let log_norm = Interval::from_bigint(p, &f.norm()).ln();
    let norm_bound = Interval::from_f64(p, prm.c2).mul(&Interval::from_i64(p, prm.d as i64));
    let norm_status = compare_le(&log_norm, &norm_bound);
    let (log_value, value_status) = value_check(f, theta, prm)?;
    Ok(PolyCheck { degree, degree_status, log_norm, norm_status, log_value, value_status })
}

/// `exp(V·u)` for `u = (2πi c/s | a + ib)`, coordinates in f64.
struct Coset {
    /// Fixed imaginary part contributed by the torsion coordinates.
    y0: Vec<f64>,
    /// Columns of `V` for the free coordinates.
    free: Vec<Vec<f64>>,
}

impl Coset {
    fn point(&self, u: &[(f64, f64)]) -> Vec<(f64, f64)> {
        (0..self.y0.len())
            .map(|i| {
                let (x, y) = self.free.iter().zip(u).fold((0.0, self.y0[i]), |(x, y), (col, (a, b))| (x + col[i] * a, y + col[i] * b));
                (x.clamp(-60.0, 60.0), y)
            })
            .collect()
    }

    fn objective(&self, u: &[(f64, f64)], target: &[f64]) -> (f64, Vec<(f64, f64)>) {
        let w = self.point(u);
        let mut f = 0.0;
        let mut gx = vec![0.0; w.len()];
        let mut gy = vec![0.0; w.len()];
        for (i, &(x, y)) in w.iter().enumerate() {
            let (er, ei) = (x.exp() * y.cos(), x.exp() * y.sin());
            let (rr, ri) = (er - target[i], ei);
            f += rr * rr + ri * ri;
            // ∂/∂x e^{w} = e^{w}, ∂/∂y e^{w} = i e^{w}.
            gx[i] = 2.0 * (rr * er + ri * ei);
            gy[i] = 2.0 * (-rr * ei + ri * er);
        }
        let grad = self
            .free
            .iter()
            .map(|col| (col.iter().zip(&gx).map(|(c, g)| c * g).sum(), col.iter().zip(&gy).map(|(c, g)| c * g).sum()))
            .collect();
        (f, grad)
    }

    fn descend(&self, mut u: Vec<(f64, f64)>, target: &[f64]) -> Vec<(f64, f64)> {
        let (mut f, mut g) = self.objective(&u, target);
        let mut step = 1.0;
        for _ in 0..ITERATIONS {
            let gn: f64 = g.iter().map(|(a, b)| a * a + b * b).sum();
            if gn < 1e-30 {
                break;
            }
            loop {
                let cand: Vec<(f64, f64)> = u.iter().zip(&g).map(|((a, b), (ga, gb))| (a - step * ga, b - step * gb)).collect();
                let (fc, gc) = self.objective(&cand, target);
                if fc <= f - 1e-4 * step * gn {
                    u = cand;
                    f = fc;
                    g = gc;
                    step = (step * 2.0).min(1e3);
                    break;
                }
                step *= 0.5;
                if step < 1e-18 {
                    return u;
                }
            }
        }
        u
    }
}

/// Rigorous `log max_i |exp(w_i) − Θ_i|` at the point `w = V u`.
fn certified_log_distance(v: &IntMatrix, torsion: &[(BigInt, BigInt)], u: &[(f64, f64)], theta: &RealTuple, p: u32) -> Result<Interval> {
    let th = theta.at_precision(p)?;
    let two_pi = Interval::pi(p).mul_i64(2);
    let rank = torsion.len();
    let mut dist = Interval::zero(p);
    for i in 0..v.rows() {
        let mut re = Interval::zero(p);
        let mut im = Interval::zero(p);
        for (j, (c, s)) in torsion.iter().enumerate() {
            let q = Interval::from_rational(p, &BigRational::new(c.clone(), s.clone()));
            im = im.add(&two_pi.mul(&q).mul(&Interval::from_bigint(p, &v[(i, j)])));
        }
        for (jj, (a, b)) in u.iter().enumerate() {
            let vij = Interval::from_bigint(p, &v[(i, rank + jj)]);
            re = re.add(&vij.mul(&Interval::from_f64(p, *a)));
            im = im.add(&vij.mul(&Interval::from_f64(p, *b)));
        }
        let z = ComplexInterval::new(re, im).exp();
        let d = z.sub(&ComplexInterval::real(th.entry(i).clone())).abs();
        dist = dist.max(&d);
    }
    Ok(log_abs(&dist))
}

fn distance_check(family: &[SparsePoly], theta: &RealTuple, prm: &PhilipponParams) -> Result<DistanceCheck> {
    let p = prm.precision.max(128);
    let target = threshold(3.0 * prm.big_c, prm.eta, prm.d, p);
    let mut out = DistanceCheck {
        status: Status::Unknown,
        method: DistanceMethod::None,
        log_distance: None,
        target: target.clone(),
        certified: false,
        components: 0,
        free_dim: 0,
        descents: 0,
        note: String::new(),
    };
    if let Some(b) = prm.zero_distance_bound {
        out.method = DistanceMethod::UserBound;
        out.log_distance = Some(b);
        out.status = compare_le(&target, &Interval::from_f64(p, b));
        out.certified = true;
        return Ok(out);
    }
    let Some(chars) = family.iter().map(|f| f.as_binomial_character()).collect::<Option<Vec<_>>>() else {
        out.note = "distance hypothesis unknown: family is not binomial and no bound was supplied".into();
        return Ok(out);
    };
    let all: Vec<usize> = (0..theta.len()).collect();
    if let Some(q) = theta.all_rational(&all) {
        if family.iter().all(|f| eval_exact(f, &q).is_zero()) {
            out.method = DistanceMethod::ExactZero;
            out.log_distance = Some(f64::NEG_INFINITY);
            out.status = Status::Fail;
            out.certified = true;
            out.note = "Θ lies on the common zero set".into();
            return Ok(out);
        }
    }
    out.method = DistanceMethod::CosetSearch;
    let a = IntMatrix::from_i64_rows(&chars)?;
    let snf = smith_normal_form(&a);
    let diag = snf.diagonal();
    let rank = snf.rank;
    let l = theta.len();
    let torsion_orders: Vec<u64> = diag[..rank].iter().map(|d| d.magnitude().to_u64().unwrap_or(u64::MAX)).collect();
    let components = torsion_orders.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s)).unwrap_or(u64::MAX);
    out.components = components;
    out.free_dim = l - rank;
    if components > MAX_COMPONENTS {
        out.note = format!("{components} components exceed the cap of {MAX_COMPONENTS}");
        return Ok(out);
    }
    let v = &snf.v;
    let target_f: Vec<f64> = theta.mids_f64();
    let free: Vec<Vec<f64>> = (rank..l).map(|j| (0..l).map(|i| v[(i, j)].to_f64().unwrap_or(0.0)).collect()).collect();
    let starts = if free.is_empty() { 1 } else { prm.starts.max(1).min((MAX_DESCENTS as u64 / components).max(1) as usize) };
    let mut rng = ChaCha8Rng::seed_from_u64(prm.seed);
    let mut best: Option<Interval> = None;
    let mut cvec = vec![0u64; rank];
    loop {
        let torsion: Vec<(BigInt, BigInt)> = cvec.iter().zip(&torsion_orders).map(|(&c, &s)| (BigInt::from(c), BigInt::from(s))).collect();
        let y0: Vec<f64> = (0..l)
            .map(|i| {
                torsion.iter().enumerate().fold(0.0, |acc, (j, (c, s))| {
                    acc + std::f64::consts::TAU * c.to_f64().unwrap() / s.to_f64().unwrap() * v[(i, j)].to_f64().unwrap_or(0.0)
                })
            })
            .collect();
        let coset = Coset { y0, free: free.clone() };
        let mut local: Option<(f64, Vec<(f64, f64)>)> = None;
        for _ in 0..starts {
            let u0: Vec<(f64, f64)> = (0..free.len()).map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))).collect();
            let u = coset.descend(u0, &target_f);
            let (f, _) = coset.objective(&u, &target_f);
            out.descents += 1;
            if local.as_ref().map_or(true, |(bf, _)| f < *bf) {
                local = Some((f, u));
            }
        }
        if let Some((_, u)) = local {
            let d = certified_log_distance(v, &torsion, &u, theta, p)?;
            if best.as_ref().map_or(true, |b| d.hi() < b.hi()) {
                best = Some(d);
            }
        }
        // Next torsion component.
        let mut j = 0;
        while j < rank {
            cvec[j] += 1;
            if cvec[j] < torsion_orders[j] {
                break;
            }
            cvec[j] = 0;
            j += 1;
        }
        if j == rank {
            break;
        }
    }
    let best = best.expect("at least one component");
    out.log_distance = Some(best.hi_f64());
    if best.hi() < target.lo() {
        out.status = Status::Fail;
        out.certified = true;
    } else if best.lo() >= target.hi() {
        out.status = Status::Pass;
        out.note = "pass rests on local minimisation and is not certified".into();
    } else {
        out.note = "smallest distance found straddles the target".into();
    }
    Ok(out)
}

pub fn philippon_audit(family: &[SparsePoly], theta: &RealTuple, prm: &PhilipponParams) -> Result<PhilipponAudit> {
    if family.is_empty() {
        return Err(Error::invalid("polynomial family must be nonempty"));
    }
    if prm.d == 0 {
        return Err(Error::invalid("D must be positive"));
    }
    if let Some(f) = family.iter().find(|f| f.nvars != theta.len()) {
        return Err(Error::DimensionMismatch { expected: theta.len(), found: f.nvars });
    }
    if family.iter().any(|f| f.is_zero()) {
        return Err(Error::invalid("family contains the zero polynomial"));
    }
    let polys = family.iter().map(|f| poly_check(f, theta, prm)).collect::<Result<Vec<_>>>()?;
    let distance = distance_check(family, theta, prm)?;
    Ok(PhilipponAudit {
        case: prm.case,
        d: prm.d,
        eta: prm.eta,
        degree: combine(polys.iter().map(|c| c.degree_status)),
        norm: combine(polys.iter().map(|c| c.norm_status)),
        value: combine(polys.iter().map(|c| c.value_status)),
        polys,
        distance,
        conclusion_asserted: false,
    })
}

/// `x^a − x^b` from a character `χ = a − b`.
pub fn binomial_from_character(chi: &[i64]) -> SparsePoly {
    let a: Vec<u32> = chi.iter().map(|&x| x.max(0) as u32).collect();
    let b: Vec<u32> = chi.iter().map(|&x| (-x).max(0) as u32).collect();
    let mut f = SparsePoly::new(chi.len());
    f.add_term(a, BigInt::one());
    f.add_term(b, -BigInt::one());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_family_is_error() {
        let t = RealTuple::from_exprs("t", &["2"], 128).unwrap();
        assert!(philippon_audit(&[], &t, &PhilipponParams::new(1.0, 1.0, 1.0, 1.0, 10)).is_err());
    }

    #[test]
    fn near_one() {
        let t = RealTuple::from_exprs("t", &["exp(1/1000000000)"], 128).unwrap();
        let f = binomial_from_character(&[1]);
        let mut prm = PhilipponParams::new(1.0, 1.0, 1.0, 1.0, 10);
        let a = philippon_audit(&[f], &t, &prm).unwrap();
        let lv = a.polys[0].log_value.mid_f64();
        assert!((lv - (1e-9f64).ln()).abs() < 1e-6, "{lv}");
        assert_eq!((a.degree, a.norm, a.value), (Status::Pass, Status::Pass, Status::Pass));
        // The zero set is the single point 1; distance ≈ 1e-9 against −30.
        let ld = a.distance.log_distance.unwrap();
        assert!((ld + 20.723).abs() < 1e-3, "{ld}");
        assert_eq!(a.distance.status, Status::Pass);
        prm.big_c = 3.0;
        let a = philippon_audit(&[binomial_from_character(&[1])], &t, &prm).unwrap();
        assert_eq!((a.value, a.distance.status), (Status::Fail, Status::Pass));
        prm.big_c = 0.5;
        let a = philippon_audit(&[binomial_from_character(&[1])], &t, &prm).unwrap();
        assert_eq!((a.value, a.distance.status), (Status::Pass, Status::Fail));
        assert!(a.distance.certified && !a.conclusion_asserted);
    }

    #[test]
    fn point_on_subgroup() {
        let t = RealTuple::from_exprs("t", &["2", "1/2"], 128).unwrap();
        let f = binomial_from_character(&[1, 1]);
        let a = philippon_audit(&[f], &t, &PhilipponParams::new(1.0, 1.0, 1.0, 1.0, 5)).unwrap();
        assert!(a.polys[0].log_value.is_neg_infinity());
        assert_eq!(a.value, Status::Pass);
        assert_eq!(a.distance.status, Status::Fail);
        assert!(matches!(a.distance.method, DistanceMethod::ExactZero));
    }

    #[test]
    fn coset_search_finds_nearby_zero() {
        // x1² x2 = 1 has a one-dimensional zero set; Θ = (2, 0.26) is at
        // distance ≈ 0.01 from (2, 1/4)-ish points.
        let t = RealTuple::from_exprs("t", &["2", "13/50"], 128).unwrap();
        let f = binomial_from_character(&[2, 1]);
        let mut prm = PhilipponParams::new(1.0, 1.0, 0.01, 1.0, 10);
        prm.starts = 20;
        let a = philippon_audit(&[f], &t, &prm).unwrap();
        let ld = a.distance.log_distance.unwrap();
        assert!(ld < (0.01f64).ln() && ld > -8.0, "{ld}");
        assert_eq!(a.distance.free_dim, 1);
    }

    #[test]
    fn torsion_components() {
        // x1² = 1: components ±1.
        let t = RealTuple::from_exprs("t", &["-1"], 128).unwrap();
        let a = philippon_audit(&[binomial_from_character(&[2])], &t, &PhilipponParams::new(1.0, 1.0, 1.0, 1.0, 3)).unwrap();
        assert!(matches!(a.distance.method, DistanceMethod::ExactZero));
        let t = RealTuple::from_exprs("t", &["-11/10"], 128).unwrap();
        let a = philippon_audit(&[binomial_from_character(&[2])], &t, &PhilipponParams::new(1.0, 1.0, 1.0, 1.0, 3)).unwrap();
        assert_eq!(a.distance.components, 2);
        assert!((a.distance.log_distance.unwrap() - (0.1f64).ln()).abs() < 1e-6);
    }

    #[test]
    fn non_binomial_needs_bound() {
        let t = RealTuple::from_exprs("t", &["2"], 128).unwrap();
        let f = SparsePoly::from_terms(1, [(vec![2], BigInt::from(1)), (vec![0], BigInt::from(-3))]).unwrap();
        let mut prm = PhilipponParams::new(1.0, 1.0, 1.0, 1.0, 3);
        let a = philippon_audit(&[f.clone()], &t, &prm).unwrap();
        assert_eq!(a.distance.status, Status::Unknown);
        prm.zero_distance_bound = Some(-1.0);
        let a = philippon_audit(&[f], &t, &prm).unwrap();
        assert_eq!(a.distance.status, Status::Pass);
    }
}
