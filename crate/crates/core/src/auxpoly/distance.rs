//! Distance audit: how far a point `z` of the big torus must stay from
//! `Θ̄_k = (exp(θ_i κ_j))_{i,a,j}` once a low-degree polynomial vanishes on
//! the recipe products of `z`.
//!
//! The chain executed here: pigeonhole count on the recipe box, obstruction
//! subgroup from the zero estimate (torsion points only), the induced
//! character relation `Π z^{l(r−r̄)} = 1`, and the comparison of
//! `log|Π Θ̄^{l(r−r̄)} − 1|` against what the distance allows.

use num_bigint::BigUint;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::schedule::{make_schedule, ser_biguint, AuxSchedule};
use crate::arith::{ComplexInterval, Interval};
use crate::dioph::expm1::log_expm1_sym;
use crate::dioph::genericity::threshold;
use crate::dioph::{linear_form_min, LinearFormRecord, RealTuple, SearchOptions};
use crate::error::{Error, Result};
use crate::lattice::{zero_estimate_search, ZeroEstimateReport};

/// Recipe pairs inspected when hunting for a character collision.
const MAX_RECIPES: u128 = 1 << 20;

/// A point of `G_m^{m·k·n}`, coordinates ordered `(i, a, j)`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorusPoint {
    Values { coords: Vec<(f64, f64)> },
    /// `z = ζ_N^{e}` coordinatewise.
    RootsOfUnity { order: u64, exps: Vec<i64> },
    /// `Θ̄_k` itself, exactly.
    ThetaBar,
}

impl TorusPoint {
    /// Number of coordinates; `None` for the symbolic `Θ̄_k`.
    pub fn len(&self) -> Option<usize> {
        match self {
            TorusPoint::Values { coords } => Some(coords.len()),
            TorusPoint::RootsOfUnity { exps, .. } => Some(exps.len()),
            TorusPoint::ThetaBar => None,
        }
    }

    fn coord(&self, idx: usize, p: u32) -> ComplexInterval {
        match self {
            TorusPoint::Values { coords } => {
                let (re, im) = coords[idx];
                ComplexInterval::new(Interval::from_f64(p, re), Interval::from_f64(p, im))
            }
            TorusPoint::RootsOfUnity { order, exps } => {
                let t = Interval::pi(p).mul_i64(2 * exps[idx].rem_euclid(*order as i64)).div(&Interval::from_i64(p, *order as i64));
                ComplexInterval::new(t.cos(), t.sin())
            }
            TorusPoint::ThetaBar => unreachable!("symbolic point has no stored coordinates"),
        }
    }

    /// `Θ̄_k` rounded to doubles.
    pub fn theta_bar(theta: &RealTuple, kappa: &RealTuple, k: usize) -> TorusPoint {
        let (t, c) = (theta.mids_f64(), kappa.mids_f64());
        let mut coords = Vec::with_capacity(t.len() * k * c.len());
        for ti in &t {
            for _ in 0..k {
                coords.extend(c.iter().map(|cj| ((ti * cj).exp(), 0.0)));
            }
        }
        TorusPoint::Values { coords }
    }

    /// Every coordinate of `Θ̄_k` moved by `e^{log_dist}` in a seeded direction.
    pub fn perturbation(theta: &RealTuple, kappa: &RealTuple, k: usize, log_dist: f64, seed: u64) -> TorusPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = log_dist.exp();
        let TorusPoint::Values { mut coords } = Self::theta_bar(theta, kappa, k) else { unreachable!() };
        for c in &mut coords {
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            c.0 += eps * phi.cos();
            c.1 += eps * phi.sin();
        }
        TorusPoint::Values { coords }
    }
}

#[derive(Clone, Debug)]
pub struct DistanceInput<'a> {
    pub theta: &'a RealTuple,
    pub kappa: &'a RealTuple,
    pub i: &'a [usize],
    pub j: &'a [usize],
    pub k: usize,
    pub d: u64,
    pub eta: f64,
    /// Constant in the target `log|Θ̄_k, z| ≥ −c·D^η`.
    pub c: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRelation {
    pub a: usize,
    pub l: Vec<i64>,
    pub r: Vec<u32>,
    pub r_bar: Vec<u32>,
    /// `log|exp((l·θ_I)((r−r̄)·κ_J)) − 1|`.
    pub log_theta_side: Interval,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// The recipe box is too small for the pigeonhole step.
    PigeonholeFails,
    /// The distance is too small for any vanishing polynomial to exist: the
    /// relation lower bound exceeds what the distance permits.
    Contradiction,
    /// `log|Θ̄_k, z| ≥ −c·D^η` holds outright.
    DistanceOk,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub schedule: AuxSchedule,
    /// `⌊R/(2μ)⌋`, the side of the recipe box.
    pub s: u64,
    /// `⌊R/2⌋`, the depth stated for the vanishing hypothesis.
    pub s_stated: u64,
    #[serde(serialize_with = "ser_biguint")]
    pub card_sigma: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub card_recipes: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub hilbert_bound: BigUint,
    pub pigeonhole_applies: bool,
    pub log_distance: Interval,
    pub target: Interval,
    pub distance_ok: bool,
    pub theta_form: LinearFormRecord,
    pub kappa_form: LinearFormRecord,
    /// Lower bound for `log|exp((l·θ_I)(v·κ_J)) − 1|`, `|l| ≤ L`, `|v| ≤ s`.
    pub regf1_lower: Interval,
    /// First-order upper bound `log(2μνLR) + log|Θ̄_k, z| + log 2` on the same
    /// quantity, valid whenever `Π z^{l v} = 1`.
    pub chain_upper: Interval,
    pub approximate: bool,
    pub zero_estimate: Option<ZeroEstimateReport>,
    pub zero_estimate_status: String,
    pub relation: Option<CharacterRelation>,
    pub binding: Binding,
}

fn check(input: &DistanceInput, z: &TorusPoint) -> Result<()> {
    let (m, n) = (input.theta.len(), input.kappa.len());
    if input.k == 0 || input.d == 0 {
        return Err(Error::invalid("k and D must be positive"));
    }
    if input.i.is_empty() || input.j.is_empty() {
        return Err(Error::invalid("index subsets must be nonempty"));
    }
    if input.i.iter().any(|&x| x >= m) || input.j.iter().any(|&x| x >= n) {
        return Err(Error::invalid("index subset out of range"));
    }
    if let Some(len) = z.len() {
        if len != m * input.k * n {
            return Err(Error::DimensionMismatch { expected: m * input.k * n, found: len });
        }
    }
    if let TorusPoint::RootsOfUnity { order: 0, .. } = z {
        return Err(Error::invalid("order must be positive"));
    }
    if let TorusPoint::Values { coords } = z {
        if coords.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::invalid("non-finite coordinate"));
        }
    }
    Ok(())
}

/// `log max_{i,a,j} |exp(θ_i κ_j) − z_{iaj}|`.
fn log_distance(input: &DistanceInput, z: &TorusPoint, p: u32) -> Result<Interval> {
    if let TorusPoint::ThetaBar = z {
        return Ok(Interval::neg_infinity(p));
    }
    let th = input.theta.at_precision(p)?;
    let ka = input.kappa.at_precision(p)?;
    let (m, n, k) = (th.len(), ka.len(), input.k);
    let mut dist = Interval::zero(p);
    for i in 0..m {
        for j in 0..n {
            let e = th.entry(i).mul(ka.entry(j)).exp();
            for a in 0..k {
                let zc = z.coord((i * k + a) * n + j, p);
                let diff = ComplexInterval::real(e.clone()).sub(&zc).abs();
                dist = dist.max(&diff);
            }
        }
    }
    Ok(super::evaluate::log_abs(&dist))
}

/// Exponent vectors of `P_ρ = (z_{i_λ a j_ρ})_λ` for a torsion point.
fn base_points(input: &DistanceInput, exps: &[i64], a: usize, n: usize) -> Vec<Vec<i64>> {
    input
        .j
        .iter()
        .map(|&jj| input.i.iter().map(|&ii| exps[(ii * input.k + a) * n + jj]).collect())
        .collect()
}

fn next_recipe(r: &mut [u32], s: u32) -> bool {
    for x in r.iter_mut().rev() {
        if *x < s {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

/// First pair `r ≠ r̄` in `[0,s]^ν` with `χ_l(Π P_ρ^{r_ρ})` equal.
fn collision(order: u64, base: &[Vec<i64>], l: &[i64], s: u32) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = order as i64;
    let g: Vec<i64> = base.iter().map(|p| p.iter().zip(l).map(|(x, y)| x * y).sum::<i64>().rem_euclid(n)).collect();
    let mut seen = std::collections::HashMap::new();
    let mut r = vec![0u32; base.len()];
    loop {
        let v = r.iter().zip(&g).map(|(&x, y)| x as i64 * y).sum::<i64>().rem_euclid(n);
        if let Some(prev) = seen.insert(v, r.clone()) {
            return Some((prev, r));
        }
        if !next_recipe(&mut r, s) {
            return None;
        }
    }
}

fn relation_value(input: &DistanceInput, l: &[i64], v: &[i64], p: u32) -> Result<Interval> {
    let th = input.theta.at_precision(p)?;
    let ka = input.kappa.at_precision(p)?;
    let x = input.i.iter().zip(l).fold(Interval::zero(p), |acc, (&ii, &c)| acc.add(&th.entry(ii).mul_i64(c)));
    let y = input.j.iter().zip(v).fold(Interval::zero(p), |acc, (&jj, &c)| acc.add(&ka.entry(jj).mul_i64(c)));
    let prod = x.mul(&y);
    Ok(if prod.is_exact_zero() { Interval::neg_infinity(p) } else { log_expm1_sym(&prod) })
}

/// Zero estimate and relation extraction for torsion points.
fn torsion_pipeline(
    input: &DistanceInput,
    order: u64,
    exps: &[i64],
    sch: &AuxSchedule,
    s: u64,
    p: u32,
) -> (Option<ZeroEstimateReport>, String, Option<CharacterRelation>) {
    let n = input.kappa.len();
    if s == 0 {
        return (None, "recipe box is trivial (s = 0)".into(), None);
    }
    let recipes = (s as u128 + 1).checked_pow(input.j.len() as u32).unwrap_or(u128::MAX);
    if recipes > MAX_RECIPES {
        return (None, format!("recipe box of {recipes} points exceeds {MAX_RECIPES}"), None);
    }
    let mut last = None;
    let mut status = String::new();
    for a in 0..input.k {
        let mut base = vec![vec![0i64; input.i.len()]];
        base.extend(base_points(input, exps, a, n));
        match zero_estimate_search(order, &base, s as usize, sch.l as u32) {
            Ok(rep) => {
                let Some(w) = rep.found.clone() else {
                    status = format!("no obstruction character at a = {a}");
                    last = Some(rep);
                    continue;
                };
                let l = w.character.0.clone();
                let Some((r, r_bar)) = collision(order, &base[1..], &l, s as u32) else {
                    status = format!("obstruction found at a = {a} but no recipe collision");
                    last = Some(rep);
                    continue;
                };
                let v: Vec<i64> = r.iter().zip(&r_bar).map(|(&x, &y)| x as i64 - y as i64).collect();
                let log_theta_side = match relation_value(input, &l, &v, p) {
                    Ok(x) => x,
                    Err(e) => return (Some(rep), format!("relation evaluation failed: {e}"), None),
                };
                let rel = CharacterRelation { a, l, r, r_bar, log_theta_side };
                return (Some(rep), format!("relation extracted at a = {a}"), Some(rel));
            }
            Err(e) => {
                status = format!("zero estimate unavailable: {e}");
            }
        }
    }
    (last, status, None)
}

pub fn distance_audit(input: &DistanceInput, z: &TorusPoint, opts: &SearchOptions) -> Result<DistanceReport> {
    check(input, z)?;
    let (mu, nu) = (input.i.len() as u32, input.j.len() as u32);
    let sch = make_schedule(input.d, input.k as u32, mu, nu)?;
    let s = sch.r / (2 * mu as u64);
    let card_sigma: BigUint = Pow::pow(BigUint::from(s), nu);
    let card_recipes: BigUint = Pow::pow(BigUint::from(s + 1), nu);
    let hilbert_bound: BigUint = Pow::pow(BigUint::from(sch.l), mu);
    let pigeonhole_applies = card_sigma > hilbert_bound;
    let p = opts.start_precision();

    let log_distance = log_distance(input, z, p)?;
    let target = threshold(input.c, input.eta, input.d, p);
    let distance_ok = log_distance.lo() >= target.hi();

    let theta_form = linear_form_min(input.theta, input.i, sch.l.max(1), opts)?;
    let kappa_form = linear_form_min(input.kappa, input.j, s.max(1), opts)?;
    let prod = theta_form.value.with_prec(p).mul(&kappa_form.value.with_prec(p));
    let regf1_lower = if prod.is_exact_zero() { Interval::neg_infinity(p) } else { log_expm1_sym(&prod) };
    let factor = Interval::from_i64(p, 2 * (mu * nu) as i64).mul(&Interval::from_i64(p, sch.l.max(1) as i64)).mul(&Interval::from_i64(p, sch.r.max(1) as i64));
    let log2 = Interval::from_i64(p, 2).ln();
    let chain_upper = if log_distance.is_neg_infinity() {
        Interval::neg_infinity(p)
    } else {
        factor.ln().add(&log_distance).add(&log2)
    };
    let approximate = theta_form.approximate || kappa_form.approximate;

    let (zero_estimate, zero_estimate_status, relation) = match z {
        TorusPoint::RootsOfUnity { order, exps } => torsion_pipeline(input, *order, exps, &sch, s, p),
        _ => (None, "zero estimate needs a torsion point".into(), None),
    };

    let lower = relation.as_ref().map_or(&regf1_lower, |r| &r.log_theta_side);
    let contradiction = lower.is_finite() && (chain_upper.is_neg_infinity() || chain_upper.hi_f64() < lower.lo_f64());
    let binding = if !pigeonhole_applies {
        Binding::PigeonholeFails
    } else if contradiction {
        Binding::Contradiction
    } else if distance_ok {
        Binding::DistanceOk
    } else {
        Binding::Inconclusive
    };
    Ok(DistanceReport {
        schedule: sch.clone(),
        s,
        s_stated: sch.r / 2,
        card_sigma,
        card_recipes,
        hilbert_bound,
        pigeonhole_applies,
        log_distance,
        target,
        distance_ok,
        theta_form,
        kappa_form,
        regf1_lower,
        chain_upper,
        approximate,
        zero_estimate,
        zero_estimate_status,
        relation,
        binding,
    })
}
