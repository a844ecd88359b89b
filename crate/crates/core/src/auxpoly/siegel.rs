//! Constructive small-coefficient search for `φ = Σ h_l φ_l`, where each
//! `φ_l(z) = exp(Σ_a w_{la} z_a)` on the polydisc `|z_a| ≤ r`.
//!
//! Coefficients come from lattice reduction on `[I | S·Re φ_l(s), S·Im φ_l(s)]`
//! over boundary samples `s`; the sup bound is verified afterwards on a grid of
//! the distinguished boundary with a Taylor remainder slack.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::monomial::{monomial_set, MonomialSet};
use super::poly::{log_abs_max, AuxPolynomial};
use crate::arith::interval::{float_to_rational, rug_to_bigint};
use crate::arith::{lll_reduce, ComplexInterval, Interval};
use crate::dioph::RealTuple;
use crate::error::{Error, Result};

const PREC: u32 = 128;

/// `M` exponential monomials in `k` complex variables.
#[derive(Clone, Debug)]
pub struct ExpFamily {
    pub k: usize,
    pub weights: Vec<Vec<Interval>>,
}

impl ExpFamily {
    pub fn new(k: usize, weights: Vec<Vec<Interval>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("empty function family"));
        }
        if let Some(w) = weights.iter().find(|w| w.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: w.len() });
        }
        Ok(ExpFamily { k, weights })
    }

    pub fn from_f64(k: usize, weights: &[Vec<f64>]) -> Result<Self> {
        Self::new(k, weights.iter().map(|w| w.iter().map(|&x| Interval::from_f64(PREC, x)).collect()).collect())
    }

    /// `φ_d(z) = exp(Σ_{λ,a} d_{λa} θ_{i_λ} z_a)` for `d ∈ A_L`.
    pub fn from_theta(theta: &RealTuple, subset: &[usize], k: usize, l: u32) -> Result<(Self, MonomialSet)> {
        if subset.iter().any(|&i| i >= theta.len()) {
            return Err(Error::invalid("index subset out of range"));
        }
        let t = theta.at_precision(PREC)?;
        let mu = subset.len();
        let ms = monomial_set(mu, k, l);
        let weights = ms
            .multidegrees
            .iter()
            .map(|d| {
                (0..k)
                    .map(|a| {
                        (0..mu).fold(Interval::zero(PREC), |acc, lam| {
                            let e = d[lam * k + a];
                            if e == 0 {
                                acc
                            } else {
                                acc.add(&t.entry(subset[lam]).mul_i64(e as i64))
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok((ExpFamily { k, weights }, ms))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn l1(&self, l: usize) -> Interval {
        self.weights[l].iter().fold(Interval::zero(PREC), |acc, w| acc.add(&w.abs()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    pub points: usize,
    /// Share of the points on the distinguished boundary `|z_a| = r`.
    pub boundary_share: f64,
    pub taylor_order: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { points: 1000, boundary_share: 0.6, taylor_order: 8, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SiegelParams {
    pub u: f64,
    pub delta: f64,
    pub radius: f64,
    /// Refuse to run when the lemma's hypotheses fail.
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    /// `(8U)^{k+1} ≤ MΔ`.
    pub siegel_ok: bool,
    /// `Δ ≤ U`.
    pub delta_le_u: bool,
    /// `Σ_l |φ_l|_{er} ≤ e^U`.
    pub norm_ok: bool,
    pub log_norm_sum: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SiegelResult {
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint_vec")]
    pub coefficients: Vec<BigInt>,
    pub log_height: f64,
    pub delta: f64,
    pub u_target: f64,
    pub radius: f64,
    /// `log` of the largest `|φ|` seen on the grid; `None` is `−∞`.
    pub grid_log_sup: Option<f64>,
    /// Added to the grid maximum to bound the sup over the polydisc.
    pub slack: f64,
    /// Upper bound on `log|φ|_r`; `None` when `φ ≡ 0`.
    pub achieved_log_sup: Option<f64>,
    /// `U' = −achieved_log_sup`.
    pub achieved_u: f64,
    pub grid_points: usize,
    pub scale_bits: u32,
    pub hypotheses: Hypotheses,
    pub best_effort: bool,
}

struct Grid {
    boundary: Vec<Vec<ComplexInterval>>,
    interior: Vec<Vec<ComplexInterval>>,
    /// Chord half-spacing per coordinate on the boundary torus.
    delta: Vec<f64>,
}

fn polar(radius: &Interval, tau: &Interval) -> ComplexInterval {
    ComplexInterval::new(radius.mul(&tau.cos()), radius.mul(&tau.sin()))
}

fn build_grid(k: usize, r: f64, spec: &GridSpec) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nb = ((spec.points as f64 * spec.boundary_share).round() as usize).max(1);
    let per = ((nb as f64).powf(1.0 / k as f64).floor() as usize).max(1);
    let two_pi = Interval::pi(PREC).mul_i64(2);
    let rad = Interval::from_f64(PREC, r);
    // Each coordinate ring is rotated by a seeded offset.
    let rings: Vec<Vec<ComplexInterval>> = (0..k)
        .map(|_| {
            let off: f64 = rng.gen::<f64>() / per as f64;
            (0..per)
                .map(|j| {
                    let t = Interval::from_f64(PREC, j as f64 + off).mul(&two_pi).div(&Interval::from_i64(PREC, per as i64));
                    polar(&rad, &t)
                })
                .collect()
        })
        .collect();
    let mut boundary: Vec<Vec<ComplexInterval>> = vec![vec![]];
    for ring in &rings {
        boundary = boundary
            .into_iter()
            .flat_map(|p| ring.iter().map(move |z| {
                let mut q = p.clone();
                q.push(z.clone());
                q
            }))
            .collect();
    }
    let n_int = spec.points.saturating_sub(boundary.len());
    let rays = 20usize.min(n_int.max(1));
    let radii = n_int.div_ceil(rays).max(1);
    let mut interior = Vec::with_capacity(n_int);
    'outer: for q in 0..rays {
        let t = Interval::from_i64(PREC, q as i64).mul(&two_pi).div(&Interval::from_i64(PREC, rays as i64));
        for s in 0..radii {
            if interior.len() == n_int {
                break 'outer;
            }
            let rho = rad.mul(&Interval::from_i64(PREC, s as i64)).div(&Interval::from_i64(PREC, radii as i64));
            interior.push(vec![polar(&rho, &t); k]);
        }
    }
    let d = r * std::f64::consts::PI / per as f64 * (1.0 + 1e-12) + 1e-30;
    Grid { boundary, interior, delta: vec![d; k] }
}

/// Multi-indices `α ∈ ℕ^k` with `|α| < order`.
fn multi_indices(k: usize, order: usize) -> Vec<Vec<u32>> {
    (0..order as u32)
        .flat_map(|t| super::monomial::exponents_up_to(k, t).into_iter().filter(move |a| a.iter().sum::<u32>() == t))
        .collect()
}

fn arg(w: &[Interval], z: &[ComplexInterval]) -> ComplexInterval {
    w.iter().zip(z).fold(ComplexInterval::zero(PREC), |acc, (wa, za)| acc.add(&za.scale(wa)))
}

struct Verified {
    grid_max: Interval,
    bound: Interval,
}

/// Rigorous upper bound on `sup_{|z_a| ≤ r} |Σ h_l φ_l|`.
fn verify(fam: &ExpFamily, h: &[BigInt], grid: &Grid, r: f64, order: usize) -> Verified {
    // Merge identical functions so exact cancellation is seen.
    let mut groups: Vec<(Vec<Interval>, BigInt)> = Vec::new();
    for (w, c) in fam.weights.iter().zip(h) {
        if c.is_zero() {
            continue;
        }
        match groups.iter_mut().find(|(g, _)| g == w) {
            Some((_, acc)) => *acc += c,
            None => groups.push((w.clone(), c.clone())),
        }
    }
    groups.retain(|(_, c)| !c.is_zero());
    if groups.is_empty() {
        return Verified { grid_max: Interval::zero(PREC), bound: Interval::zero(PREC) };
    }
    let alphas = multi_indices(fam.k, order);
    let fact = |a: &[u32]| a.iter().fold(1f64, |acc, &x| acc * (1..=x).map(|i| i as f64).product::<f64>());
    // c_{l,α} = h_l w_l^α and δ^α/α!.
    let coef: Vec<Vec<Interval>> = groups
        .iter()
        .map(|(w, c)| {
            let hc = Interval::from_bigint(PREC, c);
            alphas
                .iter()
                .map(|a| a.iter().zip(w).fold(hc.clone(), |acc, (&e, wa)| if e == 0 { acc } else { acc.mul(&wa.powi(e as i64)) }))
                .collect()
        })
        .collect();
    let weights: Vec<Interval> = alphas
        .iter()
        .map(|a| {
            let num = a.iter().zip(&grid.delta).fold(1f64, |acc, (&e, d)| acc * d.powi(e as i32));
            Interval::from_f64(PREC, num).div(&Interval::from_f64(PREC, fact(a)))
        })
        .collect();
    let eval = |z: &Vec<ComplexInterval>, taylor: bool| -> (Interval, Interval) {
        let es: Vec<ComplexInterval> = groups.iter().map(|(w, _)| arg(w, z).exp()).collect();
        let mut value = Interval::zero(PREC);
        let mut bound = Interval::zero(PREC);
        for (ai, wgt) in weights.iter().enumerate() {
            if ai > 0 && !taylor {
                break;
            }
            let mut s = ComplexInterval::zero(PREC);
            for (l, e) in es.iter().enumerate() {
                s = s.add(&e.scale(&coef[l][ai]));
            }
            let m = s.abs();
            if ai == 0 {
                value = m.clone();
            }
            bound = bound.add(&m.mul(wgt));
        }
        (value, bound)
    };
    let b: Vec<(Interval, Interval)> = grid.boundary.par_iter().map(|z| eval(z, true)).collect();
    let inner: Vec<Interval> = grid.interior.par_iter().map(|z| eval(z, false).0).collect();
    let mut grid_max = Interval::zero(PREC);
    let mut bound = Interval::zero(PREC);
    for (v, bb) in &b {
        grid_max = grid_max.max(v);
        bound = bound.max(bb);
    }
    for v in &inner {
        grid_max = grid_max.max(v);
    }
    // Order-`J` remainder: Σ_l |h_l| (Σ_a |w_la| δ_a)^J / J! · e^{(r+δ)|w_l|_1}.
    let j = order as i64;
    let dmax = grid.delta.iter().cloned().fold(0.0, f64::max);
    let jf: f64 = (1..=order).map(|i| i as f64).product();
    let mut rem = Interval::zero(PREC);
    for (w, c) in &groups {
        let step = w.iter().zip(&grid.delta).fold(Interval::zero(PREC), |acc, (wa, d)| acc.add(&wa.abs().mul(&Interval::from_f64(PREC, *d))));
        let l1 = w.iter().fold(Interval::zero(PREC), |acc, wa| acc.add(&wa.abs()));
        let grow = l1.mul(&Interval::from_f64(PREC, r + dmax)).exp();
        rem = rem.add(&Interval::from_bigint(PREC, &c.abs()).mul(&step.powi(j)).div(&Interval::from_f64(PREC, jf)).mul(&grow));
    }
    let bound = bound.add(&rem).max(&grid_max);
    Verified { grid_max, bound }
}

/// Cheap midpoint score used to rank lattice candidates before verification.
fn score(h: &[BigInt], samples: &[Vec<(f64, f64)>]) -> f64 {
    let hf: Vec<f64> = h.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
    samples
        .iter()
        .map(|vals| {
            let (re, im) = vals.iter().zip(&hf).fold((0.0, 0.0), |(a, b), ((x, y), c)| (a + c * x, b + c * y));
            re.hypot(im)
        })
        .fold(0.0, f64::max)
}

fn check_hypotheses(fam: &ExpFamily, p: &SiegelParams) -> Hypotheses {
    let m = fam.len() as u64;
    let k = fam.k as u32;
    let siegel_ok = match (float_to_rational(&Float::with_val(64, p.u)), float_to_rational(&Float::with_val(64, p.delta))) {
        (Some(u), Some(d)) => {
            let lhs: BigRational = Pow::pow(u * BigRational::from_integer(8.into()), k + 1);
            lhs <= d * BigRational::from_integer(m.into())
        }
        _ => false,
    };
    let er = Interval::e(PREC).mul(&Interval::from_f64(PREC, p.radius));
    let sum = (0..fam.len()).fold(Interval::zero(PREC), |acc, l| acc.add(&fam.l1(l).mul(&er).exp()));
    let log_sum = sum.ln();
    Hypotheses {
        siegel_ok,
        delta_le_u: p.delta <= p.u,
        norm_ok: log_sum.hi_f64() <= p.u,
        log_norm_sum: log_sum.hi_f64(),
    }
}

pub fn siegel_construct(fam: &ExpFamily, p: &SiegelParams, grid_spec: &GridSpec) -> Result<SiegelResult> {
    if !(p.radius > 0.0) || !(p.delta >= 0.0) || !p.u.is_finite() {
        return Err(Error::invalid("need r > 0, Δ ≥ 0 and finite U"));
    }
    if fam.k == 0 || grid_spec.points == 0 || grid_spec.taylor_order == 0 {
        return Err(Error::invalid("k, grid size and Taylor order must be positive"));
    }
    let hyp = check_hypotheses(fam, p);
    if p.strict && !(hyp.siegel_ok && hyp.delta_le_u && hyp.norm_ok) {
        return Err(Error::HypothesisNotMet(format!(
            "Siegel lemma hypotheses: (8U)^(k+1) ≤ MΔ {}, Δ ≤ U {}, norm sum {}",
            hyp.siegel_ok, hyp.delta_le_u, hyp.norm_ok
        )));
    }
    let m = fam.len();
    let grid = build_grid(fam.k, p.radius, grid_spec);

    // Lattice samples on the boundary torus, distinct from the grid.
    let n_s = (2 * m).max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(grid_spec.seed ^ 0x5eed);
    let rad = Interval::from_f64(PREC, p.radius);
    let sample_pts: Vec<Vec<ComplexInterval>> = (0..n_s)
        .map(|s| {
            (0..fam.k)
                .map(|_| {
                    let frac = if fam.k == 1 { (s as f64 + 0.5) / n_s as f64 } else { rng.gen::<f64>() };
                    polar(&rad, &Interval::pi(PREC).mul_i64(2).mul(&Interval::from_f64(PREC, frac)))
                })
                .collect()
        })
        .collect();
    let vals: Vec<Vec<ComplexInterval>> =
        sample_pts.iter().map(|z| fam.weights.iter().map(|w| arg(w, z).exp()).collect()).collect();
    let samples_f64: Vec<Vec<(f64, f64)>> =
        vals.iter().map(|row| row.iter().map(|c| (c.re.mid_f64(), c.im.mid_f64())).collect()).collect();

    let base_bits = (p.u.max(0.0) / std::f64::consts::LN_2).ceil() as u32 + 16;
    let max_log_h = p.delta;
    let mut best: Option<(f64, Vec<BigInt>, Verified, u32)> = None;
    for extra in [0u32, 8, 16, 24, 32, 48, 64] {
        let bits = base_bits + extra;
        let prec = (bits + 64).max(PREC);
        let scale = Float::with_val(prec, 1) << bits;
        let rows: Vec<Vec<BigInt>> = (0..m)
            .map(|l| {
                let mut v = vec![BigInt::zero(); m];
                v[l] = BigInt::from(1);
                for row in &vals {
                    for part in [&row[l].re, &row[l].im] {
                        let x = Float::with_val(prec, part.mid() * &scale);
                        v.push(rug_to_bigint(&x.to_integer().unwrap_or_default()));
                    }
                }
                v
            })
            .collect();
        let reduced = lll_reduce(&rows)?;
        let mut cands: Vec<(f64, Vec<BigInt>)> = reduced
            .into_iter()
            .map(|r| r[..m].to_vec())
            .filter(|h| h.iter().any(|x| !x.is_zero()) && log_abs_max(h) <= max_log_h + 1e-12)
            .map(|h| (score(&h, &samples_f64), h))
            .collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, h) in cands.into_iter().take(3) {
            let v = verify(fam, &h, &grid, p.radius, grid_spec.taylor_order);
            let ub = v.bound.hi_f64();
            if best.as_ref().map_or(true, |(b, ..)| ub < *b) {
                best = Some((ub, h, v, bits));
            }
        }
        if best.as_ref().is_some_and(|(b, ..)| *b == 0.0 || -b.ln() >= p.u) {
            break;
        }
    }
    let (ub, h, v, scale_bits) = match best {
        Some(b) => b,
        None => {
            let mut h = vec![BigInt::zero(); m];
            h[0] = BigInt::from(1);
            let v = verify(fam, &h, &grid, p.radius, grid_spec.taylor_order);
            (v.bound.hi_f64(), h, v, base_bits)
        }
    };
    let achieved_log_sup = (ub > 0.0).then(|| ub.ln());
    let grid_hi = v.grid_max.hi_f64();
    let achieved_u = achieved_log_sup.map_or(f64::INFINITY, |x| -x);
    Ok(SiegelResult {
        log_height: log_abs_max(&h),
        coefficients: h,
        delta: p.delta,
        u_target: p.u,
        radius: p.radius,
        grid_log_sup: (grid_hi > 0.0).then(|| grid_hi.ln()),
        slack: (ub - grid_hi).max(0.0),
        achieved_log_sup,
        achieved_u,
        grid_points: grid.boundary.len() + grid.interior.len(),
        scale_bits,
        best_effort: achieved_u < p.u,
        hypotheses: hyp,
    })
}

/// Run the search on `φ_d = X^d ∘ i_θ` and package the result as `f`.
pub fn siegel_for_theta(
    theta: &RealTuple,
    subset: &[usize],
    k: usize,
    l: u32,
    p: &SiegelParams,
    grid: &GridSpec,
) -> Result<(AuxPolynomial, SiegelResult)> {
    let (fam, ms) = ExpFamily::from_theta(theta, subset, k, l)?;
    let res = siegel_construct(&fam, p, grid)?;
    let mut f = AuxPolynomial::new(ms, res.coefficients.clone(), p.delta)?;
    f.achieved_log_sup = res.achieved_log_sup;
    f.best_effort = res.best_effort;
    Ok((f, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(u: f64, delta: f64) -> SiegelParams {
        SiegelParams { u, delta, radius: 1.0, strict: false }
    }

    #[test]
    fn duplicate_columns_cancel() {
        let fam = ExpFamily::from_f64(1, &[vec![0.5], vec![0.5]]).unwrap();
        let r = siegel_construct(&fam, &params(1.0, 1.0), &GridSpec::default()).unwrap();
        let s: BigInt = r.coefficients.iter().sum();
        assert!(s.is_zero());
        assert_eq!(r.achieved_log_sup, None);
        assert!(!r.best_effort);
    }

    #[test]
    fn single_function_is_best_effort() {
        let fam = ExpFamily::from_f64(1, &[vec![0.0]]).unwrap();
        let r = siegel_construct(&fam, &params(2.0, 1.0), &GridSpec::default()).unwrap();
        assert!(r.best_effort);
        assert!(r.achieved_log_sup.unwrap() >= 0.0);
        assert!(siegel_construct(&fam, &SiegelParams { strict: true, ..params(2.0, 1.0) }, &GridSpec::default()).is_err());
    }

    #[test]
    fn log_two_three_small_case() {
        let t = RealTuple::from_exprs("t", &["log(2)", "log(3)"], 256).unwrap();
        let (f, r) = siegel_for_theta(&t, &[0, 1], 1, 2, &params(0.866, 8.0), &GridSpec::default()).unwrap();
        assert_eq!(f.coefficients.len(), 6);
        assert!(f.log_height <= 8.0);
        assert_eq!(r.grid_points, 1000);
        assert!(r.achieved_u > 0.0, "achieved {}", r.achieved_u);
    }

    #[test]
    fn grid_is_seed_dependent_but_deterministic() {
        let fam = ExpFamily::from_f64(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = GridSpec { seed: 7, ..Default::default() };
        let a = siegel_construct(&fam, &params(0.5, 3.0), &g).unwrap();
        let b = siegel_construct(&fam, &params(0.5, 3.0), &g).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.achieved_log_sup, b.achieved_log_sup);
    }
}
