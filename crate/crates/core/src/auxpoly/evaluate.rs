//! `log|(m_r* f)(Θ̄_k)|` through the analytic factorisation
//! `(m_r* f)(Θ̄_k) = φ(r^t κ)`, `φ(z) = Σ_d h_d exp(Σ_{λ,a} d_{λa} θ_{i_λ} z_a)`.

use super::poly::SparsePoly;
use crate::arith::Interval;
use crate::dioph::RealTuple;
use crate::error::{Error, Result};

const MAX_PRECISION: u32 = 16384;

#[derive(Clone, Debug)]
pub struct EvalSpec<'a> {
    pub theta: &'a RealTuple,
    pub kappa: &'a RealTuple,
    pub i: &'a [usize],
    pub j: &'a [usize],
    pub k: usize,
}

impl EvalSpec<'_> {
    fn check(&self, f: &SparsePoly, r: &[Vec<u32>]) -> Result<()> {
        let (mu, nu) = (self.i.len(), self.j.len());
        if f.nvars != mu * self.k {
            return Err(Error::DimensionMismatch { expected: mu * self.k, found: f.nvars });
        }
        if r.len() != nu || r.iter().any(|row| row.len() != self.k) {
            return Err(Error::DimensionMismatch { expected: nu, found: r.len() });
        }
        if self.i.iter().any(|&x| x >= self.theta.len()) || self.j.iter().any(|&x| x >= self.kappa.len()) {
            return Err(Error::invalid("index subset out of range"));
        }
        Ok(())
    }
}

/// `log|v|` with the `−∞` sentinel for exact zero and a `[−∞, hi]` enclosure
/// when `v` may vanish.
pub fn log_abs(v: &Interval) -> Interval {
    let p = v.prec();
    if v.is_exact_zero() {
        return Interval::neg_infinity(p);
    }
    let a = v.abs();
    if a.contains_zero() {
        let hi = a.ln();
        return Interval::from_bounds(Interval::neg_infinity(p).lo().clone(), hi.hi().clone());
    }
    a.ln()
}

fn escalate(start: u32, mut f: impl FnMut(u32) -> Result<Interval>) -> Result<Interval> {
    let mut p = start.max(128);
    loop {
        let v = f(p)?;
        let lg = log_abs(&v);
        if v.is_exact_zero() || (lg.is_finite() && lg.width_f64() <= 2.3283064365386963e-10) || p >= MAX_PRECISION {
            return Ok(lg);
        }
        p = (p * 2).min(MAX_PRECISION);
    }
}

/// Analytic evaluation.
pub fn evaluate_at_theta_kappa(f: &SparsePoly, r: &[Vec<u32>], spec: &EvalSpec, prec: u32) -> Result<Interval> {
    spec.check(f, r)?;
    let (mu, k) = (spec.i.len(), spec.k);
    escalate(prec, |p| {
        let th = spec.theta.at_precision(p)?;
        let ka = spec.kappa.at_precision(p)?;
        let z: Vec<Interval> = (0..k)
            .map(|a| {
                spec.j.iter().zip(r).fold(Interval::zero(p), |acc, (&jj, row)| {
                    if row[a] == 0 {
                        acc
                    } else {
                        acc.add(&ka.entry(jj).mul_i64(row[a] as i64))
                    }
                })
            })
            .collect();
        let mut sum = Interval::zero(p);
        for (e, c) in &f.terms {
            let mut arg = Interval::zero(p);
            for lam in 0..mu {
                for (a, za) in z.iter().enumerate() {
                    let d = e[lam * k + a];
                    if d != 0 {
                        arg = arg.add(&th.entry(spec.i[lam]).mul(za).mul_i64(d as i64));
                    }
                }
            }
            sum = sum.add(&arg.exp().mul(&Interval::from_bigint(p, c)));
        }
        Ok(sum)
    })
}

/// Evaluation of an expanded pullback at `z_{λaρ} = exp(θ_{i_λ}κ_{j_ρ})`.
pub fn evaluate_pullback_direct(pb: &SparsePoly, spec: &EvalSpec, prec: u32) -> Result<Interval> {
    let (mu, nu, k) = (spec.i.len(), spec.j.len(), spec.k);
    if pb.nvars != mu * k * nu {
        return Err(Error::DimensionMismatch { expected: mu * k * nu, found: pb.nvars });
    }
    escalate(prec, |p| {
        let th = spec.theta.at_precision(p)?;
        let ka = spec.kappa.at_precision(p)?;
        let mut coords = Vec::with_capacity(pb.nvars);
        for lam in 0..mu {
            for _a in 0..k {
                for rho in 0..nu {
                    coords.push(th.entry(spec.i[lam]).mul(ka.entry(spec.j[rho])).exp());
                }
            }
        }
        let mut sum = Interval::zero(p);
        for (e, c) in &pb.terms {
            let mut t = Interval::from_bigint(p, c);
            for (x, &ex) in coords.iter().zip(e) {
                if ex != 0 {
                    t = t.mul(&x.powi(ex as i64));
                }
            }
            sum = sum.add(&t);
        }
        Ok(sum)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auxpoly::pullback::pullback_mr;
    use num_bigint::BigInt;

    fn one() -> RealTuple {
        RealTuple::from_exprs("one", &["1"], 128).unwrap()
    }

    #[test]
    fn identity_monomial() {
        let (t, k) = (one(), one());
        let spec = EvalSpec { theta: &t, kappa: &k, i: &[0], j: &[0], k: 1 };
        let f = SparsePoly::from_terms(1, [(vec![1], BigInt::from(1))]).unwrap();
        let v = evaluate_at_theta_kappa(&f, &[vec![1]], &spec, 128).unwrap();
        assert!(v.contains_f64(1.0));
    }

    #[test]
    fn vanishing_at_zero_recipe() {
        let (t, k) = (one(), one());
        let spec = EvalSpec { theta: &t, kappa: &k, i: &[0], j: &[0], k: 1 };
        let f = SparsePoly::from_terms(1, [(vec![1], BigInt::from(1)), (vec![0], BigInt::from(-1))]).unwrap();
        assert!(evaluate_at_theta_kappa(&f, &[vec![0]], &spec, 128).unwrap().is_neg_infinity());
    }

    #[test]
    fn analytic_matches_expansion() {
        let t = RealTuple::from_exprs("t", &["log(2)", "log(3)"], 128).unwrap();
        let k = RealTuple::from_exprs("k", &["1/2", "sqrt(2)/3"], 128).unwrap();
        let spec = EvalSpec { theta: &t, kappa: &k, i: &[0, 1], j: &[0, 1], k: 1 };
        let f = SparsePoly::from_terms(
            2,
            [(vec![0, 0], BigInt::from(3)), (vec![1, 1], BigInt::from(-2)), (vec![2, 0], BigInt::from(1))],
        )
        .unwrap();
        let r = vec![vec![2], vec![3]];
        let a = evaluate_at_theta_kappa(&f, &r, &spec, 128).unwrap();
        let pb = pullback_mr(&f, 2, 1, &r).unwrap();
        let b = evaluate_pullback_direct(&pb.poly, &spec, 128).unwrap();
        assert!(a.overlaps(&b));
    }
}
