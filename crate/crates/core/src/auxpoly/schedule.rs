//! Parameter schedules `(D, k, μ, ν) ↦ (L, R, M, Δ, U)` and the feasibility
//! frontier.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rug::float::Round;
use rug::Float;
use serde::{Serialize, Serializer};

use super::monomial::binomial;
use crate::arith::interval::float_to_rational;
use crate::error::{Error, Result};

pub(crate) fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxSchedule {
    pub d: u64,
    pub k: u32,
    pub mu: u32,
    pub nu: u32,
    pub l: u64,
    pub r: u64,
    /// `|A_L| = C(L+μk, μk)`.
    #[serde(serialize_with = "ser_biguint")]
    pub m: BigUint,
    /// The closed form `C(L+μk−1, μk)`, kept for comparison.
    #[serde(serialize_with = "ser_biguint")]
    pub m_paper: BigUint,
    pub delta: u64,
    /// `(MΔ)^{1/(k+1)}/8`, rounded down.
    pub u: f64,
    /// `(8U)^{k+1} ≤ MΔ`, checked exactly on the rounded `U`.
    pub siegel_ok: bool,
    /// `Δ ≤ U`, decided exactly as `8^{k+1}Δ^k ≤ M`.
    pub feasible: bool,
}

/// `⌊a^{1/n}⌋`.
fn iroot(a: &BigUint, n: u32) -> BigUint {
    a.nth_root(n)
}

pub fn schedule_l(d: u64, mu: u32, nu: u32) -> u64 {
    let dn: BigUint = Pow::pow(BigUint::from(d), nu);
    iroot(&dn, mu + nu).to_u64().expect("L fits in u64")
}

pub fn schedule_r(d: u64, mu: u32, nu: u32) -> u64 {
    let a: BigUint = Pow::pow(BigUint::from(2 * mu as u64 + 1), mu + nu);
    let b: BigUint = Pow::pow(BigUint::from(d), mu);
    iroot(&(a * b), mu + nu).to_u64().expect("R fits in u64")
}

/// `U` and the two Siegel-lemma checks for given `M`, `Δ`, `k`.
pub fn siegel_parameters(m: &BigUint, delta: u64, k: u32) -> (f64, bool, bool) {
    let md = m * BigUint::from(delta);
    let prec = 64 + md.bits() as u32;
    let x = Float::with_val(prec, rug::Integer::from_str_radix(&md.to_str_radix(16), 16).unwrap());
    let root = Float::with_val_round(prec, x.ln_ref(), Round::Down).0;
    let root = Float::with_val_round(prec, &root / (k + 1), Round::Down).0;
    let root = Float::with_val_round(prec, root.exp_ref(), Round::Down).0;
    let u = Float::with_val_round(prec, &root / 8u32, Round::Down).0;
    let siegel_ok = match float_to_rational(&u) {
        Some(q) => {
            let lhs: BigRational = Pow::pow(q * BigRational::from_integer(8.into()), k + 1);
            lhs <= BigRational::from_integer(md.into())
        }
        None => false,
    };
    let lhs: BigUint = Pow::pow(BigUint::from(8u32), k + 1) * Pow::pow(BigUint::from(delta), k);
    let feasible = lhs <= *m;
    (u.to_f64_round(Round::Down), siegel_ok, feasible)
}

pub fn make_schedule(d: u64, k: u32, mu: u32, nu: u32) -> Result<AuxSchedule> {
    if d == 0 || k == 0 || mu == 0 || nu == 0 {
        return Err(Error::invalid("D, k, μ, ν must be positive"));
    }
    let l = schedule_l(d, mu, nu);
    let r = schedule_r(d, mu, nu);
    let n = (mu * k) as u64;
    let m = binomial(l + n, n);
    let m_paper = binomial(l + n - 1, n);
    let (u, siegel_ok, feasible) = siegel_parameters(&m, d, k);
    Ok(AuxSchedule { d, k, mu, nu, l, r, m, m_paper, delta: d, u, siegel_ok, feasible })
}

#[derive(Clone, Debug, Serialize)]
pub struct Frontier {
    pub mu: u32,
    pub nu: u32,
    pub k: u32,
    /// Smallest feasible `D` up to `cap`, if any.
    pub d: Option<u64>,
    pub cap: u64,
    /// `μν > μ+ν`: `M` eventually outgrows `8^{k+1}D^k`.
    pub eventually_feasible: bool,
    /// The frontier was located by an exact scan (otherwise by bracketing and
    /// bisection on the large-`L` tail).
    pub exact_scan: bool,
}

/// Smallest `D` with `L(D) ≥ x`, i.e. `D^ν ≥ x^{μ+ν}`.
fn first_d_with_l(x: u64, mu: u32, nu: u32) -> BigUint {
    let target: BigUint = Pow::pow(BigUint::from(x), mu + nu);
    let t = iroot(&target, nu);
    let tn: BigUint = Pow::pow(t.clone(), nu);
    if tn < target {
        t + 1u32
    } else {
        t
    }
}

fn feasible_at(x: u64, d: &BigUint, mu: u32, k: u32) -> bool {
    let n = (mu * k) as u64;
    let lhs: BigUint = Pow::pow(BigUint::from(8u32), k + 1) * Pow::pow(d.clone(), k);
    lhs <= binomial(x + n, n)
}

const SCAN: u64 = 1 << 16;

/// Within an `L`-plateau feasibility is decreasing in `D`, so only the first
/// `D` of each plateau needs checking.
pub fn frontier(mu: u32, nu: u32, k: u32, cap: u64) -> Result<Frontier> {
    if mu == 0 || nu == 0 || k == 0 {
        return Err(Error::invalid("μ, ν, k must be positive"));
    }
    let cap_b = BigUint::from(cap);
    let eventually_feasible = mu * nu > mu + nu;
    let mk = |d: Option<u64>, exact_scan| Frontier { mu, nu, k, d, cap, eventually_feasible, exact_scan };
    let l_cap = schedule_l(cap, mu, nu);
    for x in 1..=l_cap.min(SCAN) {
        let d = first_d_with_l(x, mu, nu).max(BigUint::from(1u32));
        if d > cap_b {
            break;
        }
        if feasible_at(x, &d, mu, k) {
            return Ok(mk(d.to_u64(), true));
        }
    }
    if l_cap <= SCAN {
        return Ok(mk(None, true));
    }
    // Tail: double x until feasible, then bisect.
    let mut lo = SCAN;
    let mut hi = SCAN;
    loop {
        hi = hi.saturating_mul(2).min(l_cap);
        let d = first_d_with_l(hi, mu, nu);
        if d <= cap_b && feasible_at(hi, &d, mu, k) {
            break;
        }
        if hi == l_cap {
            return Ok(mk(None, false));
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible_at(mid, &first_d_with_l(mid, mu, nu), mu, k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(mk(first_d_with_l(hi, mu, nu).to_u64(), false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        let s = make_schedule(32, 1, 3, 2).unwrap();
        assert_eq!((s.l, s.r), (4, 56));
        let s = make_schedule(1, 1, 2, 3).unwrap();
        assert_eq!((s.l, s.r), (1, 5));
    }

    #[test]
    fn direct_m_delta() {
        let (u, ok, feasible) = siegel_parameters(&BigUint::from(15u32), 32, 1);
        assert!((u - (480f64).sqrt() / 8.0).abs() < 1e-12);
        assert!(ok && !feasible);
    }

    #[test]
    fn floor_identities() {
        for d in [2u64, 15, 16, 17, 1000, 1 << 20] {
            for (mu, nu) in [(1, 1), (2, 3), (4, 2)] {
                let s = make_schedule(d, 2, mu, nu).unwrap();
                let e = nu as f64 / (mu + nu) as f64;
                let v = (d as f64).powf(e);
                assert!(s.l as f64 <= v + 1e-9 && v < s.l as f64 + 1.0);
                assert!(s.siegel_ok);
            }
        }
    }

    #[test]
    fn frontier_cells() {
        let f = frontier(1, 3, 1, 1 << 20).unwrap();
        assert!(!f.eventually_feasible);
        assert_eq!(f.d, None);
        let f = frontier(4, 4, 1, u64::MAX >> 2).unwrap();
        let d = f.d.expect("frontier for (4,4)");
        let s = make_schedule(d, 1, 4, 4).unwrap();
        assert!(s.feasible);
        assert!(!make_schedule(d - 1, 1, 4, 4).unwrap().feasible);
    }
}
