//! Exact evaluation of the transcendence-degree bounds and their
//! side-conditions. Integer and rational arithmetic only.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub t: u64,
    pub mu: u64,
    pub nu: u64,
}

/// `μν > t(μ+ν)`, `μ·max(t−1,1) ≤ m−t` and `ν·den ≤ n−t`, where `den` is
/// `max(t−1,1)`, or `t` when the κ clause is read literally as `max(t−1,t)`.
pub fn witness_ok(m: u64, n: u64, w: Witness, literal_kappa: bool) -> bool {
    let Witness { t, mu, nu } = w;
    if t == 0 || t > m || t > n {
        return false;
    }
    let den = (t - 1).max(1);
    let den_k = if literal_kappa { t } else { den };
    mu * nu > t * (mu + nu) && mu * den <= m - t && nu * den_k <= n - t
}

/// Largest `t` admitting a witness, with the lexicographically smallest `(μ, ν)`.
pub fn theorem2_best_t(m: u64, n: u64, literal_kappa: bool) -> Option<Witness> {
    for t in (1..=m.min(n)).rev() {
        for mu in 1..=m {
            for nu in 1..=n {
                let w = Witness { t, mu, nu };
                if witness_ok(m, n, w, literal_kappa) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// `⌊√((min(m,n)+1)/2)⌋`.
pub fn corollary_bound(m: u64, n: u64) -> u64 {
    ((m.min(n) + 1) / 2).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryCheck {
    pub n: u64,
    pub t: u64,
    pub mu: u64,
    pub nu: u64,
    /// `μν/(μ+ν) > t`.
    pub ratio_ok: bool,
    /// `(ν−1)(t−1) − 1`.
    pub size_bound: i64,
    /// `n ≥ (ν−1)(t−1) − 1`.
    pub size_ok: bool,
    pub pass: bool,
}

/// The proof's substitution `t = ⌊√((n+1)/2)⌋`, `μ = ν = 2t²−1`.
pub fn corollary_witness_check(n: u64) -> Result<CorollaryCheck> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let t = ((n + 1) / 2).sqrt();
    let mu = 2 * t * t - 1;
    let nu = mu;
    let ratio_ok = mu * nu > t * (mu + nu);
    let size_bound = (nu as i64 - 1) * (t as i64 - 1) - 1;
    let size_ok = n as i64 >= size_bound;
    Ok(CorollaryCheck { n, t, mu, nu, ratio_ok, size_bound, size_ok, pass: ratio_ok && size_ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerSplit {
    pub m: u64,
    pub n: u64,
    /// Inclusive exponent ranges of the two tuples.
    pub theta: (u64, u64),
    pub kappa: (u64, u64),
    /// Corollary bound on the split sizes.
    pub bound: u64,
    /// `⌊√(n/4 + 1/2)⌋`.
    pub formula_bound: u64,
}

impl PowerSplit {
    pub fn theta_len(&self) -> u64 {
        self.theta.1 - self.theta.0 + 1
    }

    pub fn kappa_len(&self) -> u64 {
        self.kappa.1 - self.kappa.0 + 1
    }
}

/// Splits the exponent range `[m, n−m]` into `θ`- and `κ`-ranges whose sums
/// cover it exactly.
pub fn power_tuple_split(m: u64, n: u64) -> Result<PowerSplit> {
    if n < 2 * m {
        return Err(Error::invalid(format!("empty exponent range [{m}, {}]", n as i64 - m as i64)));
    }
    let w = n - 2 * m;
    let (a, b) = (w.div_ceil(2), w / 2);
    let theta = (m / 2, m / 2 + a);
    let kappa = (m.div_ceil(2), m.div_ceil(2) + b);
    let bound = corollary_bound(a + 1, b + 1);
    Ok(PowerSplit { m, n, theta, kappa, bound, formula_bound: ((n + 2) / 4).sqrt() })
}

/// `mn/(m+n) − 1`.
pub fn conjecture_bound(m: u64, n: u64) -> BigRational {
    BigRational::new(BigInt::from(m * n), BigInt::from(m + n)) - BigRational::from_integer(1.into())
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub n: u64,
    /// `0` when no witness exists.
    pub theorem_t: u64,
    pub witness: Option<Witness>,
    pub corollary_t: u64,
    #[serde(serialize_with = "ser_rational")]
    pub conjecture_bound: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub gap: BigRational,
    pub literal_kappa: bool,
}

pub fn bound_report(m: u64, n: u64, literal_kappa: bool) -> Result<BoundReport> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("m, n must be positive"));
    }
    let witness = theorem2_best_t(m, n, literal_kappa);
    let theorem_t = witness.map_or(0, |w| w.t);
    let conjecture_bound = conjecture_bound(m, n);
    let gap = &conjecture_bound - BigRational::from_integer(theorem_t.into());
    Ok(BoundReport { m, n, theorem_t, witness, corollary_t: corollary_bound(m, n), conjecture_bound, gap, literal_kappa })
}

pub const CSV_HEADER: &str = "m,n,theorem_t,mu,nu,corollary_t,conjecture_bound,gap";

impl BoundReport {
    pub fn csv_row(&self) -> String {
        let (mu, nu) = self.witness.map_or((String::new(), String::new()), |w| (w.mu.to_string(), w.nu.to_string()));
        format!("{},{},{},{},{},{},{},{}", self.m, self.n, self.theorem_t, mu, nu, self.corollary_t, self.conjecture_bound, self.gap)
    }
}

/// Row-major over `m ∈ ms`, `n ∈ ns`.
pub fn bounds_grid(ms: std::ops::RangeInclusive<u64>, ns: std::ops::RangeInclusive<u64>, literal_kappa: bool) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for m in ms {
        for n in ns.clone() {
            out.push(bound_report(m, n, literal_kappa)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_six() {
        assert_eq!(theorem2_best_t(7, 6, false), Some(Witness { t: 2, mu: 5, nu: 4 }));
        assert_eq!(theorem2_best_t(2, 2, false), None);
    }

    #[test]
    fn stated_instances() {
        for t in 2..=10u64 {
            let w = theorem2_best_t(2 * t * t - 1, 2 * t * t - t, false).unwrap();
            assert!(w.t >= t);
        }
    }

    #[test]
    fn literal_flag_is_stricter() {
        for m in 1..=12 {
            for n in 1..=12 {
                let a = theorem2_best_t(m, n, false).map_or(0, |w| w.t);
                let b = theorem2_best_t(m, n, true).map_or(0, |w| w.t);
                assert!(b <= a);
            }
        }
    }

    #[test]
    fn corollary_values() {
        assert_eq!(corollary_bound(17, 40), 3);
        assert_eq!(corollary_bound(7, 7), 2);
        assert_eq!(corollary_bound(1, 5), 1);
    }

    #[test]
    fn corollary_checks() {
        let c = corollary_witness_check(17).unwrap();
        assert_eq!((c.t, c.mu, c.size_bound), (3, 17, 31));
        assert!(c.ratio_ok && !c.size_ok && !c.pass);
        assert!(!corollary_witness_check(2).unwrap().ratio_ok);
        assert!(corollary_witness_check(8).unwrap().pass);
    }

    #[test]
    fn power_split_covers_range() {
        let s = power_tuple_split(0, 16).unwrap();
        let mut sums = std::collections::BTreeSet::new();
        for a in s.theta.0..=s.theta.1 {
            for b in s.kappa.0..=s.kappa.1 {
                sums.insert(a + b);
            }
        }
        assert_eq!(sums, (0..=16).collect());
        assert_eq!((s.bound, s.formula_bound), (2, 2));
        let d = power_tuple_split(3, 6).unwrap();
        assert_eq!((d.theta_len(), d.kappa_len(), d.bound), (1, 1, 1));
        assert!(power_tuple_split(5, 9).is_err());
    }

    #[test]
    fn conjecture_values() {
        assert_eq!(conjecture_bound(3, 3), BigRational::new(1.into(), 2.into()));
        assert_eq!(conjecture_bound(4, 4), BigRational::from_integer(1.into()));
        assert_eq!(conjecture_bound(10, 10), BigRational::from_integer(4.into()));
    }

    #[test]
    fn grid_rows() {
        let g = bounds_grid(2..=12, 2..=12, false).unwrap();
        assert_eq!(g.len(), 121);
        assert_eq!(g[0].csv_row(), "2,2,0,,,1,0,0");
    }
}
