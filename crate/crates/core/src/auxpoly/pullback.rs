//! Monomial pullbacks `m_r*`: `x_{λa} ↦ Π_ρ z_{λaρ}^{r_{ρa}}`.
//!
//! Only the `μkν` coordinates `z_{i_λ a j_ρ}` that occur are kept, flattened
//! as `(λ·k + a)·ν + ρ`.

use num_bigint::BigInt;
use serde::Serialize;

use super::poly::SparsePoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Pullback {
    pub poly: SparsePoly,
    pub max_r: u32,
    pub degree_f: u64,
    pub total_degree: u64,
    pub max_partial_degree: u64,
    /// `max r · deg f`, the per-variable bound.
    pub partial_bound: u64,
    /// `ν · max r · deg f`, the total-degree bound.
    pub total_bound: u64,
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint")]
    pub norm_f: BigInt,
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint")]
    pub norm_pullback: BigInt,
    /// Distinct monomials of `f` were merged (some column of `r` is zero).
    pub collisions: bool,
    pub degree_ok: bool,
    /// `|m_r* f| ≤ |f|`; before merging this is an identity, so it is only
    /// meaningful without collisions.
    pub norm_ok: bool,
}

/// `r` is given as `ν` rows of length `k`.
pub fn pullback_mr(f: &SparsePoly, mu: usize, k: usize, r: &[Vec<u32>]) -> Result<Pullback> {
    if f.nvars != mu * k {
        return Err(Error::DimensionMismatch { expected: mu * k, found: f.nvars });
    }
    let nu = r.len();
    if nu == 0 {
        return Err(Error::invalid("r must have at least one row"));
    }
    if let Some(row) = r.iter().find(|row| row.len() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: row.len() });
    }
    let nv = mu * k * nu;
    let mut out = SparsePoly::new(nv);
    for (e, c) in &f.terms {
        let mut img = vec![0u32; nv];
        for lam in 0..mu {
            for a in 0..k {
                let d = e[lam * k + a];
                for (rho, row) in r.iter().enumerate() {
                    img[(lam * k + a) * nu + rho] = d * row[a];
                }
            }
        }
        out.add_term(img, c.clone());
    }
    let max_r = r.iter().flatten().copied().max().unwrap_or(0);
    let degree_f = f.degree();
    let partial_bound = max_r as u64 * degree_f;
    let total_bound = nu as u64 * partial_bound;
    let collisions = out.terms.len() != f.terms.len();
    let norm_f = f.norm();
    let norm_pullback = out.norm();
    let total_degree = out.degree();
    let max_partial_degree = out.max_partial_degree();
    Ok(Pullback {
        degree_ok: max_partial_degree <= partial_bound && total_degree <= total_bound,
        norm_ok: collisions || norm_pullback <= norm_f,
        poly: out,
        max_r,
        degree_f,
        total_degree,
        max_partial_degree,
        partial_bound,
        total_bound,
        norm_f,
        norm_pullback,
        collisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(nvars: usize, t: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_terms(nvars, t.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).unwrap()
    }

    #[test]
    fn square_to_sixth() {
        let p = pullback_mr(&poly(1, &[(&[2], 1)]), 1, 1, &[vec![3]]).unwrap();
        assert_eq!(p.poly, poly(1, &[(&[6], 1)]));
        assert!(p.degree_ok && p.total_degree == 6 && p.partial_bound == 6);
    }

    #[test]
    fn two_by_two() {
        // f = x_{11} x_{21} with μ=2, k=1 and ν=2.
        let p = pullback_mr(&poly(2, &[(&[1, 1], 1)]), 2, 1, &[vec![3], vec![2]]).unwrap();
        assert_eq!(p.max_partial_degree, 3);
        assert!(p.max_partial_degree <= 6);
        assert_eq!(p.total_degree, 10);
        assert!(p.degree_ok);
    }

    #[test]
    fn norm_preserved_without_collisions() {
        let f = poly(1, &[(&[0], -5), (&[1], 2), (&[2], 4)]);
        let p = pullback_mr(&f, 1, 1, &[vec![2]]).unwrap();
        assert_eq!(p.norm_pullback, BigInt::from(5));
        assert!(!p.collisions && p.norm_ok);
        let q = pullback_mr(&f, 1, 1, &[vec![0]]).unwrap();
        assert!(q.collisions);
        assert_eq!(q.poly.terms.len(), 1);
    }
}
