//! Minimal vanishing degree `ω(Σ)` of a finite point set, by exact rank of
//! monomial evaluation matrices.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::monomial::exponents_up_to;
use crate::arith::field::{self, Cyclotomic, CyclotomicField, FieldElem};
use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 200;
pub const MAX_AMBIENT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct OmegaResult {
    pub omega: usize,
    pub points: usize,
    pub ambient_dim: usize,
    /// Monomials of degree ≤ ω; the evaluation matrix has rank below this.
    pub matrix_cols: usize,
    pub rank_at_omega: usize,
}

fn eval_row<F: FieldElem>(point: &[F], monos: &[Vec<u32>], max_deg: usize) -> Vec<F> {
    let one = point[0].one_like();
    let pows: Vec<Vec<F>> = point
        .iter()
        .map(|x| {
            let mut v = vec![one.clone()];
            for k in 1..=max_deg {
                let next = v[k - 1].mul(x);
                v.push(next);
            }
            v
        })
        .collect();
    monos
        .iter()
        .map(|d| d.iter().enumerate().fold(one.clone(), |acc, (i, &e)| acc.mul(&pows[i][e as usize])))
        .collect()
}

/// `ω(Σ)` over any exact field. `ω(∅) = 0`.
pub fn omega<F: FieldElem>(points: &[Vec<F>]) -> Result<OmegaResult> {
    if points.len() > MAX_POINTS {
        return Err(Error::ScaleExceeded(format!("{} points > {MAX_POINTS}", points.len())));
    }
    let Some(first) = points.first() else {
        return Ok(OmegaResult {
            omega: 0,
            points: 0,
            ambient_dim: 0,
            matrix_cols: 1,
            rank_at_omega: 0,
        });
    };
    let l = first.len();
    if l == 0 || l > MAX_AMBIENT {
        return Err(Error::ScaleExceeded(format!("ambient dimension {l} outside 1..={MAX_AMBIENT}")));
    }
    if let Some(p) = points.iter().find(|p| p.len() != l) {
        return Err(Error::DimensionMismatch { expected: l, found: p.len() });
    }
    for deg in 1.. {
        let monos = exponents_up_to(l, deg as u32);
        let mut mat: Vec<Vec<F>> = points.iter().map(|p| eval_row(p, &monos, deg)).collect();
        let r = field::rank(&mut mat);
        if r < monos.len() {
            return Ok(OmegaResult {
                omega: deg,
                points: points.len(),
                ambient_dim: l,
                matrix_cols: monos.len(),
                rank_at_omega: r,
            });
        }
    }
    unreachable!()
}

/// Is there a nonzero polynomial of degree ≤ `max_deg` vanishing on `points`?
pub fn vanishes_at_degree<F: FieldElem>(points: &[Vec<F>], max_deg: usize) -> Result<bool> {
    let Some(first) = points.first() else { return Ok(true) };
    let monos = exponents_up_to(first.len(), max_deg as u32);
    if points.len() < monos.len() {
        return Ok(true);
    }
    let mut mat: Vec<Vec<F>> = points.iter().map(|p| eval_row(p, &monos, max_deg)).collect();
    Ok(field::rank(&mut mat) < monos.len())
}

pub fn omega_rational(points: &[Vec<BigRational>]) -> Result<OmegaResult> {
    omega(points)
}

/// Points whose coordinates are `ζ_N^{a_i}`, given by exponent vectors.
pub fn roots_of_unity_points(order: u64, exps: &[Vec<i64>]) -> Result<Vec<Vec<Cyclotomic>>> {
    let f: Arc<CyclotomicField> = CyclotomicField::new(order)?;
    Ok(exps.iter().map(|p| p.iter().map(|&a| f.zeta_pow(a)).collect()).collect())
}

/// Cartesian product `Σ_1 × Σ_2` as points in the concatenated space.
pub fn product_set<F: Clone>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut p = x.clone();
            p.extend(y.iter().cloned());
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|p| p.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
    }

    #[test]
    fn small_sets() {
        assert_eq!(omega_rational(&pts(&[&[3, 4]])).unwrap().omega, 1);
        assert_eq!(omega_rational(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap().omega, 2);
        assert_eq!(omega_rational(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap().omega, 1);
        assert_eq!(omega_rational(&[]).unwrap().omega, 0);
    }

    #[test]
    fn product_law_instance() {
        let s1 = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let s2 = pts(&[&[5, 5]]);
        let p = product_set(&s1, &s2);
        assert_eq!(omega_rational(&p).unwrap().omega, 1);
    }

    #[test]
    fn roots_of_unity() {
        // All four 4th roots of unity on the line: ω = 4 in one variable.
        let p = roots_of_unity_points(4, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(omega(&p).unwrap().omega, 4);
        assert!(vanishes_at_degree(&p, 4).unwrap());
        assert!(!vanishes_at_degree(&p, 3).unwrap());
    }

    #[test]
    fn scale_limits() {
        let many: Vec<Vec<BigRational>> = (0..201).map(|i| pts(&[&[i]])[0].clone()).collect();
        assert!(matches!(omega_rational(&many), Err(Error::ScaleExceeded(_))));
    }
}
