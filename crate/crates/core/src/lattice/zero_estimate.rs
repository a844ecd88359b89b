//! Exhaustive obstruction-subgroup search for point sets of roots of unity.
//!
//! Points of `G_m^μ` are stored as exponent vectors `a` modulo `N`, meaning
//! the point `(ζ_N^{a_1}, …, ζ_N^{a_μ})`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use super::character::{kernel_subgroup, Character, CharacterModule, SubgroupDescriptor};
use crate::auxpoly::omega::{omega, roots_of_unity_points, vanishes_at_degree};
use crate::error::{Error, Result};

pub const MAX_MU: usize = 3;
pub const MAX_BASE: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct ZeroEstimateWitness {
    pub character: Character,
    pub subgroup: SubgroupDescriptor,
    /// `card(Σ̄H/H)`, counted for the identity component of `ker χ`.
    pub cosets: u64,
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint")]
    pub hilbert_h: BigInt,
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint")]
    pub hilbert_g: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroEstimateReport {
    pub mu: usize,
    pub order: u64,
    pub depth: usize,
    pub degree: u32,
    pub base_points: usize,
    pub product_points: usize,
    pub omega: usize,
    pub characters_searched: u64,
    pub found: Option<ZeroEstimateWitness>,
}

/// `Σ(d) = {σ_1⋯σ_d : σ_i ∈ Σ̄}`, deduplicated and sorted.
pub fn product_points(order: u64, base: &[Vec<i64>], d: usize) -> Vec<Vec<i64>> {
    let n = order as i64;
    let mu = base.first().map_or(0, |p| p.len());
    let mut cur: BTreeSet<Vec<i64>> = BTreeSet::new();
    cur.insert(vec![0; mu]);
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for p in &cur {
            for s in base {
                next.insert(p.iter().zip(s).map(|(a, b)| (a + b).rem_euclid(n)).collect());
            }
        }
        cur = next;
    }
    cur.into_iter().collect()
}

fn next_vector(v: &mut [i64], bound: i64) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] < bound {
            v[i] += 1;
            return true;
        }
        v[i] = -bound;
    }
    false
}

/// Distinct values of `χ_l` on the points.
pub fn character_values(order: u64, points: &[Vec<i64>], l: &[i64]) -> usize {
    let n = order as i64;
    let vals: BTreeSet<i64> = points
        .iter()
        .map(|a| a.iter().zip(l).map(|(x, y)| x * y).sum::<i64>().rem_euclid(n))
        .collect();
    vals.len()
}

pub fn zero_estimate_search(order: u64, base: &[Vec<i64>], depth: usize, degree: u32) -> Result<ZeroEstimateReport> {
    let mu = base.first().map(|p| p.len()).ok_or_else(|| Error::invalid("empty base set"))?;
    if let Some(p) = base.iter().find(|p| p.len() != mu) {
        return Err(Error::DimensionMismatch { expected: mu, found: p.len() });
    }
    if mu == 0 || mu > MAX_MU || base.len() > MAX_BASE {
        return Err(Error::ScaleExceeded(format!(
            "exhaustive search needs 1 ≤ μ ≤ {MAX_MU} and |Σ̄| ≤ {MAX_BASE}, got μ={mu}, |Σ̄|={}",
            base.len()
        )));
    }
    if depth == 0 || degree == 0 || order == 0 {
        return Err(Error::invalid("depth, degree and order must be positive"));
    }
    let sigma = product_points(order, base, depth);
    let pts = roots_of_unity_points(order, &sigma)?;
    if !vanishes_at_degree(&pts, degree as usize)? {
        return Err(Error::HypothesisNotMet(format!(
            "no nonzero polynomial of degree ≤ {degree} vanishes on Σ({depth}) ({} points)",
            sigma.len()
        )));
    }
    let om = omega(&pts)?.omega;
    let big_l = BigInt::from(degree);
    let hilbert_g: BigInt = Pow::pow(&big_l, mu as u32);
    let bound = degree as i64;
    let base_sorted: Vec<Vec<i64>> = base.iter().map(|p| p.iter().map(|a| a.rem_euclid(order as i64)).collect()).collect();

    let mut l = vec![-bound; mu];
    let mut searched = 0u64;
    let mut found = None;
    loop {
        let lead = l.iter().find(|&&x| x != 0).copied();
        if lead.is_some_and(|x| x > 0) {
            searched += 1;
            let chr = Character(l.clone());
            let g = chr.gcd() as i64;
            let prim: Vec<i64> = l.iter().map(|x| x / g).collect();
            let cosets = character_values(order, &base_sorted, &prim) as u64;
            let subgroup = kernel_subgroup(&CharacterModule::new(mu, vec![chr.clone()])?);
            let hilbert_h: BigInt = Pow::pow(&big_l, subgroup.dim as u32);
            if BigInt::from(cosets) * &hilbert_h <= hilbert_g {
                found = Some(ZeroEstimateWitness { character: chr, subgroup, cosets, hilbert_h, hilbert_g: hilbert_g.clone() });
                break;
            }
        }
        if !next_vector(&mut l, bound) {
            break;
        }
    }
    Ok(ZeroEstimateReport {
        mu,
        order,
        depth,
        degree,
        base_points: base.len(),
        product_points: sigma.len(),
        omega: om,
        characters_searched: searched,
        found,
    })
}
