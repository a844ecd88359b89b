//! Rank statements behind the transcendence-degree bounds, checked exactly.
//!
//! Index sets are 0-based subsets of `{0, …, n−1}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::Serialize;

use super::character::{CharacterModule, SubgroupDescriptor};
use crate::arith::field;
use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// All `k`-subsets of `{0, …, n−1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else { return out };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WiFamilyRank {
    pub rank: usize,
    /// Greedy independent subsets, truncated to `ν+1` when the lemma holds.
    pub witnesses: Vec<Vec<usize>>,
    pub lemma_holds: bool,
}

/// Rank of `{w_I : |I| = n−ν}` where each `w_I` is nonzero and supported on `I`.
pub fn wi_family_rank(
    n: usize,
    nu: usize,
    choices: &BTreeMap<Vec<usize>, Vec<BigRational>>,
) -> Result<WiFamilyRank> {
    if nu >= n {
        return Err(Error::invalid(format!("need ν < n, got ν={nu}, n={n}")));
    }
    let all = subsets(n, n - nu);
    for subset in &all {
        let Some(w) = choices.get(subset) else {
            return Err(Error::InvalidChoice { subset: subset.clone(), reason: "missing".into() });
        };
        if w.len() != n {
            return Err(Error::InvalidChoice {
                subset: subset.clone(),
                reason: format!("vector length {} ≠ {n}", w.len()),
            });
        }
        if w.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidChoice { subset: subset.clone(), reason: "zero vector".into() });
        }
        if let Some(i) = (0..n).find(|i| !subset.contains(i) && !w[*i].is_zero()) {
            return Err(Error::InvalidChoice {
                subset: subset.clone(),
                reason: format!("nonzero coordinate {i} outside the subset"),
            });
        }
    }
    if let Some(extra) = choices.keys().find(|k| !all.contains(k)) {
        return Err(Error::InvalidChoice { subset: extra.clone(), reason: "not a subset of size n−ν".into() });
    }
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut witnesses = Vec::new();
    for subset in &all {
        let mut trial = basis.clone();
        trial.push(choices[subset].clone());
        if field::rank(&mut trial.clone()) > basis.len() {
            basis = trial;
            witnesses.push(subset.clone());
        }
    }
    let rank = basis.len();
    let lemma_holds = rank > nu;
    if lemma_holds {
        witnesses.truncate(nu + 1);
    }
    Ok(WiFamilyRank { rank, witnesses, lemma_holds })
}

/// Codimension in `Ḡ` of `Ḡ ∩ ⋂_j ker χ_j`, `χ_j = Π_i x_{ij}^{l_i}`, on the
/// `m·n`-torus with coordinate `(i, j)` at index `i·n + j`.
pub fn product_character_codim(l_vec: &[i64], n: usize, relations: &CharacterModule) -> Result<usize> {
    let m = l_vec.len();
    if m == 0 || l_vec.iter().all(|&v| v == 0) {
        return Err(Error::invalid("l_vec must be nonzero"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if relations.ambient_dim() != m * n {
        return Err(Error::DimensionMismatch { expected: m * n, found: relations.ambient_dim() });
    }
    let chi = IntMatrix::from_fn(n, m * n, |j, c| {
        if c % n == j {
            BigInt::from(l_vec[c / n])
        } else {
            BigInt::zero()
        }
    });
    let stacked = chi.vstack(relations.generators())?;
    Ok(stacked.rank() - relations.generators().rank())
}

/// `ℋ_H(L) = L^{dim H}`.
pub fn hilbert_function(h: &SubgroupDescriptor, l: u64) -> Result<BigInt> {
    if l == 0 {
        return Err(Error::invalid("degree L must be at least 1"));
    }
    Ok(Pow::pow(BigInt::from(l), h.dim as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::character::{kernel_of, Character};

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(5, 3).len(), 10);
    }

    #[test]
    fn disjoint_supports() {
        let mut c = BTreeMap::new();
        c.insert(vec![0], vec![q(3), q(0)]);
        c.insert(vec![1], vec![q(0), q(5)]);
        let r = wi_family_rank(2, 1, &c).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.witnesses, vec![vec![0], vec![1]]);
        assert!(r.lemma_holds);
    }

    #[test]
    fn invalid_choices() {
        let mut c = BTreeMap::new();
        c.insert(vec![0], vec![q(0), q(1)]);
        c.insert(vec![1], vec![q(0), q(5)]);
        assert!(matches!(wi_family_rank(2, 1, &c), Err(Error::InvalidChoice { .. })));
        c.insert(vec![0], vec![q(0), q(0)]);
        assert!(matches!(wi_family_rank(2, 1, &c), Err(Error::InvalidChoice { .. })));
        c.remove(&vec![0]);
        assert!(matches!(wi_family_rank(2, 1, &c), Err(Error::InvalidChoice { .. })));
    }

    #[test]
    fn codim_examples() {
        assert_eq!(product_character_codim(&[1, -1], 2, &CharacterModule::zero(4)).unwrap(), 2);
        assert_eq!(product_character_codim(&[1], 3, &CharacterModule::zero(3)).unwrap(), 3);
        // χ_1 = x_{00}; relation lattice generated by χ_1 itself.
        let rel = CharacterModule::new(4, vec![Character(vec![1, 0, 0, 0])]).unwrap();
        assert_eq!(product_character_codim(&[1, 0], 2, &rel).unwrap(), 1);
        assert!(product_character_codim(&[0, 0], 2, &CharacterModule::zero(4)).is_err());
    }

    #[test]
    fn hilbert() {
        let h2 = kernel_of(3, &[Character(vec![1, 1, 1])]).unwrap();
        assert_eq!(hilbert_function(&h2, 3).unwrap(), BigInt::from(9));
        let h0 = kernel_of(2, &[Character(vec![1, 0]), Character(vec![0, 1])]).unwrap();
        assert_eq!(hilbert_function(&h0, 7).unwrap(), BigInt::from(1));
        let h1 = kernel_of(2, &[Character(vec![1, 1])]).unwrap();
        assert_eq!(hilbert_function(&h1, 5).unwrap(), BigInt::from(5));
    }
}
