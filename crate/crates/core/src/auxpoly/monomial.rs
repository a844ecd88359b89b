//! Monomial multidegree sets `A_L`.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// All exponent vectors of length `n` with total degree ≤ `l`, in ascending
/// lexicographic order.
pub fn exponents_up_to(n: usize, l: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, l, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `A_L` for the `μk` variables `x_{λa}`, flattened as index `λ·k + a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialSet {
    pub mu: usize,
    pub k: usize,
    pub l: u32,
    pub multidegrees: Vec<Vec<u32>>,
}

pub fn monomial_set(mu: usize, k: usize, l: u32) -> MonomialSet {
    MonomialSet { mu, k, l, multidegrees: exponents_up_to(mu * k, l) }
}

impl MonomialSet {
    pub fn len(&self) -> usize {
        self.multidegrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multidegrees.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.mu * self.k
    }

    /// `C(L+μk, μk)`, the true cardinality.
    pub fn expected_len(&self) -> BigUint {
        binomial(self.l as u64 + self.nvars() as u64, self.nvars() as u64)
    }

    /// Exponent of `x_{λa}` in the `idx`-th multidegree.
    pub fn exponent(&self, idx: usize, lambda: usize, a: usize) -> u32 {
        self.multidegrees[idx][lambda * self.k + a]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(monomial_set(1, 1, 2).multidegrees, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(monomial_set(2, 1, 1).multidegrees, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let m = monomial_set(2, 1, 4);
        assert_eq!(m.len(), 15);
        assert_eq!(m.expected_len(), BigUint::from(15u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
    }

    #[test]
    fn sorted_and_unique() {
        let m = monomial_set(2, 2, 3);
        assert!(m.multidegrees.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(BigUint::from(m.len()), m.expected_len());
    }
}
