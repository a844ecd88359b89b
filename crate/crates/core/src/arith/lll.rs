//! Integral LLL reduction (δ = 3/4) in exact arithmetic.
//!
//! Follows the classical all-integer formulation with subdeterminants `d_i`
//! and scaled Gram–Schmidt coefficients `λ_{k,j}`, so no rationals appear.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<BigInt>()
}

/// Nearest integer to `n / d` for `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

struct State {
    b: Vec<Vec<BigInt>>,
    // 1-indexed: d[0] = 1, d[i] = Gram determinant of the first i vectors.
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        let two_lam = self.lam[k][l].abs() * 2;
        if two_lam <= self.d[l] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l]);
        let (bl, bk) = {
            let (lo, hi) = self.b.split_at_mut(k - 1);
            (&lo[l - 1], &mut hi[0])
        };
        for (x, y) in bk.iter_mut().zip(bl) {
            *x -= &q * y;
        }
        let t = &q * &self.d[l];
        self.lam[k][l] -= t;
        for i in 1..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k - 1, k - 2);
        for j in 1..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = bb;
    }
}

/// LLL-reduce the rows of `basis`. The rows must be linearly independent.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dim = basis[0].len();
    if let Some(r) = basis.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
    }
    let mut st = State {
        b: basis.to_vec(),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    st.d[0] = BigInt::from(1);
    st.d[1] = dot(&st.b[0], &st.b[0]);
    if st.d[1].is_zero() {
        return Err(Error::invalid("LLL basis has a zero vector"));
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&st.b[k - 1], &st.b[j - 1]);
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::invalid("LLL basis rows are linearly dependent"));
                    }
                    st.d[k] = u;
                }
            }
        }
        st.red(k, k - 1);
        let lhs = &st.d[k] * &st.d[k - 2] * 4;
        let rhs = &st.d[k - 1] * &st.d[k - 1] * 3 - &st.lam[k][k - 1] * &st.lam[k][k - 1] * 4;
        if lhs < rhs {
            st.swap(k, kmax);
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                st.red(k, l);
            }
            k += 1;
        }
    }
    Ok(st.b)
}
