//! Smith normal form with transforms, minimal-|a| pivoting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::IntMatrix;

/// `U·A·V = S` with `U`, `V` unimodular; `v_inv = V⁻¹` is kept so the row
/// lattice of `A` can be read off as `S·V⁻¹`.
#[derive(Clone, Debug, Serialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The leading `min(rows, cols)` diagonal entries.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Invariant factors strictly greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| *d > BigInt::from(1)).collect()
    }

    /// Basis of the saturation of the row lattice: first `rank` rows of `V⁻¹`.
    pub fn saturated_basis(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rank, self.v_inv.cols(), |i, j| self.v_inv[(i, j)].clone())
    }
}

struct Work {
    s: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += k·row[src]
    fn row_op(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.s.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
    }

    /// col[dst] += k·col[src]; V⁻¹ receives the inverse row operation.
    fn col_op(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.s.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (r, c) = (a.rows(), a.cols());
    let mut w = Work {
        s: a.clone(),
        u: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut rank = 0;
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &w.s[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < w.s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if !w.s[(i, t)].is_zero() {
                    let q = &w.s[(i, t)] / &w.s[(t, t)];
                    w.row_op(i, t, &-q);
                    dirty |= !w.s[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !w.s[(t, j)].is_zero() {
                    let q = &w.s[(t, j)] / &w.s[(t, t)];
                    w.col_op(j, t, &-q);
                    dirty |= !w.s[(t, j)].is_zero();
                }
            }
            if dirty {
                let mut m: Option<(bool, usize)> = None;
                let mut mv = BigInt::zero();
                for i in t + 1..r {
                    let x = w.s[(i, t)].abs();
                    if !x.is_zero() && (m.is_none() || x < mv) {
                        mv = x;
                        m = Some((true, i));
                    }
                }
                for j in t + 1..c {
                    let x = w.s[(t, j)].abs();
                    if !x.is_zero() && (m.is_none() || x < mv) {
                        mv = x;
                        m = Some((false, j));
                    }
                }
                match m {
                    Some((true, i)) => w.swap_rows(t, i),
                    Some((false, j)) => w.swap_cols(t, j),
                    None => {}
                }
                continue;
            }
            let piv = w.s[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.s[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => w.row_op(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.s[(t, t)].is_negative() {
            w.s.negate_row(t);
            w.u.negate_row(t);
        }
        rank += 1;
    }
    SmithForm { u: w.u, s: w.s, v: w.v, v_inv: w.v_inv, rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).unwrap().mul(&f.v).unwrap(), f.s);
        assert!(f.s.is_diagonal());
        assert_eq!(f.v.mul(&f.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        assert_eq!(f.u.det().unwrap().abs(), BigInt::from(1));
        let d = f.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        f
    }

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn two_by_two() {
        let f = check(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_and_zero() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
        let z = check(&IntMatrix::zeros(2, 2));
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn needs_divisibility_fix() {
        let f = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_saturation() {
        let f = check(&m(&[vec![2, -2]]));
        assert_eq!(f.torsion(), vec![BigInt::from(2)]);
        let sat = f.saturated_basis();
        assert_eq!(sat.row_gcd(0), BigInt::from(1));
        assert_eq!(&sat[(0, 0)] + &sat[(0, 1)], BigInt::zero());
        check(&m(&[vec![3, 5, 7], vec![0, 0, 0], vec![6, 10, 15], vec![1, 1, 1]]));
    }
}
