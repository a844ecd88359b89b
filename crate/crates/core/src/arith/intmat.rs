//! Dense integer matrices over `BigInt`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row.iter().cloned());
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Self::from_rows(&big)
    }

    /// Builds an `r × c` matrix from a row-major slice; panics on length mismatch.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-wise `i64` view; `None` if an entry overflows.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: o.rows });
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `o`.
    pub fn vstack(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.rows == 0 {
            return Ok(o.clone());
        }
        if o.rows == 0 {
            return Ok(self.clone());
        }
        if self.cols != o.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: o.cols });
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + o.rows, cols: self.cols, data })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k · col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let (r, c) = (a.rows, a.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..c {
            if rank == r {
                break;
            }
            let Some(p) = (rank..r).find(|&i| !a[(i, col)].is_zero()) else { continue };
            a.swap_rows(rank, p);
            for i in rank + 1..r {
                for j in col + 1..c {
                    let v = &a[(i, j)] * &a[(rank, col)] - &a[(i, col)] * &a[(rank, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, col)] = BigInt::zero();
            }
            prev = a[(rank, col)].clone();
            rank += 1;
        }
        rank
    }

    /// Content (gcd of all entries) of row `i`.
    pub fn row_gcd(&self, i: usize) -> BigInt {
        self.row(i).iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| {
            self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>()
        })).finish()
    }
}

/// JSON integer if it fits in `i64`, decimal string otherwise.
pub(crate) fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    bigint_json(v).serialize(s)
}

pub fn ser_bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(bigint_json).collect::<Vec<_>>().serialize(s)
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> =
            (0..self.rows).map(|i| self.row(i).iter().map(bigint_json).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let big: Option<Vec<Vec<BigInt>>> =
            rows.iter().map(|r| r.iter().map(bigint_from_json).collect()).collect();
        let big = big.ok_or_else(|| serde::de::Error::custom("non-integer matrix entry"))?;
        IntMatrix::from_rows(&big).map_err(serde::de::Error::custom)
    }
}
