//! Exact fields used for evaluation-matrix ranks: ℚ, ℚ(√d) and ℚ(ζ_N).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Minimal exact field interface for Gaussian elimination.
pub trait FieldElem: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is nonzero.
    fn inv(&self) -> Self;
}

impl FieldElem for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Echelon-reduce `m` in place and return its rank.
pub fn rank<F: FieldElem>(m: &mut [Vec<F>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv_inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = m[r][j].mul(&piv_inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        r += 1;
    }
    r
}

/// A nonzero `x` with `m·x = 0`, if the columns of `m` are dependent.
pub fn kernel_vector<F: FieldElem>(m: &[Vec<F>], sample: &F) -> Option<Vec<F>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let rows = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv_inv = a[r][c].inv();
        for j in c..cols {
            a[r][j] = a[r][j].mul(&piv_inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&a[r][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let zero = sample.zero_like();
    let mut x = vec![zero.clone(); cols];
    x[free] = sample.one_like();
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = zero.sub(&a[row][free]);
    }
    Some(x)
}

/// Element `a + b√d` of a real or imaginary quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub d: i64,
    pub a: BigRational,
    pub b: BigRational,
}

impl Quadratic {
    pub fn new(d: i64, a: BigRational, b: BigRational) -> Self {
        Quadratic { d, a, b }
    }

    pub fn rational(d: i64, a: BigRational) -> Self {
        Quadratic { d, a, b: BigRational::zero() }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }
}

impl FieldElem for Quadratic {
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn zero_like(&self) -> Self {
        Quadratic::rational(self.d, BigRational::zero())
    }
    fn one_like(&self) -> Self {
        Quadratic::rational(self.d, BigRational::one())
    }
    fn add(&self, o: &Self) -> Self {
        Quadratic::new(self.d, &self.a + &o.a, &self.b + &o.b)
    }
    fn sub(&self, o: &Self) -> Self {
        Quadratic::new(self.d, &self.a - &o.a, &self.b - &o.b)
    }
    fn mul(&self, o: &Self) -> Self {
        let d = BigRational::from_integer(BigInt::from(self.d));
        Quadratic::new(
            self.d,
            &self.a * &o.a + d * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
    fn inv(&self) -> Self {
        let n = self.norm();
        Quadratic::new(self.d, &self.a / &n, -(&self.b / &n))
    }
}

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| Zero::is_zero(c)) {
        p.pop();
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if Zero::is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            r[k + i] -= t;
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// N-th cyclotomic polynomial with integer coefficients.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut p: Poly = vec![BigRational::zero(); n as usize + 1];
    p[0] = -BigRational::one();
    p[n as usize] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d: Poly =
                cyclotomic_poly(d).into_iter().map(BigRational::from_integer).collect();
            p = poly_divrem(&p, &phi_d).0;
        }
    }
    p.into_iter().map(|c| c.to_integer()).collect()
}

#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    pub n: u64,
    modulus: Poly,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Result<Arc<Self>> {
        if n == 0 || n > 720 {
            return Err(Error::ScaleExceeded(format!("cyclotomic order {n} outside 1..=720")));
        }
        let modulus = cyclotomic_poly(n).into_iter().map(BigRational::from_integer).collect();
        Ok(Arc::new(CyclotomicField { n, modulus }))
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// ζ_N^e for any integer exponent.
    pub fn zeta_pow(self: &Arc<Self>, e: i64) -> Cyclotomic {
        let k = e.rem_euclid(self.n as i64) as usize;
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Cyclotomic::from_poly(self, c)
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> Cyclotomic {
        Cyclotomic::from_poly(self, vec![q])
    }
}

/// Element of ℚ(ζ_N), stored as a reduced polynomial in ζ_N.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Poly,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        self.field.n == o.field.n && self.coeffs == o.coeffs
    }
}

impl Cyclotomic {
    fn from_poly(field: &Arc<CyclotomicField>, p: Poly) -> Self {
        let (_, mut r) = poly_divrem(&p, &field.modulus);
        trim(&mut r);
        Cyclotomic { field: field.clone(), coeffs: r }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Real and imaginary parts as `f64` (diagnostics only).
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let n = self.field.n as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let cf = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += cf * ang.cos();
            im += cf * ang.sin();
        }
        (re, im)
    }
}

impl FieldElem for Cyclotomic {
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn zero_like(&self) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: Vec::new() }
    }
    fn one_like(&self) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: vec![BigRational::one()] }
    }
    fn add(&self, o: &Self) -> Self {
        let neg: Poly = o.coeffs.iter().map(|c| -c).collect();
        Cyclotomic { field: self.field.clone(), coeffs: poly_sub(&self.coeffs, &neg) }
    }
    fn sub(&self, o: &Self) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: poly_sub(&self.coeffs, &o.coeffs) }
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclotomic::from_poly(&self.field, poly_mul(&self.coeffs, &o.coeffs))
    }
    fn inv(&self) -> Self {
        // Extended Euclid: s·self + t·Φ = g with g constant.
        let (mut r0, mut r1) = (self.field.modulus.clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let g = r1[0].clone();
        let s: Poly = s1.iter().map(|c| c / &g).collect();
        Cyclotomic::from_poly(&self.field, s)
    }
}

/// Is `d` a nonzero squarefree integer other than 1?
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let a = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= a {
        if a % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polys() {
        let to_i: fn(Vec<BigInt>) -> Vec<i64> =
            |v| v.into_iter().map(|c| num_traits::ToPrimitive::to_i64(&c).unwrap()).collect();
        assert_eq!(to_i(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(to_i(cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_inverse_and_relations() {
        let f = CyclotomicField::new(5).unwrap();
        let z = f.zeta_pow(1);
        let sum = (0..5).fold(z.zero_like(), |acc, k| acc.add(&f.zeta_pow(k)));
        assert!(sum.is_zero());
        let x = z.add(&f.from_rational(q(3, 2)));
        assert_eq!(x.mul(&x.inv()), x.one_like());
        assert_eq!(f.zeta_pow(7), f.zeta_pow(2));
    }

    #[test]
    fn quadratic_inverse() {
        let x = Quadratic::new(5, q(1, 2), q(1, 2));
        assert_eq!(x.mul(&x.inv()), x.one_like());
    }

    #[test]
    fn rational_rank_and_kernel() {
        let mut m = vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]];
        let orig = m.clone();
        assert_eq!(rank(&mut m), 1);
        let x = kernel_vector(&orig, &q(0, 1)).unwrap();
        for row in &orig {
            let s = row.iter().zip(&x).fold(q(0, 1), |a, (u, v)| a + u * v);
            assert!(Zero::is_zero(&s));
        }
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(5));
        assert!(is_squarefree(-1));
        assert!(!is_squarefree(12));
    }
}
