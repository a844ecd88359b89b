//! Sparse integer polynomials and the auxiliary polynomial record.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::MonomialSet;
use crate::error::{Error, Result};

/// `Σ c_e x^e` with nonzero coefficients keyed by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePoly {
    pub fn new(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<Self> {
        let mut p = SparsePoly::new(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u64).sum()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_partial_degree(&self) -> u64 {
        self.terms.keys().flat_map(|e| e.iter().map(|&x| x as u64)).max().unwrap_or(0)
    }

    /// Max-norm of the coefficient vector.
    pub fn norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// A binomial `x^a − x^b` with unit coefficients defines the character `a − b`.
    pub fn as_binomial_character(&self) -> Option<Vec<i64>> {
        if self.terms.len() != 2 {
            return None;
        }
        let mut it = self.terms.iter();
        let (a, ca) = it.next()?;
        let (b, cb) = it.next()?;
        let one = BigInt::from(1);
        if !(ca.abs() == one && cb.abs() == one && (ca + cb).is_zero()) {
            return None;
        }
        Some(a.iter().zip(b).map(|(x, y)| *x as i64 - *y as i64).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr(Vec<u32>, serde_json::Value);

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            nvars: usize,
            terms: Vec<(&'a Vec<u32>, serde_json::Value)>,
        }
        let terms = self.terms.iter().map(|(e, c)| (e, crate::arith::intmat::bigint_json(c))).collect();
        Repr { nvars: self.nvars, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            nvars: usize,
            terms: Vec<TermRepr>,
        }
        let r = Repr::deserialize(d)?;
        let mut terms = Vec::with_capacity(r.terms.len());
        for TermRepr(e, c) in r.terms {
            let c = crate::arith::intmat::bigint_from_json(&c).ok_or_else(|| serde::de::Error::custom("bad coefficient"))?;
            terms.push((e, c));
        }
        SparsePoly::from_terms(r.nvars, terms).map_err(serde::de::Error::custom)
    }
}

/// `f = Σ_{d ∈ A_L} h_d X^d` with its construction metadata.
#[derive(Clone, Debug, Serialize)]
pub struct AuxPolynomial {
    #[serde(skip)]
    pub monomials: MonomialSet,
    pub multidegrees: Vec<Vec<u32>>,
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint_vec")]
    pub coefficients: Vec<BigInt>,
    #[serde(rename = "L")]
    pub l: u32,
    pub delta: f64,
    /// `log max|h_d|`.
    pub log_height: f64,
    /// Upper bound on `log sup|φ|` over the polydisc (grid plus slack); `None` is `−∞`.
    pub achieved_log_sup: Option<f64>,
    pub best_effort: bool,
}

impl AuxPolynomial {
    pub fn new(monomials: MonomialSet, coefficients: Vec<BigInt>, delta: f64) -> Result<Self> {
        if coefficients.len() != monomials.len() {
            return Err(Error::DimensionMismatch { expected: monomials.len(), found: coefficients.len() });
        }
        if coefficients.iter().all(|c| c.is_zero()) {
            return Err(Error::invalid("auxiliary polynomial must be nonzero"));
        }
        let log_height = log_abs_max(&coefficients);
        Ok(AuxPolynomial {
            multidegrees: monomials.multidegrees.clone(),
            l: monomials.l,
            monomials,
            coefficients,
            delta,
            log_height,
            achieved_log_sup: None,
            best_effort: false,
        })
    }

    pub fn degree(&self) -> u64 {
        self.to_sparse().degree()
    }

    pub fn to_sparse(&self) -> SparsePoly {
        let terms = self.multidegrees.iter().cloned().zip(self.coefficients.iter().cloned());
        SparsePoly::from_terms(self.monomials.nvars(), terms).expect("consistent monomial set")
    }
}

pub(crate) fn log_abs_max(c: &[BigInt]) -> f64 {
    let m = c.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    if m.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = m.bits();
    if bits < 1000 {
        num_traits::ToPrimitive::to_f64(&m).unwrap().ln()
    } else {
        let shifted: BigInt = &m >> (bits - 64);
        num_traits::ToPrimitive::to_f64(&shifted).unwrap().ln() + (bits - 64) as f64 * std::f64::consts::LN_2
    }
}
