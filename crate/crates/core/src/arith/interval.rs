//! Outward-rounded interval arithmetic on MPFR floats.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper endpoint
//! toward +∞, so the true value of any expression built from these operations
//! lies inside the returned interval.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rug::float::{Constant, Round, Special};
use rug::{Float, Integer as RugInteger, Rational as RugRational};
use serde::{Serialize, Serializer};

/// Closed interval `[lo, hi]` with MPFR endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = std::cmp::Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = std::cmp::Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

fn fmin(a: &Float, b: &Float) -> Float {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn fmax(a: &Float, b: &Float) -> Float {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub(crate) fn bigint_to_rug(v: &BigInt) -> RugInteger {
    RugInteger::from_str_radix(&v.to_str_radix(16), 16).expect("hex round trip")
}

pub(crate) fn rug_to_bigint(v: &RugInteger) -> BigInt {
    BigInt::parse_bytes(v.to_string_radix(16).as_bytes(), 16).expect("hex round trip")
}

pub(crate) fn rational_to_rug(v: &BigRational) -> RugRational {
    RugRational::from((bigint_to_rug(v.numer()), bigint_to_rug(v.denom())))
}

/// Exact rational value of a finite float.
pub fn float_to_rational(f: &Float) -> Option<BigRational> {
    let r = f.to_rational()?;
    let (n, d) = r.into_numer_denom();
    Some(BigRational::new(rug_to_bigint(&n), rug_to_bigint(&d)))
}

impl Interval {
    pub fn from_bounds(lo: Float, hi: Float) -> Self {
        debug_assert!(lo.is_nan() || hi.is_nan() || lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        Interval { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn from_i64(prec: u32, x: i64) -> Self {
        Interval { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn from_bigint(prec: u32, x: &BigInt) -> Self {
        let r = bigint_to_rug(x);
        Interval { lo: down(prec, &r), hi: up(prec, &r) }
    }

    pub fn from_rational(prec: u32, x: &BigRational) -> Self {
        let r = rational_to_rug(x);
        Interval { lo: down(prec, &r), hi: up(prec, &r) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(prec, 0)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(prec, 1)
    }

    /// The sentinel enclosure `[−∞, −∞]`, used for `log 0`.
    pub fn neg_infinity(prec: u32) -> Self {
        let f = Float::with_val(prec, Special::NegInfinity);
        Interval { lo: f.clone(), hi: f }
    }

    pub fn entire(prec: u32) -> Self {
        Interval {
            lo: Float::with_val(prec, Special::NegInfinity),
            hi: Float::with_val(prec, Special::Infinity),
        }
    }

    pub fn pi(prec: u32) -> Self {
        Interval { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn e(prec: u32) -> Self {
        Self::one(prec).exp()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            if self.lo == self.hi {
                return self.lo.to_f64();
            }
            return f64::NAN;
        }
        let m = Float::with_val(self.prec() + 1, &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }

    /// Midpoint as a float at the interval's precision (round to nearest).
    pub fn mid(&self) -> Float {
        let p = self.prec();
        let s = Float::with_val(p + 2, &self.lo + &self.hi);
        Float::with_val(p, s / 2u32)
    }

    /// Upper bound on the radius `max(hi − mid, mid − lo)`.
    pub fn radius_up(&self, mid: &Float) -> Float {
        let p = self.prec();
        let a = up(p, &self.hi - mid);
        let b = up(p, mid - &self.lo);
        fmax(&a, &b)
    }

    pub fn is_nan(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_neg_infinity(&self) -> bool {
        self.hi.is_infinite() && self.hi.is_sign_negative()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_nan() && self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi >= other.hi
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        !(self.certainly_lt(other) || self.certainly_gt(other))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: fmin(&self.lo, &other.lo), hi: fmax(&self.hi, &other.hi) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let p = self.prec();
            let m = fmax(&Float::with_val(p, -&self.lo), &self.hi);
            Interval { lo: Float::with_val(p, 0), hi: m }
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let cands_lo = [
            down(p, &self.lo * &o.lo),
            down(p, &self.lo * &o.hi),
            down(p, &self.hi * &o.lo),
            down(p, &self.hi * &o.hi),
        ];
        let cands_hi = [
            up(p, &self.lo * &o.lo),
            up(p, &self.lo * &o.hi),
            up(p, &self.hi * &o.lo),
            up(p, &self.hi * &o.hi),
        ];
        if cands_lo.iter().chain(cands_hi.iter()).any(|f| f.is_nan()) {
            // 0 · ∞
            if self.is_exact_zero() || o.is_exact_zero() {
                return Interval::zero(p);
            }
            return Interval::entire(p);
        }
        let lo = cands_lo.iter().skip(1).fold(cands_lo[0].clone(), |a, b| fmin(&a, b));
        let hi = cands_hi.iter().skip(1).fold(cands_hi[0].clone(), |a, b| fmax(&a, b));
        Interval { lo, hi }
    }

    pub fn mul_i64(&self, k: i64) -> Interval {
        self.mul(&Interval::from_i64(self.prec(), k))
    }

    pub fn div(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        if o.contains_zero() {
            return Interval::entire(p);
        }
        let inv = Interval { lo: down(p, 1 / &o.hi.clone()), hi: up(p, 1 / &o.lo.clone()) };
        // 1/x is decreasing on each sign component; the endpoints above are
        // correct because o does not contain zero.
        let inv = if inv.lo <= inv.hi { inv } else { Interval { lo: inv.hi, hi: inv.lo } };
        self.mul_exact_recip(o, inv)
    }

    fn mul_exact_recip(&self, o: &Interval, inv: Interval) -> Interval {
        // Dividing directly gives tighter results than multiplying by the
        // reciprocal enclosure; compute both and intersect.
        let p = self.prec().max(o.prec());
        let q = [
            (down(p, &self.lo / &o.lo), up(p, &self.lo / &o.lo)),
            (down(p, &self.lo / &o.hi), up(p, &self.lo / &o.hi)),
            (down(p, &self.hi / &o.lo), up(p, &self.hi / &o.lo)),
            (down(p, &self.hi / &o.hi), up(p, &self.hi / &o.hi)),
        ];
        if q.iter().any(|(a, b)| a.is_nan() || b.is_nan()) {
            return self.mul(&inv);
        }
        let lo = q.iter().skip(1).fold(q[0].0.clone(), |a, b| fmin(&a, &b.0));
        let hi = q.iter().skip(1).fold(q[0].1.clone(), |a, b| fmax(&a, &b.1));
        Interval { lo, hi }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        let p = a.prec();
        Interval { lo: down(p, a.lo.square_ref()), hi: up(p, a.hi.square_ref()) }
    }

    pub fn powi(&self, n: i64) -> Interval {
        let p = self.prec();
        if n == 0 {
            return Interval::one(p);
        }
        let mut base = if n < 0 { Interval::one(p).div(self) } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Interval::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Interval {
        let p = self.prec();
        let lo = if self.lo < 0 { Float::with_val(p, 0) } else { down(p, self.lo.sqrt_ref()) };
        Interval { lo, hi: up(p, self.hi.sqrt_ref()) }
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval { lo: down(p, self.lo.exp_ref()), hi: up(p, self.hi.exp_ref()) }
    }

    pub fn expm1(&self) -> Interval {
        let p = self.prec();
        Interval { lo: down(p, self.lo.exp_m1_ref()), hi: up(p, self.hi.exp_m1_ref()) }
    }

    /// Natural logarithm. Nonpositive parts of the argument map to −∞; an
    /// argument that is certainly negative yields NaN endpoints.
    pub fn ln(&self) -> Interval {
        let p = self.prec();
        if self.hi < 0 {
            return Interval { lo: Float::with_val(p, Special::Nan), hi: Float::with_val(p, Special::Nan) };
        }
        let lo = if self.lo <= 0 { Float::with_val(p, Special::NegInfinity) } else { down(p, self.lo.ln_ref()) };
        let hi = if self.hi.is_zero() { Float::with_val(p, Special::NegInfinity) } else { up(p, self.hi.ln_ref()) };
        Interval { lo, hi }
    }

    pub fn cos(&self) -> Interval {
        self.trig(true)
    }

    pub fn sin(&self) -> Interval {
        self.trig(false)
    }

    // Midpoint-radius: f(m ± ρ) ⊆ f(m) ± ρ for the 1-Lipschitz sin and cos.
    fn trig(&self, cosine: bool) -> Interval {
        let p = self.prec();
        let unit = Interval { lo: Float::with_val(p, -1), hi: Float::with_val(p, 1) };
        if !self.is_finite() {
            return unit;
        }
        let m = self.mid();
        let rad = self.radius_up(&m);
        let (c_lo, c_hi) = if cosine {
            (down(p, m.cos_ref()), up(p, m.cos_ref()))
        } else {
            (down(p, m.sin_ref()), up(p, m.sin_ref()))
        };
        let lo = fmax(&down(p, &c_lo - &rad), &unit.lo);
        let hi = fmin(&up(p, &c_hi + &rad), &unit.hi);
        Interval { lo, hi }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: fmax(&self.lo, &o.lo), hi: fmax(&self.hi, &o.hi) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: fmin(&self.lo, &o.lo), hi: fmin(&self.hi, &o.hi) }
    }

    /// Re-round to another precision, keeping the enclosure.
    pub fn with_prec(&self, prec: u32) -> Interval {
        Interval { lo: down(prec, &self.lo), hi: up(prec, &self.hi) }
    }

    /// Decimal rendering with `digits` significant digits, rounded outward.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (fmt_float(&self.lo, digits, Round::Down), fmt_float(&self.hi, digits, Round::Up))
    }
}

fn fmt_float(f: &Float, digits: usize, round: Round) -> String {
    if f.is_nan() {
        return "nan".into();
    }
    if f.is_infinite() {
        return if f.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if f.is_zero() {
        return "0".into();
    }
    f.to_string_radix_round(10, Some(digits), round)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal(20);
        write!(f, "[{lo}, {hi}]")
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (lo, hi) = self.to_decimal(24);
        let mut st = s.serialize_struct("Interval", 2)?;
        st.serialize_field("lo", &lo)?;
        st.serialize_field("hi", &hi)?;
        st.end()
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        ComplexInterval { re, im: Interval::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexInterval { re: Interval::zero(prec), im: Interval::zero(prec) }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexInterval { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexInterval { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, k: &Interval) -> Self {
        ComplexInterval { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        ComplexInterval { re: m.mul(&self.im.cos()), im: m.mul(&self.im.sin()) }
    }

    pub fn abs(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr()).sqrt()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}
