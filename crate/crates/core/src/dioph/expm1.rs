//! `log|e^x − 1|` without cancellation near zero.

use rug::Float;

use crate::arith::Interval;

/// Enclosure of `e^x − 1` for tiny `|x|`, via the series
/// `x·(1 + x/2 + x²/6 + …)` with a geometric tail bound.
fn expm1_series_factor(x: &Interval) -> Interval {
    let p = x.prec();
    let ax = x.abs();
    let one = Interval::one(p);
    let target = Float::with_val(p, 1) >> (p + 8);
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut k: i64 = 1;
    loop {
        term = term.mul(x).div(&Interval::from_i64(p, k + 1));
        sum = sum.add(&term);
        k += 1;
        if *term.abs().hi() < target || k > 4 * p as i64 {
            break;
        }
    }
    // Σ_{j>k} |x|^j/(j+1)! ≤ |last term|·|x|/(1−|x|).
    let tail = term.abs().mul(&ax).div(&one.sub(&ax));
    let t = tail.hi().clone();
    sum.add(&Interval::from_bounds(-t.clone(), t))
}

/// `log|e^x − 1|`; `x = 0` gives the `−∞` sentinel.
pub fn log_expm1_abs(x: &Interval) -> Interval {
    let p = x.prec();
    if x.is_exact_zero() {
        return Interval::neg_infinity(p);
    }
    let small = Float::with_val(p, 1) >> (p / 4);
    if *x.abs().hi() <= small && !x.contains_zero() {
        return x.abs().ln().add(&expm1_series_factor(x).abs().ln());
    }
    let v = x.expm1();
    if x.certainly_positive() {
        v.ln()
    } else if x.certainly_negative() {
        v.neg().ln()
    } else {
        // Straddles zero: only an upper bound is available.
        let hi = v.abs().ln();
        Interval::from_bounds(Interval::neg_infinity(p).lo().clone(), hi.hi().clone())
    }
}

/// `min(log|e^v − 1|, log|e^{−v} − 1|) = log(1 − e^{−|v|})`, the value that
/// matters when `l` and `−l` are both admissible.
pub fn log_expm1_sym(v: &Interval) -> Interval {
    log_expm1_abs(&v.abs().neg())
}
