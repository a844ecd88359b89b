//! C ABI over the torlab core.
//!
//! Conventions: every entry point returns a [`TorlabStatus`]; results go
//! through out-pointers. Tuples are opaque handles released with
//! [`torlab_tuple_free`]; strings handed out are released with
//! [`torlab_string_free`]. Panics never cross the boundary: they become
//! `TORLAB_STATUS_PANIC`. After a failure, [`torlab_last_error`] describes it
//! until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use torlab::dioph::{linear_form_min, regularity_probe, RealTuple, SearchOptions};
use torlab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    PrecisionExhausted = 3,
    BudgetExhausted = 4,
    HypothesisNotMet = 5,
    ScaleExceeded = 6,
    Panic = 7,
}

/// Opaque handle to a parsed real tuple.
pub struct TorlabTuple {
    inner: RealTuple,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TorlabBounds {
    /// `0` when no witness exists.
    pub theorem_t: u64,
    pub mu: u64,
    pub nu: u64,
    pub corollary_t: u64,
    /// `mn/(m+n) − 1` as a reduced fraction.
    pub conjecture_num: i64,
    pub conjecture_den: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TorlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PrecisionExhausted { .. } => TorlabStatus::PrecisionExhausted,
            Error::BudgetExhausted(_) => TorlabStatus::BudgetExhausted,
            Error::HypothesisNotMet(_) => TorlabStatus::HypothesisNotMet,
            Error::ScaleExceeded(_) => TorlabStatus::ScaleExceeded,
            _ => TorlabStatus::InvalidInput,
        };
        Failure(code, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TorlabStatus::NullPointer, format!("{what} is null"))
}

fn set_error(msg: Option<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.map(|m| CString::new(m.replace('\0', " ")).unwrap()));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TorlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            TorlabStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(Some(msg));
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(Some(format!("internal panic: {msg}")));
            TorlabStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TorlabStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn tuple_ref<'a>(t: *const TorlabTuple) -> Result<&'a RealTuple, Failure> {
    t.as_ref().map(|t| &t.inner).ok_or_else(|| null("tuple"))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TorlabStatus::InvalidInput, "interior NUL in output".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(TorlabStatus::InvalidInput, e.to_string()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn torlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn torlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Parses a tuple, one expression per line (`#` comments allowed).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torlab_tuple_parse(text: *const c_char, precision: u32, out: *mut *mut TorlabTuple) -> TorlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let inner = RealTuple::from_text("tuple", text, precision)?;
        *out = Box::into_raw(Box::new(TorlabTuple { inner }));
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle from [`torlab_tuple_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn torlab_tuple_free(t: *mut TorlabTuple) {
    if !t.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(t))));
    }
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torlab_tuple_len(t: *const TorlabTuple, out: *mut usize) -> TorlabStatus {
    guard(|| {
        let t = tuple_ref(t)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = t.len();
        Ok(())
    })
}

/// Minimal `|l·θ_I|` over `0 < |l| ≤ d`. Writes the minimiser to `l_out`
/// (`len` entries) and the midpoint of `log|l·θ_I|` to `log_value`.
///
/// # Safety
/// `subset` and `l_out` must point to `len` elements; `log_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn torlab_linear_form_min(
    t: *const TorlabTuple,
    subset: *const usize,
    len: usize,
    d: u64,
    budget: u64,
    l_out: *mut i64,
    log_value: *mut f64,
) -> TorlabStatus {
    guard(|| {
        let t = tuple_ref(t)?;
        if subset.is_null() || l_out.is_null() || log_value.is_null() {
            return Err(null("argument"));
        }
        let idx = std::slice::from_raw_parts(subset, len);
        let opts = SearchOptions { budget, precision: t.precision_bits };
        let rec = linear_form_min(t, idx, d, &opts)?;
        std::slice::from_raw_parts_mut(l_out, len).copy_from_slice(&rec.l);
        *log_value = rec.log_value.mid_f64();
        Ok(())
    })
}

/// Integer-relation search; the outcome is written as JSON.
///
/// # Safety
/// `t` must be a live handle and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torlab_relation_json(
    t: *const TorlabTuple,
    height: u64,
    include_pi: bool,
    budget: u64,
    json_out: *mut *mut c_char,
) -> TorlabStatus {
    guard(|| {
        let t = tuple_ref(t)?;
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        let opts = SearchOptions { budget, precision: t.precision_bits };
        let out = regularity_probe(t, include_pi, height, &opts)?;
        give_string(json(&out)?, json_out)
    })
}

/// Parameter schedule for `(D, k, μ, ν)` as JSON.
///
/// # Safety
/// `json_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torlab_schedule_json(d: u64, k: u32, mu: u32, nu: u32, json_out: *mut *mut c_char) -> TorlabStatus {
    guard(|| {
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        let s = torlab::auxpoly::schedule::make_schedule(d, k, mu, nu)?;
        give_string(json(&s)?, json_out)
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torlab_bounds(m: u64, n: u64, literal_kappa: bool, out: *mut TorlabBounds) -> TorlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = torlab::bounds::bound_report(m, n, literal_kappa)?;
        let conv = |x: String| -> Result<i64, Failure> {
            x.parse().map_err(|_| Failure(TorlabStatus::ScaleExceeded, "bound does not fit in i64".into()))
        };
        *out = TorlabBounds {
            theorem_t: r.theorem_t,
            mu: r.witness.map_or(0, |w| w.mu),
            nu: r.witness.map_or(0, |w| w.nu),
            corollary_t: r.corollary_t,
            conjecture_num: conv(r.conjecture_bound.numer().to_string())?,
            conjecture_den: conv(r.conjecture_bound.denom().to_string())?,
        };
        Ok(())
    })
}

/// Smith normal form diagonal of a row-major `rows × cols` matrix. Writes
/// `min(rows, cols)` invariant factors to `diag_out` and the rank to
/// `rank_out`.
///
/// # Safety
/// `a` must point to `rows·cols` elements, `diag_out` to `min(rows, cols)`.
#[no_mangle]
pub unsafe extern "C" fn torlab_snf_diagonal(a: *const i64, rows: usize, cols: usize, diag_out: *mut i64, rank_out: *mut usize) -> TorlabStatus {
    guard(|| {
        if a.is_null() || diag_out.is_null() || rank_out.is_null() {
            return Err(null("argument"));
        }
        let data = std::slice::from_raw_parts(a, rows * cols);
        let m: Vec<Vec<i64>> = data.chunks(cols.max(1)).take(rows).map(|r| r.to_vec()).collect();
        let mat = torlab::arith::IntMatrix::from_i64_rows(&m)?;
        let snf = torlab::lattice::smith_normal_form(&mat);
        let out = std::slice::from_raw_parts_mut(diag_out, rows.min(cols));
        for (o, d) in out.iter_mut().zip(snf.diagonal()) {
            *o = d.to_string().parse().map_err(|_| Failure(TorlabStatus::ScaleExceeded, "invariant factor does not fit in i64".into()))?;
        }
        *rank_out = snf.rank;
        Ok(())
    })
}

/// Runs an experiment described by a JSON `ExperimentConfig` and returns the
/// sorted JSON-lines records. `exit_code` receives the CLI exit code; records
/// completed before a failure are still returned.
///
/// # Safety
/// `config_json` must be a valid string; `records_out` and `exit_code` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn torlab_run_json(config_json: *const c_char, records_out: *mut *mut c_char, exit_code: *mut i32) -> TorlabStatus {
    guard(|| {
        if records_out.is_null() || exit_code.is_null() {
            return Err(null("argument"));
        }
        let text = read_str(config_json, "config_json")?;
        let cfg: torlab::lab::ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Failure(TorlabStatus::InvalidInput, format!("bad config: {e}")))?;
        let outcome = torlab::lab::execute(&cfg);
        let mut buf = Vec::new();
        torlab::lab::report::write_report(&outcome.records, outcome.op, torlab::lab::Format::Jsonl, &mut buf)?;
        *exit_code = outcome.error.as_ref().map_or(0, torlab::lab::exit_code);
        give_string(String::from_utf8(buf).expect("JSON is UTF-8"), records_out)?;
        match outcome.error {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn torlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
