//! C interface to `genhilbert`.
//!
//! Sequences are opaque `GhSequence` handles created by one of the
//! `gh_sequence_new_*` functions and released with `gh_sequence_free`.
//! Every fallible call returns a `GhStatus`; on failure the message is
//! available from `gh_last_error_message` on the same thread. Strings
//! returned through `char **` parameters are owned by the caller and must be
//! released with `gh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use genhilbert::classify::classify;
use genhilbert::muckenhoupt::{btilde, muckenhoupt_product};
use genhilbert::operators::{apply_cesaro, apply_cesaro_adjoint, apply_h, hilbert_entry};
use genhilbert::sequences::parse_sequence;
use genhilbert::spectral::{log_gamma, lower_bound_sigma, sandwich_report, truncation_eigenvalues};
use genhilbert::{BoundInterval, Error, NodeWeightSequence, Provenance, Verdict};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    ScanExhausted = 4,
    NoConvergence = 5,
    Numerical = 6,
    Parse = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhFamily {
    Standard = 0,
    Power = 1,
    WeightedStandard = 2,
    OddLinear = 3,
    SquaredOdd = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhVerdict {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhProvenance {
    Exact = 0,
    TruncatedWithTail = 1,
    ScanOnly = 2,
}

/// `[lower, upper]`; `upper` may be `+inf`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhInterval {
    pub lower: f64,
    pub upper: f64,
    pub provenance: GhProvenance,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhVerdicts {
    pub well_defined: GhVerdict,
    pub bounded: GhVerdict,
    pub compact: GhVerdict,
    pub injective: GhVerdict,
    pub range_closed: GhVerdict,
}

/// Opaque sequence handle.
pub struct GhSequence {
    inner: NodeWeightSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> GhStatus {
    match e {
        Error::PrefixTooShort { .. } => GhStatus::OutOfRange,
        Error::ScanExhausted { .. } => GhStatus::ScanExhausted,
        Error::NoConvergence { .. } => GhStatus::NoConvergence,
        Error::SandwichViolation { .. } | Error::NotSymmetric { .. } => GhStatus::Numerical,
        Error::Parse { .. } => GhStatus::Parse,
        _ => GhStatus::InvalidArgument,
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (GhStatus, String)>) -> GhStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            GhStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            GhStatus::Panic
        }
    }
}

fn fail(e: Error) -> (GhStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GhStatus, String) {
    (GhStatus::NullPointer, format!("{what} is null"))
}

unsafe fn sequence<'a>(
    handle: *const GhSequence,
) -> Result<&'a NodeWeightSequence, (GhStatus, String)> {
    handle
        .as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| null("sequence handle"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GhStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn input_slice<'a>(
    p: *const f64,
    len: usize,
    what: &str,
) -> Result<&'a [f64], (GhStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output_slice<'a>(
    p: *mut f64,
    len: usize,
    what: &str,
) -> Result<&'a mut [f64], (GhStatus, String)> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

fn store_handle(out: &mut *mut GhSequence, inner: NodeWeightSequence) {
    *out = Box::into_raw(Box::new(GhSequence { inner }));
}

fn store_string(out: &mut *mut c_char, text: String) -> Result<(), (GhStatus, String)> {
    let c =
        CString::new(text).map_err(|_| (GhStatus::Numerical, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn interval(b: BoundInterval) -> GhInterval {
    GhInterval {
        lower: b.lower,
        upper: b.upper,
        provenance: match b.provenance {
            Provenance::Exact => GhProvenance::Exact,
            Provenance::TruncatedWithTail => GhProvenance::TruncatedWithTail,
            Provenance::ScanOnly => GhProvenance::ScanOnly,
        },
    }
}

fn verdict(v: Verdict) -> GhVerdict {
    match v {
        Verdict::Yes => GhVerdict::Yes,
        Verdict::No => GhVerdict::No,
        Verdict::Unknown => GhVerdict::Unknown,
    }
}

/// Version string of the library, statically allocated.
#[no_mangle]
pub extern "C" fn gh_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn gh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Built-in family. `alpha` and `shift` are read only for `GH_FAMILY_POWER`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gh_sequence_new_family(
    family: GhFamily,
    alpha: f64,
    shift: f64,
    out: *mut *mut GhSequence,
) -> GhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let seq = match family {
            GhFamily::Standard => NodeWeightSequence::standard(),
            GhFamily::Power => NodeWeightSequence::power_alpha(alpha, shift).map_err(fail)?,
            GhFamily::WeightedStandard => NodeWeightSequence::weighted_standard(),
            GhFamily::OddLinear => NodeWeightSequence::odd_linear(),
            GhFamily::SquaredOdd => NodeWeightSequence::squared_odd(),
        };
        store_handle(out, seq);
        Ok(())
    })
}

/// Finite sequence of `len` pairs `(nodes[i], weights[i])`.
///
/// # Safety
/// `nodes` and `weights` must point to `len` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gh_sequence_new_pairs(
    nodes: *const f64,
    weights: *const f64,
    len: usize,
    out: *mut *mut GhSequence,
) -> GhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let x = input_slice(nodes, len, "nodes")?;
        let d = input_slice(weights, len, "weights")?;
        let seq = NodeWeightSequence::custom(x.iter().copied().zip(d.iter().copied()).collect())
            .map_err(fail)?;
        store_handle(out, seq);
        Ok(())
    })
}

/// Parses `x d` lines or a JSON family selector.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_sequence_parse(
    text: *const c_char,
    out: *mut *mut GhSequence,
) -> GhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (GhStatus::Parse, "text is not UTF-8".to_string()))?;
        store_handle(out, parse_sequence(text).map_err(fail)?);
        Ok(())
    })
}

/// The reciprocal view `(1/x, d/x)`, which generates the same matrix.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_sequence_reciprocal(
    seq: *const GhSequence,
    out: *mut *mut GhSequence,
) -> GhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        store_handle(out, sequence(seq)?.reciprocal_transform());
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `seq` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gh_sequence_free(seq: *mut GhSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_classify(
    seq: *const GhSequence,
    scan: usize,
    out: *mut GhVerdicts,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out_ref(out, "out")?;
        if scan == 0 {
            return Err((GhStatus::InvalidArgument, "scan must be >= 1".into()));
        }
        let r = classify(seq, scan);
        *out = GhVerdicts {
            well_defined: verdict(r.well_defined),
            bounded: verdict(r.bounded),
            compact: verdict(r.compact),
            injective: verdict(r.injective),
            range_closed: verdict(r.range_closed),
        };
        Ok(())
    })
}

/// Full classification report with certificates, as JSON.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_classify_json(
    seq: *const GhSequence,
    scan: usize,
    out: *mut *mut c_char,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out_ref(out, "out")?;
        if scan == 0 {
            return Err((GhStatus::InvalidArgument, "scan must be >= 1".into()));
        }
        let json = serde_json::to_string(&classify(seq, scan)).expect("report serializes");
        store_string(out, json)
    })
}

/// `d_i d_j / (x_i + x_j)` for 1-based `i`, `j`.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_entry(
    seq: *const GhSequence,
    i: usize,
    j: usize,
    out: *mut f64,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        *out_ref(out, "out")? =
            hilbert_entry(seq, i, j).map_err(|e| (GhStatus::OutOfRange, e.to_string()))?;
        Ok(())
    })
}

unsafe fn apply_with(
    seq: *const GhSequence,
    f: *const f64,
    k: usize,
    out: *mut f64,
    op: fn(&NodeWeightSequence, &[f64]) -> genhilbert::Result<Vec<f64>>,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        if k == 0 {
            return Err((GhStatus::InvalidArgument, "k must be >= 1".into()));
        }
        let input = input_slice(f, k, "f")?;
        let result = op(seq, input).map_err(fail)?;
        output_slice(out, k, "out")?.copy_from_slice(&result);
        Ok(())
    })
}

/// `out = H^k f`, with `f` and `out` of length `k`.
///
/// # Safety
/// `f` must hold `k` readable doubles and `out` `k` writable ones.
#[no_mangle]
pub unsafe extern "C" fn gh_apply_h(
    seq: *const GhSequence,
    f: *const f64,
    k: usize,
    out: *mut f64,
) -> GhStatus {
    apply_with(seq, f, k, out, apply_h)
}

/// Cesàro-Hardy operator on the first `k` indices.
///
/// # Safety
/// As [`gh_apply_h`].
#[no_mangle]
pub unsafe extern "C" fn gh_apply_cesaro(
    seq: *const GhSequence,
    f: *const f64,
    k: usize,
    out: *mut f64,
) -> GhStatus {
    apply_with(seq, f, k, out, apply_cesaro)
}

/// Adjoint of the Cesàro-Hardy operator on the first `k` indices.
///
/// # Safety
/// As [`gh_apply_h`].
#[no_mangle]
pub unsafe extern "C" fn gh_apply_cesaro_adjoint(
    seq: *const GhSequence,
    f: *const f64,
    k: usize,
    out: *mut f64,
) -> GhStatus {
    apply_with(seq, f, k, out, apply_cesaro_adjoint)
}

/// `N(x_k) M(x_k)` as an interval.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_product(
    seq: *const GhSequence,
    k: usize,
    scan: usize,
    out: *mut GhInterval,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        *out_ref(out, "out")? = interval(muckenhoupt_product(seq, k, scan).map_err(fail)?);
        Ok(())
    })
}

/// `B̃(l)`, also the upper bound on the `l`-th singular value.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_btilde(
    seq: *const GhSequence,
    l: usize,
    scan: usize,
    out: *mut GhInterval,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        *out_ref(out, "out")? = interval(btilde(seq, l, scan).map_err(fail)?);
        Ok(())
    })
}

/// Natural log of the leading `k x k` determinant; `-inf` if a weight is zero.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_log_gamma(seq: *const GhSequence, k: usize, out: *mut f64) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        *out_ref(out, "out")? = log_gamma(seq, k).map_err(fail)?;
        Ok(())
    })
}

/// Natural log of the lower bound on the `k`-th singular value.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_lower_bound(
    seq: *const GhSequence,
    k: usize,
    out: *mut f64,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        *out_ref(out, "out")? = lower_bound_sigma(seq, k).map_err(fail)?;
        Ok(())
    })
}

/// All `k` eigenvalues of the leading `k x k` block, descending.
///
/// # Safety
/// `out` must hold `k` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gh_eigenvalues(
    seq: *const GhSequence,
    k: usize,
    out: *mut f64,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let values = truncation_eigenvalues(seq, k).map_err(fail)?;
        output_slice(out, k, "out")?.copy_from_slice(&values);
        Ok(())
    })
}

/// Singular-value sandwich for `k` as JSON. A null `schedule` (or zero
/// length) selects the default schedule.
///
/// # Safety
/// `schedule` must hold `schedule_len` readable sizes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gh_sandwich_json(
    seq: *const GhSequence,
    k: usize,
    schedule: *const usize,
    schedule_len: usize,
    scan: usize,
    out: *mut *mut c_char,
) -> GhStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out_ref(out, "out")?;
        let schedule = (!schedule.is_null() && schedule_len > 0)
            .then(|| slice::from_raw_parts(schedule, schedule_len));
        let report = sandwich_report(seq, k, schedule, scan).map_err(fail)?;
        store_string(
            out,
            serde_json::to_string(&report).expect("report serializes"),
        )
    })
}
