use std::ffi::{CStr, CString};
use std::ptr;

use genhilbert_ffi::*;

fn family(f: GhFamily, alpha: f64, shift: f64) -> *mut GhSequence {
    let mut seq = ptr::null_mut();
    assert_eq!(
        unsafe { gh_sequence_new_family(f, alpha, shift, &mut seq) },
        GhStatus::Ok
    );
    seq
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gh_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn entries_and_operators() {
    let seq = family(GhFamily::Standard, 0.0, 0.0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(gh_entry(seq, 1, 1, &mut v), GhStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(gh_entry(seq, 0, 1, &mut v), GhStatus::OutOfRange);

        let f = [1.0, 0.0];
        let mut out = [0.0; 2];
        assert_eq!(
            gh_apply_h(seq, f.as_ptr(), 2, out.as_mut_ptr()),
            GhStatus::Ok
        );
        assert_eq!(out, [1.0, 0.5]);
        assert_eq!(
            gh_apply_cesaro(seq, f.as_ptr(), 2, out.as_mut_ptr()),
            GhStatus::Ok
        );
        assert_eq!(out, [2.0, 1.0 / 1.5]);
        assert_eq!(
            gh_apply_cesaro_adjoint(seq, f.as_ptr(), 2, out.as_mut_ptr()),
            GhStatus::Ok
        );
        assert_eq!(out, [2.0, 0.0]);
        gh_sequence_free(seq);
    }
}

#[test]
fn bounds_and_determinants() {
    let seq = family(GhFamily::WeightedStandard, 0.0, 0.0);
    let mut iv = GhInterval {
        lower: 0.0,
        upper: 0.0,
        provenance: GhProvenance::Exact,
    };
    let mut v = 0.0;
    unsafe {
        assert_eq!(gh_product(seq, 1, 10_000, &mut iv), GhStatus::Ok);
        assert!(iv.lower <= 4.138_235_291_653_373 && 4.138_235_291_653_373 <= iv.upper);
        assert_eq!(iv.provenance, GhProvenance::TruncatedWithTail);
        assert_eq!(gh_btilde(seq, 10, 10_000, &mut iv), GhStatus::Ok);
        assert!(iv.upper.is_finite() && iv.upper > iv.lower);
        assert_eq!(gh_log_gamma(seq, 1, &mut v), GhStatus::Ok);
        assert_eq!(v, 0.0);
        assert_eq!(gh_lower_bound(seq, 1, &mut v), GhStatus::Ok);
        assert_eq!(v, 0.0);
        gh_sequence_free(seq);
    }
}

#[test]
fn classification_and_reciprocal() {
    let seq = family(GhFamily::Power, 2.0, 0.5);
    let mut rec = ptr::null_mut();
    let mut a = GhVerdicts {
        well_defined: GhVerdict::Unknown,
        bounded: GhVerdict::Unknown,
        compact: GhVerdict::Unknown,
        injective: GhVerdict::Unknown,
        range_closed: GhVerdict::Unknown,
    };
    let mut b = a;
    unsafe {
        assert_eq!(gh_sequence_reciprocal(seq, &mut rec), GhStatus::Ok);
        assert_eq!(gh_classify(seq, 1000, &mut a), GhStatus::Ok);
        assert_eq!(gh_classify(rec, 1000, &mut b), GhStatus::Ok);
        assert_eq!(a, b);
        assert_eq!(a.compact, GhVerdict::Yes);
        let mut json = ptr::null_mut();
        assert_eq!(gh_classify_json(seq, 1000, &mut json), GhStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        gh_string_free(json);
        assert!(text.contains("\"scan_window\":1000"));
        gh_sequence_free(seq);
        gh_sequence_free(rec);
    }
}

#[test]
fn custom_pairs_and_parsing() {
    let x = [1.0, 2.0];
    let d = [1.0, 1.0];
    let mut seq = ptr::null_mut();
    let mut eig = [0.0; 2];
    unsafe {
        assert_eq!(
            gh_sequence_new_pairs(x.as_ptr(), d.as_ptr(), 2, &mut seq),
            GhStatus::Ok
        );
        assert_eq!(gh_eigenvalues(seq, 2, eig.as_mut_ptr()), GhStatus::Ok);
        assert!(eig[0] >= eig[1] && eig[1] > 0.0);
        assert_eq!(
            gh_eigenvalues(seq, 3, eig.as_mut_ptr()),
            GhStatus::OutOfRange
        );
        gh_sequence_free(seq);

        let dup = [1.0, 1.0];
        let mut bad = ptr::null_mut();
        assert_eq!(
            gh_sequence_new_pairs(dup.as_ptr(), d.as_ptr(), 2, &mut bad),
            GhStatus::InvalidArgument
        );
        assert!(bad.is_null());
        assert!(!last_error().is_empty());

        let text = CString::new("0.5 1\n1.5 1\n").unwrap();
        assert_eq!(gh_sequence_parse(text.as_ptr(), &mut seq), GhStatus::Ok);
        let mut v = 0.0;
        assert_eq!(gh_entry(seq, 1, 2, &mut v), GhStatus::Ok);
        assert_eq!(v, 0.5);
        gh_sequence_free(seq);

        let garbage = CString::new("1 2 3\n").unwrap();
        assert_eq!(
            gh_sequence_parse(garbage.as_ptr(), &mut seq),
            GhStatus::Parse
        );
    }
}

#[test]
fn null_pointers_are_reported() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(gh_entry(ptr::null(), 1, 1, &mut v), GhStatus::NullPointer);
        assert_eq!(
            gh_sequence_new_family(GhFamily::Standard, 0.0, 0.0, ptr::null_mut()),
            GhStatus::NullPointer
        );
        gh_sequence_free(ptr::null_mut());
        gh_string_free(ptr::null_mut());
    }
    assert!(last_error().contains("null"));
}

#[test]
fn sandwich_json_default_schedule() {
    let seq = family(GhFamily::Standard, 0.0, 0.0);
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(
            gh_sandwich_json(seq, 3, ptr::null(), 0, 1000, &mut json),
            GhStatus::Ok
        );
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        gh_string_free(json);
        assert_eq!(v["k"], 3);
        assert_eq!(v["ladder"][0][0], 4);
        gh_sequence_free(seq);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(gh_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
