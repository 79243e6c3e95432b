use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use kicked_spectra_ffi::*;

fn last_error() -> String {
    let p = ks_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn spectrum_vec(s: *const KsSpectrum) -> Vec<f64> {
    let n = ks_spectrum_len(s);
    unsafe { std::slice::from_raw_parts(ks_spectrum_values(s), n) }.to_vec()
}

#[test]
fn harper_operator_round_trip() {
    let mut op = ptr::null_mut();
    assert_eq!(ks_harper(2, 0.5, &mut op), KsStatus::Ok);
    assert_eq!(ks_operator_dim(op), 2);
    let (mut re, mut im) = (0.0, 0.0);
    // cos(2 pi * 1 * 1/2) = -1 on site 1, times 2
    assert_eq!(ks_operator_get(op, 0, 0, &mut re, &mut im), KsStatus::Ok);
    assert!((re + 2.0).abs() < 1e-14 && im == 0.0);
    assert_eq!(ks_operator_get(op, 0, 1, &mut re, &mut im), KsStatus::Ok);
    assert_eq!(re, 1.0);
    assert_eq!(ks_operator_get(op, 2, 0, &mut re, &mut im), KsStatus::Domain);
    assert!(last_error().contains("outside"));

    let mut spec = ptr::null_mut();
    assert_eq!(ks_operator_eigenvalues(op, &mut spec), KsStatus::Ok);
    // [[-2, 1], [1, 2]] has eigenvalues -sqrt(5), sqrt(5)
    let e = spectrum_vec(spec);
    assert!((e[0] + 5f64.sqrt()).abs() < 1e-12 && (e[1] - 5f64.sqrt()).abs() < 1e-12);
    ks_spectrum_free(spec);
    ks_operator_free(op);
}

#[test]
fn null_handles_and_outputs() {
    assert_eq!(ks_harper(4, 0.3, ptr::null_mut()), KsStatus::NullPointer);
    assert_eq!(ks_operator_dim(ptr::null()), 0);
    assert_eq!(ks_spectrum_len(ptr::null()), 0);
    assert!(ks_spectrum_values(ptr::null()).is_null());
    let mut spec = ptr::null_mut();
    assert_eq!(ks_operator_eigenvalues(ptr::null(), &mut spec), KsStatus::NullPointer);
    assert!(spec.is_null());
    ks_operator_free(ptr::null_mut());
    ks_spectrum_free(ptr::null_mut());
}

#[test]
fn error_codes_map_library_errors() {
    let mut op = ptr::null_mut();
    assert_eq!(ks_harper(1, 0.3, &mut op), KsStatus::Domain);
    assert!(op.is_null());
    assert_eq!(ks_su2_family(20, b'e' as _, 0.1, 1.0, 0.0, false, &mut op), KsStatus::Config);
    assert!(last_error().contains("epsilon"));
    assert_eq!(ks_su2_family(20, b'z' as _, 0.1, 1.0, 0.0, false, &mut op), KsStatus::Config);
    assert_eq!(ks_dkt_effective(0, 0.1, 1.0, 1.0, &mut op), KsStatus::Domain);
    assert_eq!(ks_su2_family(20, b'e' as _, 0.1, 1.0, 0.5, true, &mut op), KsStatus::Ok);
    assert_eq!(ks_operator_dim(op), 21);
    ks_operator_free(op);
}

#[test]
fn effective_and_exact_spectra_agree_for_weak_kicks() {
    let twice_j = 20;
    let (alpha, eta) = (0.01, ks_golden_ratio() * 10.0);
    let mut op = ptr::null_mut();
    assert_eq!(ks_dkt_effective(twice_j, alpha, eta, 1.0, &mut op), KsStatus::Ok);
    let mut heff = ptr::null_mut();
    assert_eq!(ks_operator_eigenvalues(op, &mut heff), KsStatus::Ok);
    let mut exact = ptr::null_mut();
    assert_eq!(ks_dkt_quasienergies(twice_j, alpha, eta, &mut exact), KsStatus::Ok);
    let (a, b) = (spectrum_vec(heff), spectrum_vec(exact));
    assert_eq!(a.len(), 21);
    // energies are far below pi here, so no folding is involved
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
    ks_spectrum_free(heff);
    ks_spectrum_free(exact);
    ks_operator_free(op);
}

#[test]
fn kicked_harper_modes() {
    let mut closed = ptr::null_mut();
    let mut general = ptr::null_mut();
    let g = ks_golden_ratio();
    assert_eq!(ks_kicked_harper_effective(30, g, 1.0, 1.0, KsHarperMode::ClosedForm, &mut closed), KsStatus::Ok);
    assert_eq!(ks_kicked_harper_effective(30, g, 1.0, 1.0, KsHarperMode::General, &mut general), KsStatus::Ok);
    let (mut a, mut b, mut im) = (0.0, 0.0, 0.0);
    ks_operator_get(closed, 3, 3, &mut a, &mut im);
    ks_operator_get(general, 3, 3, &mut b, &mut im);
    assert!((a - b).abs() < 1e-12);
    ks_operator_free(closed);
    ks_operator_free(general);
}

#[test]
fn scaling_and_participation() {
    let values: Vec<f64> = (0..4096).map(|i| i as f64 / 4095.0).collect();
    let q = [0.0, 2.0, 3.0];
    let mut tau = [0.0; 3];
    let mut dq = [0.0; 3];
    let mut mu = 0.0;
    let st = ks_tau_spectrum(values.as_ptr(), values.len(), q.as_ptr(), 3, tau.as_mut_ptr(), dq.as_mut_ptr(), &mut mu);
    assert_eq!(st, KsStatus::Ok);
    for d in dq {
        assert!((d - 1.0).abs() < 0.01);
    }
    assert!((mu + 1.0).abs() < 0.01);

    let flat = [0.25; 4];
    let mut pr = 0.0;
    assert_eq!(ks_participation_ratio(flat.as_ptr(), 4, &mut pr), KsStatus::Ok);
    assert!((pr - 4.0).abs() < 1e-12);
    let bad = [0.3, 0.3];
    assert_eq!(ks_participation_ratio(bad.as_ptr(), 2, &mut pr), KsStatus::Domain);
    assert_eq!(ks_participation_ratio(ptr::null(), 3, &mut pr), KsStatus::NullPointer);
}

#[test]
fn generated_header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/kicked_spectra.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build script");
    for sym in ["ks_dkt_effective", "ks_operator_free", "ks_tau_spectrum", "KS_STATUS_PANIC"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    // syntax check when a C compiler is around
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
