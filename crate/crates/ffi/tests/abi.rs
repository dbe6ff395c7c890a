use std::ffi::{CStr, CString};
use std::ptr;

use quadcone_ffi::*;

fn example_m() -> *mut QcCone {
    // Re(z₁²/2 + z₂²/3) + |z₁|² − |z₂|²
    let s_re = [0.5, 0.0, 0.0, 1.0 / 3.0];
    let h_re = [1.0, 0.0, 0.0, -1.0];
    let mut cone = ptr::null_mut();
    let code = unsafe { qc_cone_new(2, s_re.as_ptr(), ptr::null(), h_re.as_ptr(), ptr::null(), &mut cone) };
    assert_eq!(code, QC_OK);
    cone
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qc_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(qc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn classify_example_m() {
    let cone = example_m();
    unsafe {
        assert_eq!(qc_cone_dim(cone), 2);
        let (mut p, mut q) = (0, 0);
        assert_eq!(qc_cone_signatures(cone, &mut p, &mut q), QC_OK);
        assert_eq!((p, q), (1, 1));

        let mut nf = ptr::null_mut();
        assert_eq!(qc_classify(cone, &mut nf), QC_OK);
        assert_eq!(CStr::from_ptr(qc_normal_form_tag(nf)).to_str().unwrap(), "M11_1");
        let (mut re, mut im, mut len) = ([0.0; 4], [0.0; 4], 0usize);
        assert_eq!(qc_normal_form_params(nf, re.as_mut_ptr(), im.as_mut_ptr(), 4, &mut len), QC_OK);
        assert_eq!(len, 2);
        assert!(re[0] >= re[1] && re[1] >= 0.0);

        let (mut t_re, mut t_im, mut lambda, mut sign) = ([0.0; 4], [0.0; 4], 0.0, 0);
        assert_eq!(
            qc_normal_form_transform(nf, t_re.as_mut_ptr(), t_im.as_mut_ptr(), &mut lambda, &mut sign),
            QC_OK
        );
        assert!(lambda > 0.0 && sign.abs() == 1);
        qc_normal_form_free(nf);
        qc_cone_free(cone);
    }
}

#[test]
fn evaluate_matches_formula() {
    let cone = example_m();
    let (re, im) = ([1.0, 0.5], [0.25, -1.0]);
    let mut value = 0.0;
    unsafe {
        assert_eq!(qc_cone_evaluate(cone, re.as_ptr(), im.as_ptr(), 2, &mut value), QC_OK);
        assert_eq!(qc_cone_evaluate(cone, re.as_ptr(), im.as_ptr(), 3, &mut value), QC_INVALID);
        qc_cone_free(cone);
    }
    // z₁ = 1 + 0.25i, z₂ = 0.5 − i
    let expected = 0.5 * (1.0 - 0.0625) + (0.25 - 1.0) / 3.0 + (1.0 + 0.0625) - (0.25 + 1.0);
    assert!((value - expected).abs() < 1e-12, "{value} vs {expected}");
}

#[test]
fn decide_verdicts() {
    let opts = QcSettings { seed: 7, samples: 500, budget: 0 };
    let (mut verdict, mut side) = (-1, 9);
    let cone = example_m();
    let code = unsafe { qc_decide(cone, &opts, &mut verdict, &mut side) };
    unsafe { qc_cone_free(cone) };
    assert_eq!(code, QC_OK, "{}", last_error());
    assert_eq!((verdict, side), (QC_VERDICT_TWO_SIDED, 0));

    // M11_1(2, 0.5): B < 1 ≤ A, one-sided on the negative side
    let s_re = [2.0, 0.0, 0.0, 0.5];
    let h_re = [1.0, 0.0, 0.0, -1.0];
    let mut cone = ptr::null_mut();
    unsafe {
        assert_eq!(qc_cone_new(2, s_re.as_ptr(), ptr::null(), h_re.as_ptr(), ptr::null(), &mut cone), QC_OK);
        let code = qc_decide(cone, &opts, &mut verdict, &mut side);
        qc_cone_free(cone);
        assert_eq!(code, QC_OK, "{}", last_error());
    }
    assert_eq!((verdict, side), (QC_VERDICT_ONE_SIDED, -1));
}

#[test]
fn json_round_trip_and_report() {
    let input = CString::new(r#"{"n":2,"S":[[{"re":1},{}],[{},{"re":1}]]}"#).unwrap();
    let mut cone = ptr::null_mut();
    unsafe {
        assert_eq!(qc_cone_from_json(input.as_ptr(), &mut cone), QC_OK);
        let opts = QcSettings { seed: 1, samples: 200, budget: 0 };
        let mut text = ptr::null_mut();
        let code = qc_report_json(cone, QcCommand::Decide, &opts, &mut text);
        let report: serde_json::Value = serde_json::from_str(CStr::from_ptr(text).to_str().unwrap()).unwrap();
        qc_string_free(text);
        qc_cone_free(cone);
        assert_eq!(code, QC_OK);
        assert_eq!(report["classification"]["normal_form"]["tag"], "M00_1");
        assert_eq!(report["verdict"]["kind"], "TwoSided");
        assert_eq!(report["exit_code"], 0);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut cone = ptr::null_mut();
        let bad = CString::new(r#"{"n":2,"S":[[1]]}"#).unwrap();
        assert_eq!(qc_cone_from_json(bad.as_ptr(), &mut cone), QC_SCHEMA);
        assert!(cone.is_null());
        assert!(last_error().contains("$.S"));

        assert_eq!(qc_cone_from_json(ptr::null(), &mut cone), QC_NULL);
        assert_eq!(qc_cone_new(1, ptr::null(), ptr::null(), ptr::null(), ptr::null(), &mut cone), QC_INVALID);

        // zero form: no normal form
        assert_eq!(qc_cone_new(2, ptr::null(), ptr::null(), ptr::null(), ptr::null(), &mut cone), QC_OK);
        let mut nf = ptr::null_mut();
        assert_eq!(qc_classify(cone, &mut nf), QC_DEGENERATE);
        assert!(nf.is_null());
        assert!(last_error().contains("ZeroForm"));
        qc_cone_free(cone);

        qc_cone_free(ptr::null_mut());
        qc_normal_form_free(ptr::null_mut());
        qc_string_free(ptr::null_mut());
        assert!(qc_normal_form_tag(ptr::null()).is_null());
    }
}
