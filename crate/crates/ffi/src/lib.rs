//! C ABI over the `quadcone` library.
//!
//! Cones and normal forms are opaque heap handles. Every call returns a
//! status code; on failure [`qc_last_error`] holds a message for the
//! calling thread. Matrices cross the boundary as row-major `re`/`im`
//! arrays of `n * n` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use quadcone::cli::commands::{self, Settings};
use quadcone::cli::spec::{self, ConeSpec, SpecSource};
use quadcone::linalg::{CMat, CVec};
use quadcone::normalform2::{self, Classification, NormalFormResult};
use quadcone::QuadraticCone;

pub const QC_OK: i32 = 0;
pub const QC_DEGENERATE: i32 = 2;
pub const QC_VERIFICATION: i32 = 3;
pub const QC_SCHEMA: i32 = 4;
pub const QC_NO_SLICE: i32 = 5;
pub const QC_NULL: i32 = 10;
pub const QC_INVALID: i32 = 11;
pub const QC_PANIC: i32 = 12;

/// Verdict kinds written by [`qc_decide`].
pub const QC_VERDICT_DEGENERATE: i32 = 0;
pub const QC_VERDICT_ONE_SIDED: i32 = 1;
pub const QC_VERDICT_TWO_SIDED: i32 = 2;

/// Opaque cone handle.
pub struct QcCone {
    spec: ConeSpec,
}

/// Opaque handle to an n = 2 normal form.
pub struct QcNormalForm {
    result: NormalFormResult,
    tag: CString,
}

/// Parameters for [`qc_decide`] and [`qc_report_json`]. Zeroed fields
/// take the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QcSettings {
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
}

/// Sub-commands reachable through [`qc_report_json`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcCommand {
    Classify = 0,
    Decide = 1,
    Verify = 2,
    Slice = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(code: i32, msg: impl Into<String>) -> i32 {
    set_error(msg);
    code
}

fn guarded(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(QC_PANIC, format!("internal panic: {msg}"))
        }
    }
}

fn settings(opts: *const QcSettings) -> Settings {
    let mut s = Settings::default();
    if let Some(o) = unsafe { opts.as_ref() } {
        s.seed = o.seed;
        if o.samples > 0 {
            s.samples = o.samples;
        }
        if o.budget > 0 {
            s.budget = o.budget;
        }
    }
    s
}

unsafe fn read_matrix(re: *const f64, im: *const f64, n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let k = i * n + j;
            let a = if re.is_null() { 0.0 } else { *re.add(k) };
            let b = if im.is_null() { 0.0 } else { *im.add(k) };
            m[(i, j)] = Complex64::new(a, b);
        }
    }
    m
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread (empty if none). Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a cone from row-major coefficient matrices. Null `re`/`im`
/// arrays are read as zero. `S` is symmetrized and `H` hermitized.
///
/// # Safety
/// Non-null arrays must hold `n * n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_cone_new(
    n: usize,
    s_re: *const f64,
    s_im: *const f64,
    h_re: *const f64,
    h_im: *const f64,
    out: *mut *mut QcCone,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(QC_NULL, "out is null");
        }
        *out = ptr::null_mut();
        if n < 2 {
            return fail(QC_INVALID, "n must be at least 2");
        }
        let s = read_matrix(s_re, s_im, n);
        let h = read_matrix(h_re, h_im, n);
        if s.iter().chain(h.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return fail(QC_INVALID, "non-finite coefficient");
        }
        match QuadraticCone::symmetrized(s, h) {
            Ok((cone, ds, dh)) => {
                let spec = ConeSpec {
                    cone,
                    source: SpecSource::Matrices,
                    s_adjustment: ds,
                    h_adjustment: dh,
                };
                *out = Box::into_raw(Box::new(QcCone { spec }));
                QC_OK
            }
            Err(e) => fail(QC_INVALID, e.to_string()),
        }
    })
}

/// Parses a cone from the CLI's JSON input format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_cone_from_json(json: *const c_char, out: *mut *mut QcCone) -> i32 {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(QC_NULL, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(QC_SCHEMA, "input is not UTF-8");
        };
        match spec::parse_spec(text) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(QcCone { spec }));
                QC_OK
            }
            Err(e) => fail(QC_SCHEMA, e.to_string()),
        }
    })
}

/// # Safety
/// `cone` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qc_cone_free(cone: *mut QcCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// Complex dimension of the cone, 0 for a null handle.
///
/// # Safety
/// `cone` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_cone_dim(cone: *const QcCone) -> usize {
    cone.as_ref().map_or(0, |c| c.spec.cone.n())
}

/// Evaluates ρ at `z = re + i·im`, both of length `len` (must equal n).
///
/// # Safety
/// `re` and `im` must hold `len` doubles; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_cone_evaluate(
    cone: *const QcCone,
    re: *const f64,
    im: *const f64,
    len: usize,
    value: *mut f64,
) -> i32 {
    guarded(|| {
        let Some(c) = cone.as_ref() else {
            return fail(QC_NULL, "cone is null");
        };
        if re.is_null() || im.is_null() || value.is_null() {
            return fail(QC_NULL, "null argument");
        }
        let n = c.spec.cone.n();
        if len != n {
            return fail(QC_INVALID, format!("expected {n} coordinates, got {len}"));
        }
        let z = CVec::from_iterator(n, (0..n).map(|k| Complex64::new(*re.add(k), *im.add(k))));
        *value = c.spec.cone.evaluate(&z);
        QC_OK
    })
}

/// Hermitian signature `(positive, negative)` of the cone.
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_cone_signatures(cone: *const QcCone, positive: *mut usize, negative: *mut usize) -> i32 {
    guarded(|| {
        let Some(c) = cone.as_ref() else {
            return fail(QC_NULL, "cone is null");
        };
        if positive.is_null() || negative.is_null() {
            return fail(QC_NULL, "null argument");
        }
        let sig = c.spec.cone.hermitian_signature(quadcone::tol::Tolerances::default().zero_eigen);
        *positive = sig.pi;
        *negative = sig.nu;
        QC_OK
    })
}

/// Classifies an n = 2 cone. Returns `QC_DEGENERATE` (with the reason in
/// [`qc_last_error`]) when the cone has no normal form.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_classify(cone: *const QcCone, out: *mut *mut QcNormalForm) -> i32 {
    guarded(|| {
        let Some(c) = cone.as_ref() else {
            return fail(QC_NULL, "cone is null");
        };
        if out.is_null() {
            return fail(QC_NULL, "out is null");
        }
        *out = ptr::null_mut();
        if c.spec.cone.n() != 2 {
            return fail(QC_INVALID, "normal forms exist only for n = 2");
        }
        match normalform2::classify2(&c.spec.cone) {
            Classification::Normal(result) => {
                let tag = CString::new(result.ntype.tag()).expect("ascii tag");
                *out = Box::into_raw(Box::new(QcNormalForm { result, tag }));
                QC_OK
            }
            Classification::Degenerate(d) => fail(QC_DEGENERATE, format!("{:?}: {}", d.reason, d.detail)),
        }
    })
}

/// Tag of the normal form (`"M20"`, …), valid while `nf` lives.
///
/// # Safety
/// `nf` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_normal_form_tag(nf: *const QcNormalForm) -> *const c_char {
    nf.as_ref().map_or(ptr::null(), |f| f.tag.as_ptr())
}

/// Copies up to `cap` parameters into `re`/`im` and stores the full count
/// in `len`.
///
/// # Safety
/// `re` and `im` must hold `cap` doubles (may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn qc_normal_form_params(
    nf: *const QcNormalForm,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len: *mut usize,
) -> i32 {
    guarded(|| {
        let Some(f) = nf.as_ref() else {
            return fail(QC_NULL, "normal form is null");
        };
        if len.is_null() || (cap > 0 && (re.is_null() || im.is_null())) {
            return fail(QC_NULL, "null argument");
        }
        let params = f.result.ntype.params();
        *len = params.len();
        for (k, p) in params.iter().take(cap).enumerate() {
            *re.add(k) = p.re;
            *im.add(k) = p.im;
        }
        QC_OK
    })
}

/// The 2×2 change of variables `T` (row-major), the positive scale λ and
/// the sign with `ρ(Tw) = sign·λ·N(w)`.
///
/// # Safety
/// `re` and `im` must hold 4 doubles; the other outputs may be null.
#[no_mangle]
pub unsafe extern "C" fn qc_normal_form_transform(
    nf: *const QcNormalForm,
    re: *mut f64,
    im: *mut f64,
    lambda: *mut f64,
    sign: *mut i32,
) -> i32 {
    guarded(|| {
        let Some(f) = nf.as_ref() else {
            return fail(QC_NULL, "normal form is null");
        };
        if re.is_null() || im.is_null() {
            return fail(QC_NULL, "null argument");
        }
        for i in 0..2 {
            for j in 0..2 {
                let z = f.result.t[(i, j)];
                *re.add(2 * i + j) = z.re;
                *im.add(2 * i + j) = z.im;
            }
        }
        if !lambda.is_null() {
            *lambda = f.result.lambda;
        }
        if !sign.is_null() {
            *sign = i32::from(f.result.sign);
        }
        QC_OK
    })
}

/// # Safety
/// `nf` must come from [`qc_classify`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qc_normal_form_free(nf: *mut QcNormalForm) {
    if !nf.is_null() {
        drop(Box::from_raw(nf));
    }
}

/// Decides one-sided or two-sided extension and verifies the answer by
/// sampling. `verdict` gets a `QC_VERDICT_*` value and `side` +1 / −1 for
/// one-sided verdicts (0 otherwise). The return code matches the CLI exit
/// code. `opts` may be null.
///
/// # Safety
/// `verdict` and `side` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_decide(
    cone: *const QcCone,
    opts: *const QcSettings,
    verdict: *mut i32,
    side: *mut i32,
) -> i32 {
    guarded(|| {
        let Some(c) = cone.as_ref() else {
            return fail(QC_NULL, "cone is null");
        };
        if verdict.is_null() || side.is_null() {
            return fail(QC_NULL, "null argument");
        }
        let out = commands::cmd_decide(&c.spec, &settings(opts));
        let v = &out.report["verdict"];
        let kind = match v["kind"].as_str() {
            Some("OneSided") => QC_VERDICT_ONE_SIDED,
            Some("TwoSided") => QC_VERDICT_TWO_SIDED,
            _ => QC_VERDICT_DEGENERATE,
        };
        *verdict = kind;
        *side = match v["side"].as_str() {
            Some("Plus") if kind == QC_VERDICT_ONE_SIDED => 1,
            Some("Minus") if kind == QC_VERDICT_ONE_SIDED => -1,
            _ => 0,
        };
        if out.code != QC_OK {
            set_error(out.report.to_string());
        }
        out.code
    })
}

/// Runs a CLI sub-command and hands back its JSON report (free with
/// [`qc_string_free`]). The return code matches the CLI exit code.
///
/// # Safety
/// `out` must be writable; `opts` may be null.
#[no_mangle]
pub unsafe extern "C" fn qc_report_json(
    cone: *const QcCone,
    command: QcCommand,
    opts: *const QcSettings,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let Some(c) = cone.as_ref() else {
            return fail(QC_NULL, "cone is null");
        };
        if out.is_null() {
            return fail(QC_NULL, "out is null");
        }
        *out = ptr::null_mut();
        let s = settings(opts);
        let res = match command {
            QcCommand::Classify => commands::cmd_classify(&c.spec, &s),
            QcCommand::Decide => commands::cmd_decide(&c.spec, &s),
            QcCommand::Verify => commands::cmd_verify(&c.spec, &s),
            QcCommand::Slice => commands::cmd_slice(&c.spec, &s),
        };
        let mut report = res.report;
        report["exit_code"] = serde_json::json!(res.code);
        let text = serde_json::to_string(&report).expect("json");
        *out = CString::new(text).expect("json has no NUL").into_raw();
        res.code
    })
}

/// # Safety
/// `s` must come from [`qc_report_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
