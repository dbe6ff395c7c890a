//! Normal forms of quadratic cones in ℂ².
//!
//! `classify2` brings `ρ` to one of the seven table forms by a linear change
//! of variables `z = T w` and a positive rescaling, possibly after replacing
//! `ρ` by `−ρ`. It keeps the bookkeeping `sign · λ · ρ(T w) = ρ_normal(w)`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, r, CMat, CMat2, RMat2, C64, I, ONE, ZERO};
use crate::quadform::QuadraticCone;
use crate::reduction2::{
    self, chofvar, h_e, det_invariants, sl2_reduce_sym, so11_zero_diag, takagi2,
    DetInvariants, Sl2Canonical,
};
use crate::tol::{self, Tolerances};

/// A normal form from the table, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum NormalFormType {
    /// `Re(Az₁² + Bz₂²) + |z₁|² + |z₂|²`, `0 ≤ B ≤ A`, `A > 1`.
    M20 { a: f64, b: f64 },
    /// `Re(Az₁² + Bz₂²) + |z₁|² − |z₂|²`, `0 ≤ B ≤ A`.
    M11_1 { a: f64, b: f64 },
    /// `Re(Az₁² + Āz₂²) + Im(z₁z̄₂)`, `Re A > 0`, `Im A ≥ 0`.
    M11_2 { a: C64 },
    /// `Re(z₁²) + Im(z₁z̄₂)`.
    M11_3,
    /// `Re(Az₁² + z₂²) + |z₁|²`, `A ≥ 0`.
    M10_1 { a: f64 },
    /// `Re(z₁z₂) + |z₁|²`.
    M10_2,
    /// `Re(z₁² + z₂²)`.
    M00_1,
}

impl NormalFormType {
    pub fn tag(&self) -> &'static str {
        match self {
            NormalFormType::M20 { .. } => "M20",
            NormalFormType::M11_1 { .. } => "M11_1",
            NormalFormType::M11_2 { .. } => "M11_2",
            NormalFormType::M11_3 => "M11_3",
            NormalFormType::M10_1 { .. } => "M10_1",
            NormalFormType::M10_2 => "M10_2",
            NormalFormType::M00_1 => "M00_1",
        }
    }

    pub const TAGS: [&'static str; 7] = ["M20", "M11_1", "M11_2", "M11_3", "M10_1", "M10_2", "M00_1"];

    /// Parameters as a flat list of complex numbers (real ones have zero imaginary part).
    pub fn params(&self) -> Vec<C64> {
        match *self {
            NormalFormType::M20 { a, b } | NormalFormType::M11_1 { a, b } => vec![r(a), r(b)],
            NormalFormType::M11_2 { a } => vec![a],
            NormalFormType::M10_1 { a } => vec![r(a)],
            _ => vec![],
        }
    }

    /// Builds a type from a tag and parameter list, checking the table ranges.
    pub fn from_tag(tag: &str, params: &[C64]) -> Result<Self> {
        let real = |k: usize| -> Result<f64> {
            let p = params
                .get(k)
                .ok_or_else(|| Error::InvalidArgument(format!("{tag} needs parameter {}", k + 1)))?;
            if p.im != 0.0 {
                return Err(Error::InvalidArgument(format!("{tag} parameters are real")));
            }
            Ok(p.re)
        };
        let t = match tag {
            "M20" => NormalFormType::M20 { a: real(0)?, b: real(1)? },
            "M11_1" => NormalFormType::M11_1 { a: real(0)?, b: real(1)? },
            "M11_2" => NormalFormType::M11_2 {
                a: *params
                    .first()
                    .ok_or_else(|| Error::InvalidArgument("M11_2 needs A".into()))?,
            },
            "M11_3" => NormalFormType::M11_3,
            "M10_1" => NormalFormType::M10_1 { a: real(0)? },
            "M10_2" => NormalFormType::M10_2,
            "M00_1" => NormalFormType::M00_1,
            _ => return Err(Error::InvalidArgument(format!("unknown tag `{tag}`"))),
        };
        if !t.in_range() {
            return Err(Error::InvalidArgument(format!(
                "parameters {:?} out of range for {tag}",
                t.params()
            )));
        }
        Ok(t)
    }

    /// True when the parameters lie in the table ranges.
    pub fn in_range(&self) -> bool {
        match *self {
            NormalFormType::M20 { a, b } => 0.0 <= b && b <= a && a > 1.0,
            NormalFormType::M11_1 { a, b } => 0.0 <= b && b <= a,
            NormalFormType::M11_2 { a } => a.re > 0.0 && a.im >= 0.0,
            NormalFormType::M10_1 { a } => a >= 0.0,
            _ => true,
        }
    }

    /// The defining function of the normal form.
    pub fn render(&self) -> QuadraticCone {
        let d = |a: C64, b: C64| CMat::from_row_slice(2, 2, &[a, ZERO, ZERO, b]);
        let (s, h) = match *self {
            NormalFormType::M20 { a, b } => (d(r(a), r(b)), d(ONE, ONE)),
            NormalFormType::M11_1 { a, b } => (d(r(a), r(b)), d(ONE, -ONE)),
            NormalFormType::M11_2 { a } => (d(a, a.conj()), linalg::to_dmat(&h_e())),
            NormalFormType::M11_3 => (d(ONE, ZERO), linalg::to_dmat(&h_e())),
            NormalFormType::M10_1 { a } => (d(r(a), ONE), d(ONE, ZERO)),
            NormalFormType::M10_2 => (
                CMat::from_row_slice(2, 2, &[ZERO, r(0.5), r(0.5), ZERO]),
                d(ONE, ZERO),
            ),
            NormalFormType::M00_1 => (d(ONE, ONE), d(ZERO, ZERO)),
        };
        QuadraticCone::new(s, h).expect("normal forms are symmetric")
    }

    /// Hermitian signature of the type.
    pub fn signature(&self) -> (usize, usize) {
        match self {
            NormalFormType::M20 { .. } => (2, 0),
            NormalFormType::M11_1 { .. } | NormalFormType::M11_2 { .. } | NormalFormType::M11_3 => {
                (1, 1)
            }
            NormalFormType::M10_1 { .. } | NormalFormType::M10_2 => (1, 0),
            NormalFormType::M00_1 => (0, 0),
        }
    }
}

impl fmt::Display for NormalFormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormalFormType::M20 { a, b } | NormalFormType::M11_1 { a, b } => {
                write!(f, "{}(A={a}, B={b})", self.tag())
            }
            NormalFormType::M11_2 { a } => write!(f, "M11_2(A={}{:+}i)", a.re, a.im),
            NormalFormType::M10_1 { a } => write!(f, "M10_1(A={a})"),
            _ => f.write_str(self.tag()),
        }
    }
}

/// Why a cone is excluded from the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyReason {
    /// The zero set has real dimension below 3 (ρ semidefinite).
    DimensionDeficient,
    /// ρ is a product of two real linear forms.
    Reducible,
    /// ρ is definite; the zero set is the origin.
    PointCone,
    /// ρ vanishes identically.
    ZeroForm,
    /// Hermitian signature (1,1) with `det S ≠ 0` and `det P = 0 ≠ P` in the
    /// `Im(z₁z̄₂)` frame; no table row has these invariants.
    OffTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub reason: DegeneracyReason,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormResult {
    pub ntype: NormalFormType,
    /// Change of variables `z = T w`.
    pub t: CMat2,
    pub lambda: f64,
    pub sign: i8,
    /// `‖ΔS‖_F + ‖ΔH‖_F` between the rendered form and the transformed input;
    /// bounds `|sign·λ·ρ(Tz) − ρ_normal(z)| / |z|²`.
    pub residual: f64,
    /// Distance to the nearest case boundary met on the classification path.
    pub boundary_margin: f64,
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Normal(NormalFormResult),
    Degenerate(DegeneracyReport),
}

impl Classification {
    pub fn normal(&self) -> Option<&NormalFormResult> {
        match self {
            Classification::Normal(r) => Some(r),
            Classification::Degenerate(_) => None,
        }
    }
}

fn degenerate(reason: DegeneracyReason, detail: impl Into<String>) -> Classification {
    Classification::Degenerate(DegeneracyReport {
        reason,
        detail: detail.into(),
    })
}

/// `sign · λ · ρ(T·)` as a cone.
pub fn apply_change(cone: &QuadraticCone, t: &CMat, lambda: f64, sign: i8) -> Result<QuadraticCone> {
    if t.nrows() != cone.n() || !t.is_square() {
        return Err(Error::Dimension(format!(
            "T is {}x{}, cone has n = {}",
            t.nrows(),
            t.ncols(),
            cone.n()
        )));
    }
    if lambda <= 0.0 || !lambda.is_finite() || (sign != 1 && sign != -1) {
        return Err(Error::InvalidArgument("lambda > 0 and sign = ±1 required".into()));
    }
    let det = t.determinant().norm();
    let scale = linalg::fro(t).powi(2);
    if det <= 1e-12 * scale.powf(t.nrows() as f64 / 2.0) || det == 0.0 {
        return Err(Error::SingularMatrix { det });
    }
    Ok(cone.pullback(t).scaled(sign as f64 * lambda))
}

/// Canonical hermitian part for a signature: positive directions first,
/// then negative, then the kernel; `(1,1)` goes on to the `Im(z₁z̄₂)` frame.
pub fn normalize_hermitian(cone: &QuadraticCone) -> Result<(CMat2, QuadraticCone)> {
    if cone.n() != 2 {
        return Err(Error::Dimension(format!("n = {}, expected 2", cone.n())));
    }
    let (vals, vecs) = linalg::herm_eigen(cone.h());
    let thr = tol::ZERO_EIGEN_REL * linalg::spectral_radius(&vals);
    let mut order: Vec<usize> = (0..2).filter(|&k| vals[k] > thr).collect();
    order.extend((0..2).filter(|&k| vals[k] < -thr));
    order.extend((0..2).filter(|&k| vals[k].abs() <= thr));
    let mut t = CMat2::zeros();
    for (col, &k) in order.iter().enumerate() {
        let s = if vals[k].abs() > thr { 1.0 / vals[k].abs().sqrt() } else { 1.0 };
        for row in 0..2 {
            t[(row, col)] = vecs[(row, k)] * s;
        }
    }
    let pos = vals.iter().filter(|&&v| v > thr).count();
    let neg = vals.iter().filter(|&&v| v < -thr).count();
    if pos == 1 && neg == 1 {
        t *= chofvar() * r(0.5);
    }
    let out = cone.pullback(&linalg::to_dmat(&t));
    Ok((t, out))
}

/// Working state: `cur(w) = sign · λ · ρ(T w)`.
struct Work {
    s: CMat2,
    h: CMat2,
    t: CMat2,
    lambda: f64,
    sign: i8,
    margin: f64,
}

impl Work {
    fn new(cone: &QuadraticCone) -> Self {
        Self {
            s: linalg::to_mat2(cone.s()),
            h: linalg::to_mat2(cone.h()),
            t: CMat2::identity(),
            lambda: 1.0,
            sign: 1,
            margin: f64::INFINITY,
        }
    }

    fn change(&mut self, m: &CMat2) {
        let s = m.transpose() * self.s * m;
        let h = m.adjoint() * self.h * m;
        self.s = (s + s.transpose()) * r(0.5);
        self.h = (h + h.adjoint()) * r(0.5);
        self.t *= m;
    }

    fn change_real(&mut self, g: &RMat2) {
        self.change(&g.map(r));
    }

    fn scale(&mut self, k: f64) {
        self.s *= r(k);
        self.h *= r(k);
        self.lambda *= k;
    }

    fn negate(&mut self) {
        self.s = -self.s;
        self.h = -self.h;
        self.sign = -self.sign;
    }

    fn note_margin(&mut self, m: f64) {
        self.margin = self.margin.min(m.abs());
    }

    fn finish(self, ntype: NormalFormType, input: &QuadraticCone) -> Classification {
        let t = linalg::to_dmat(&self.t);
        let residual = match apply_change(input, &t, self.lambda, self.sign) {
            Ok(cur) => {
                let nf = ntype.render();
                linalg::fro(&(cur.s() - nf.s())) + linalg::fro(&(cur.h() - nf.h()))
            }
            Err(_) => f64::INFINITY,
        };
        let bound = tol::NORMAL_FORM_RESIDUAL_REL
            * self.lambda
            * input.norm().max(f64::MIN_POSITIVE)
            * linalg::fro2(&self.t).powi(2);
        Classification::Normal(NormalFormResult {
            ntype,
            t: self.t,
            lambda: self.lambda,
            sign: self.sign,
            residual,
            boundary_margin: self.margin,
            low_confidence: self.margin < tol::LOW_CONFIDENCE_MARGIN || !(residual <= bound),
        })
    }
}

fn diag2(a: C64, b: C64) -> CMat2 {
    CMat2::new(a, ZERO, ZERO, b)
}

fn swap2() -> CMat2 {
    CMat2::new(ZERO, ONE, ONE, ZERO)
}

/// Classifies with default tolerances.
pub fn classify2(cone: &QuadraticCone) -> Classification {
    classify2_with(cone, &Tolerances::default())
}

pub fn classify2_with(cone: &QuadraticCone, tol: &Tolerances) -> Classification {
    if cone.n() != 2 {
        return degenerate(
            DegeneracyReason::DimensionDeficient,
            format!("classify2 needs n = 2, got n = {}", cone.n()),
        );
    }
    if cone.is_zero() {
        return degenerate(DegeneracyReason::ZeroForm, "ρ vanishes identically");
    }
    let rs = cone.real_signature(tol.zero_eigen);
    if rs.p + rs.q == 0 {
        return degenerate(DegeneracyReason::ZeroForm, "ρ vanishes to working precision");
    }
    if rs.p == 0 || rs.q == 0 {
        return if rs.p + rs.q == 4 {
            degenerate(
                DegeneracyReason::PointCone,
                format!("ρ is definite (real signature ({}, {}))", rs.p, rs.q),
            )
        } else {
            degenerate(
                DegeneracyReason::DimensionDeficient,
                format!(
                    "ρ is semidefinite of rank {}; the zero set is a real subspace of dimension {}",
                    rs.p + rs.q,
                    4 - rs.p - rs.q
                ),
            )
        };
    }
    if rs.p == 1 && rs.q == 1 {
        return degenerate(
            DegeneracyReason::Reducible,
            "real signature (1,1): ρ is a product of two real linear forms",
        );
    }

    let hs = cone.hermitian_signature(tol.zero_eigen);
    let (work_cone, sign) = if hs.nu > hs.pi {
        (cone.negated(), -1)
    } else {
        (cone.clone(), 1)
    };
    let first = classify_signed(cone, &work_cone, sign, tol);
    if hs.pi == hs.nu {
        if let Classification::Degenerate(_) = first {
            let second = classify_signed(cone, &cone.negated(), -1, tol);
            if let Classification::Normal(_) = second {
                return second;
            }
        }
    }
    first
}

fn classify_signed(
    input: &QuadraticCone,
    cone: &QuadraticCone,
    sign: i8,
    tol: &Tolerances,
) -> Classification {
    let hs = cone.hermitian_signature(tol.zero_eigen);
    let (t0, base) = match normalize_hermitian(cone) {
        Ok(x) => x,
        Err(e) => return degenerate(DegeneracyReason::DimensionDeficient, e.to_string()),
    };
    let mut w = Work::new(&base);
    w.t = t0;
    w.sign = sign;
    match (hs.pi, hs.nu) {
        (2, 0) => case_20(w, input, tol),
        (1, 1) => case_11(w, input, tol),
        (1, 0) => case_10(w, input, tol),
        (0, 0) => case_00(w, input, tol),
        (p, q) => degenerate(
            DegeneracyReason::DimensionDeficient,
            format!("unexpected hermitian signature ({p}, {q})"),
        ),
    }
}

fn case_20(mut w: Work, input: &QuadraticCone, tol: &Tolerances) -> Classification {
    let tk = match takagi2(&w.s) {
        Ok(t) => t,
        Err(e) => return degenerate(DegeneracyReason::DimensionDeficient, e.to_string()),
    };
    w.change(&tk.u);
    let (a, b) = (tk.d[0], tk.d[1]);
    if a <= 1.0 + tol.boundary {
        return degenerate(
            DegeneracyReason::DimensionDeficient,
            format!("hermitian signature (2,0) with A = {a} <= 1: ρ is semidefinite"),
        );
    }
    w.note_margin(a - 1.0);
    w.finish(NormalFormType::M20 { a, b }, input)
}

fn case_10(mut w: Work, input: &QuadraticCone, tol: &Tolerances) -> Classification {
    let scale = linalg::max_abs2(&w.s).max(1.0);
    let (a, b, cc) = (w.s[(0, 0)], w.s[(0, 1)], w.s[(1, 1)]);
    if cc.norm() > tol.zero_eigen * scale {
        w.note_margin(cc.norm() / scale);
        // z₂ = w₂ − (B/C) w₁ completes the square
        w.change(&CMat2::new(ONE, ZERO, -b / cc, ONE));
        let ap = a - b * b / cc;
        let ph = if ap.norm() > 0.0 {
            C64::from_polar(1.0, -0.5 * ap.arg())
        } else {
            ONE
        };
        w.change(&diag2(ph, ONE / cc.sqrt()));
        let a = w.s[(0, 0)].re.max(0.0);
        w.finish(NormalFormType::M10_1 { a }, input)
    } else if b.norm() > tol.zero_eigen * scale {
        w.note_margin(b.norm() / scale);
        // z₂ = (w₂ − A w₁) / (2B)
        let inv = ONE / (b * 2.0);
        w.change(&CMat2::new(ONE, ZERO, -a * inv, inv));
        w.finish(NormalFormType::M10_2, input)
    } else if a.norm() > 1.0 + tol.boundary {
        degenerate(
            DegeneracyReason::Reducible,
            format!("ρ depends on z₁ only with |A| = {} > 1", a.norm()),
        )
    } else {
        degenerate(
            DegeneracyReason::DimensionDeficient,
            format!("ρ depends on z₁ only with |A| = {} <= 1", a.norm()),
        )
    }
}

fn case_00(mut w: Work, input: &QuadraticCone, tol: &Tolerances) -> Classification {
    let tk = match takagi2(&w.s) {
        Ok(t) => t,
        Err(e) => return degenerate(DegeneracyReason::DimensionDeficient, e.to_string()),
    };
    if tk.d[0] == 0.0 {
        return degenerate(DegeneracyReason::ZeroForm, "ρ vanishes identically");
    }
    w.scale(1.0 / tk.d[0]);
    w.change(&tk.u);
    let d2 = tk.d[1] / tk.d[0];
    if d2 <= tol.zero_eigen {
        return degenerate(
            DegeneracyReason::Reducible,
            "harmonic part of rank one: ρ = Re(ℓ²) factors",
        );
    }
    w.note_margin(d2);
    w.change(&diag2(ONE, r(1.0 / d2.sqrt())));
    w.finish(NormalFormType::M00_1, input)
}

/// Brings a diagonal `S` in the `|z₁|² − |z₂|²` frame to `M11_1`.
fn finish_bigab(mut w: Work, input: &QuadraticCone) -> Classification {
    let phase = |z: C64| {
        if z.norm() > 0.0 {
            C64::from_polar(1.0, -0.5 * z.arg())
        } else {
            ONE
        }
    };
    let (al, be) = (w.s[(0, 0)], w.s[(1, 1)]);
    w.change(&diag2(phase(al), phase(be)));
    let (mut a, mut b) = (w.s[(0, 0)].re, w.s[(1, 1)].re);
    if a < b {
        w.change(&swap2());
        w.negate();
        w.change(&diag2(I, I));
        a = w.s[(0, 0)].re;
        b = w.s[(1, 1)].re;
    }
    let (a, b) = (a.max(0.0), b.max(0.0));
    w.note_margin((a - b) / (1.0 + a));
    w.note_margin(a - 1.0);
    w.note_margin(b - 1.0);
    w.finish(NormalFormType::M11_1 { a, b }, input)
}

/// `S = a·diag(1,−1) + iQ` with `det S` real: zero the diagonal of `Q` with
/// SO(1,1), then pass to the `|z₁|² − |z₂|²` frame.
fn split_case(mut w: Work, input: &QuadraticCone, tol: &Tolerances) -> Classification {
    let (p, _) = reduction2::real_parts(&w.s);
    let (g, canon) = match sl2_reduce_sym(&p) {
        Ok(x) => x,
        Err(e) => return degenerate(DegeneracyReason::OffTable, e.to_string()),
    };
    debug_assert!(matches!(canon, Sl2Canonical::Split { .. }));
    w.change_real(&g);
    let (_, q) = reduction2::real_parts(&w.s);
    if q.abs().max() > tol.zero_eigen * linalg::max_abs2(&w.s) {
        match so11_zero_diag(&q) {
            Ok((k, _)) => w.change_real(&k.matrix),
            Err(e) => return degenerate(DegeneracyReason::OffTable, e.to_string()),
        }
    }
    w.change(&chofvar());
    finish_bigab(w, input)
}

fn case_11(mut w: Work, input: &QuadraticCone, tol: &Tolerances) -> Classification {
    let scale = linalg::max_abs2(&w.s);
    if scale <= tol.zero_eigen {
        w.change(&chofvar());
        w.note_margin(scale);
        return w.finish(NormalFormType::M11_1 { a: 0.0, b: 0.0 }, input);
    }
    let det = w.s.determinant();
    if det.norm() > tol.det_zero * scale * scale {
        w.note_margin(det.norm() / (scale * scale));
        // e^{iθ} with θ = −arg(det S)/4 makes det S > 0
        let theta = -0.25 * det.arg();
        w.change(&(CMat2::identity() * C64::from_polar(1.0, theta)));
        let (p, _) = reduction2::real_parts(&w.s);
        let pn = p.abs().max();
        let scale = linalg::max_abs2(&w.s);
        if pn <= tol.zero_eigen * scale {
            // S = iQ: rotate by e^{−iπ/4} so S = Q is real with det < 0
            w.note_margin(pn / scale);
            w.change(&(CMat2::identity() * C64::from_polar(1.0, -FRAC_PI_4)));
            return split_case(w, input, tol);
        }
        let det_p = p.determinant();
        w.note_margin(pn / scale);
        w.note_margin(det_p / (pn * pn));
        if det_p > tol.det_zero * pn * pn {
            return definite_p_case(w, input);
        }
        if det_p < -tol.det_zero * pn * pn {
            return split_case(w, input, tol);
        }
        return degenerate(
            DegeneracyReason::OffTable,
            format!(
                "det S ≠ 0 and det P = 0 with P ≠ 0 (|P| = {pn:e}); no normal form has these invariants"
            ),
        );
    }
    singular_case(w, input, tol)
}

/// `det P > 0`: reduce to `M11_2`.
fn definite_p_case(mut w: Work, input: &QuadraticCone) -> Classification {
    let (p, _) = reduction2::real_parts(&w.s);
    let (g, canon) = match sl2_reduce_sym(&p) {
        Ok(x) => x,
        Err(e) => return degenerate(DegeneracyReason::OffTable, e.to_string()),
    };
    w.change_real(&g);
    if let Sl2Canonical::Scalar { sign, .. } = canon {
        if sign < 0.0 {
            // z ↦ iz sends S to −S and keeps Im(z₁z̄₂)
            w.change(&(CMat2::identity() * I));
        }
    }
    let (_, q) = reduction2::real_parts(&w.s);
    let (_, _, rot) = linalg::sym2_eigen(&q);
    w.change_real(&rot);
    let a = (w.s[(0, 0)] + w.s[(1, 1)].conj()) * 0.5;
    let a = c(a.re.max(0.0), a.im.max(0.0));
    w.note_margin(a.re / (1.0 + a.norm()));
    w.finish(NormalFormType::M11_2 { a }, input)
}

/// `det S = 0` in the `Im(z₁z̄₂)` frame.
fn singular_case(mut w: Work, input: &QuadraticCone, tol: &Tolerances) -> Classification {
    let tk = match takagi2(&w.s) {
        Ok(t) => t,
        Err(e) => return degenerate(DegeneracyReason::OffTable, e.to_string()),
    };
    let col = tk.u.column(0);
    let wv = nalgebra::Vector2::new(col[0].conj(), col[1].conj()) * r(tk.d[0].sqrt());
    let wn = wv.norm_squared();
    // ω = Im(w̄₁ w₂) is invariant under the preservers e^{iθ}g
    let omega = (wv[0].conj() * wv[1]).im;
    w.note_margin(omega / wn.max(1.0));
    if omega.abs() <= tol.zero_eigen * wn.max(1.0) {
        // w = e^{iφ} v with v real: rotate by e^{−iφ}, then g ∈ SL(2,ℝ) with gᵀv = e₁
        let phi = 0.5 * (wv[0] * wv[0] + wv[1] * wv[1]).arg();
        let rot = C64::from_polar(1.0, -phi);
        let v = wv * rot;
        let (v1, v2) = (v[0].re, v[1].re);
        let m = v1 * v1 + v2 * v2;
        let gt = RMat2::new(v1 / m, v2 / m, -v2, v1);
        w.change(&(CMat2::identity() * rot));
        w.change_real(&gt.transpose());
        return w.finish(NormalFormType::M11_3, input);
    }
    w.change(&chofvar());
    let mut wd = rank_one_vector(&w.s);
    if wd[1].norm() > wd[0].norm() {
        w.change(&swap2());
        w.negate();
        wd = rank_one_vector(&w.s);
    }
    let (al, be) = (wd[0], wd[1]);
    let rr = (al.norm_sqr() - be.norm_sqr()).max(f64::MIN_POSITIVE).sqrt();
    // U(1,1) element with Kᵀ(α, β) = (r, 0)
    let k = CMat2::new(al.conj(), -be, -be.conj(), al) * r(1.0 / rr);
    w.change(&k);
    finish_bigab(w, input)
}

/// `w` with `S = w wᵀ` for a rank-one symmetric `S` (up to sign of `S`).
fn rank_one_vector(s: &CMat2) -> nalgebra::Vector2<C64> {
    let tk = takagi2(s).expect("symmetric");
    let col = tk.u.column(0);
    nalgebra::Vector2::new(col[0].conj(), col[1].conj()) * r(tk.d[0].sqrt())
}

/// True iff both results have the same tag and parameters within 1e-6, and,
/// for `(1,1)` tags with `det S ≠ 0`, the same invariants in the `Im(z₁z̄₂)` frame.
pub fn uniqueness_certificate(r1: &NormalFormResult, r2: &NormalFormResult) -> bool {
    if r1.ntype.tag() != r2.ntype.tag() {
        return false;
    }
    let p1 = r1.ntype.params();
    let p2 = r2.ntype.params();
    let close = p1
        .iter()
        .zip(p2.iter())
        .all(|(a, b)| (a - b).norm() <= 1e-6 * (1.0 + a.norm().max(b.norm())));
    if !close {
        return false;
    }
    match (det_certificate(&r1.ntype), det_certificate(&r2.ntype)) {
        (Some(a), Some(b)) => {
            (a.det_s - b.det_s).norm() <= 1e-8 * (1.0 + a.det_s.norm())
                && (a.det_p - b.det_p).abs() <= 1e-8 * (1.0 + a.det_p.abs())
                && (a.det_q - b.det_q).abs() <= 1e-8 * (1.0 + a.det_q.abs())
        }
        _ => true,
    }
}

/// `S` of a `(1,1)` normal form in the `Im(z₁z̄₂)` frame.
pub fn e_frame_s(ntype: &NormalFormType) -> Option<CMat2> {
    let s = linalg::to_mat2(ntype.render().s());
    match ntype {
        NormalFormType::M11_1 { .. } => {
            let half = chofvar() * r(0.5);
            Some(half.transpose() * s * half)
        }
        NormalFormType::M11_2 { .. } | NormalFormType::M11_3 => Some(s),
        _ => None,
    }
}

/// Determinant invariants of a `(1,1)` normal form with `det S ≠ 0`, rotated so
/// `det S > 0`.
pub fn det_certificate(ntype: &NormalFormType) -> Option<DetInvariants> {
    let s = e_frame_s(ntype)?;
    let det = s.determinant();
    if det.norm() <= 1e-6 {
        return None;
    }
    let rot = C64::from_polar(1.0, -0.5 * det.arg());
    Some(det_invariants(&(s * rot)))
}

/// Determinant invariants of a cone with hermitian signature (1,1), computed in
/// the `Im(z₁z̄₂)` frame with `det S` rotated to be positive. `None` for other
/// signatures or `det S ≈ 0`.
pub fn cone_invariants(cone: &QuadraticCone) -> Option<DetInvariants> {
    let hs = cone.hermitian_signature(tol::ZERO_EIGEN_REL);
    if (hs.pi, hs.nu) != (1, 1) {
        return None;
    }
    let (_, e) = normalize_hermitian(cone).ok()?;
    let s = linalg::to_mat2(e.s());
    let det = s.determinant();
    if det.norm() <= 1e-6 * linalg::max_abs2(&s).powi(2) {
        return None;
    }
    let rot = C64::from_polar(1.0, -0.5 * det.arg());
    Some(det_invariants(&(s * rot)))
}
