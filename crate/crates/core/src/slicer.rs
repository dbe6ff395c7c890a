//! Two-dimensional slices of cones in ℂⁿ, n ≥ 3, and the two-sided model forms.
//!
//! If some complex 2-plane `L` cuts the cone in a one-sided cone, functions
//! from that side extend across the origin. `find_good_slice` builds the
//! slice from the hermitian signature case by case and falls back to random
//! planes; `classify_two_sided_nd` recognises the two-sided model forms.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decider::{self, DiscFamily, DiscKind, DiscReport, Hyperplane, Side, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{self, c, r, CMat, CMat2, CVec, C64, I, ONE, ZERO};
use crate::normalform2::{self, apply_change, Classification, DegeneracyReason, NormalFormResult};
use crate::quadform::QuadraticCone;
use crate::reduction2::{self, h_e, takagi2};
use crate::tol;

/// How a slice was built.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Construction {
    /// `z_j = 0, j ≥ 3`.
    Axis,
    /// `z_j = α z₂`, other trailing coordinates zero.
    ShearZ2 { j: usize, alpha: C64 },
    /// `z_j = α z₁`, other trailing coordinates zero.
    ShearZ1 { j: usize, alpha: C64 },
    /// `z₃ = α z₁ + β z₂` along the direction dual to the linear term.
    AlphaBeta { alpha: C64, beta: C64 },
    /// `z₃ = α z₂` in linear-terms case (iv) with non-real ratio.
    LineAlpha { alpha: C64 },
    /// The explicit plane for `R = z₁z₃ + z₂z₄` with `A = C = 0`.
    CaseV,
    /// Span of the first coordinate and a direction where the trailing quadratic part is nonzero.
    QuadraticDirection,
    /// Random plane number `index`.
    Random { index: usize },
    Custom,
}

/// Which branch of the case analysis produced a slice.
pub mod case {
    pub const PI2_I: &str = "pi>=2:i";
    pub const PI2_II: &str = "pi>=2:ii";
    pub const PI2_III: &str = "pi>=2:iii";
    pub const L_I: &str = "11:q=0:i";
    pub const L_II: &str = "11:q=0:ii";
    pub const L_III: &str = "11:q=0:iii";
    pub const L_IV: &str = "11:q=0:iv";
    pub const L_V: &str = "11:q=0:v";
    pub const Q_NONZERO: &str = "11:q!=0";
    pub const P10_L0: &str = "10:l=0";
    pub const P10_DQ: &str = "10:dq!=0";
    pub const P10_RADICAL: &str = "10:dq=0";
    pub const RANDOM: &str = "random";
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    /// n × 2 matrix whose columns span `L` (unit columns).
    pub basis: CMat,
    pub construction: Construction,
    pub case: &'static str,
}

impl Slice {
    pub fn new(basis: CMat, construction: Construction, case: &'static str) -> Result<Self> {
        if basis.ncols() != 2 {
            return Err(Error::Dimension(format!("slice basis has {} columns", basis.ncols())));
        }
        let mut b = basis;
        for j in 0..2 {
            let nj = b.column(j).norm();
            if nj == 0.0 {
                return Err(Error::DegenerateBasis { det: 0.0 });
            }
            b.column_mut(j).scale_mut(1.0 / nj);
        }
        let det = gram_det(&b);
        if det < tol::GRAM_MIN_DET {
            return Err(Error::DegenerateBasis { det });
        }
        Ok(Self {
            basis: b,
            construction,
            case,
        })
    }
}

fn gram_det(b: &CMat) -> f64 {
    (b.adjoint() * b).determinant().re
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceResult {
    pub slice: Slice,
    pub restricted: QuadraticCone,
    pub classification: Classification,
    pub verdict: Verdict,
    pub discs: DiscReport,
    /// Candidate planes evaluated up to and including this one.
    pub tried: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SliceSearch {
    Found(Box<SliceResult>),
    NoSliceFound { reason: String, tried: usize },
}

/// Sampling settings used to certify a candidate slice.
#[derive(Debug, Clone)]
pub struct SliceOptions {
    pub seed: u64,
    pub samples: usize,
    pub eps: Vec<f64>,
}

impl Default for SliceOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 2000,
            eps: vec![1e-3, 1e-2, 1e-1],
        }
    }
}

/// `S' = BᵀSB`, `H' = B*HB`.
pub fn restrict(cone: &QuadraticCone, slice: &Slice) -> Result<QuadraticCone> {
    if slice.basis.nrows() != cone.n() {
        return Err(Error::Dimension(format!(
            "slice lives in C^{}, cone in C^{}",
            slice.basis.nrows(),
            cone.n()
        )));
    }
    let det = gram_det(&slice.basis);
    if det < tol::GRAM_MIN_DET {
        return Err(Error::DegenerateBasis { det });
    }
    Ok(cone.pullback(&slice.basis))
}

/// `|det S| ≥ ¼` and `det P < 0` after rotating `det S` to the positive axis.
pub fn check_det_test(s: &CMat2) -> bool {
    let det = s.determinant();
    if det.norm() == 0.0 || !det.norm().is_finite() {
        return false;
    }
    let zeta2 = C64::from_polar(1.0, -0.5 * det.arg());
    let st = s * zeta2;
    let (p, _) = reduction2::real_parts(&st);
    det.norm() >= 0.25 - tol::DET_TEST_DET_SLACK && p.determinant() < -tol::DET_TEST_DET_P
}

/// Change of variables `z = T w` making `H` diagonal with entries `1, …, −1, …, 0, …`.
///
/// A diagonal `H` is only permuted and rescaled.
fn working_frame(h: &CMat) -> (CMat, usize, usize) {
    let n = h.nrows();
    let off = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .fold(0.0f64, |a, (i, j)| a.max(h[(i, j)].norm()));
    let (vals, vecs) = if off <= 1e-14 * linalg::max_abs(h) {
        ((0..n).map(|i| h[(i, i)].re).collect::<Vec<_>>(), CMat::identity(n, n))
    } else {
        linalg::herm_eigen(h)
    };
    let thr = tol::ZERO_EIGEN_REL * linalg::spectral_radius(&vals);
    let mut order: Vec<usize> = (0..n).filter(|&k| vals[k] > thr).collect();
    let pi = order.len();
    order.extend((0..n).filter(|&k| vals[k] < -thr));
    let nu = order.len() - pi;
    order.extend((0..n).filter(|&k| vals[k].abs() <= thr));
    let mut t = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let s = if vals[k].abs() > thr { 1.0 / vals[k].abs().sqrt() } else { 1.0 };
        for row in 0..n {
            t[(row, col)] = vecs[(row, k)] * s;
        }
    }
    (t, pi, nu)
}

/// Frame where `H = Im(z₁z̄₂)` on the first two coordinates and zero elsewhere.
fn e_frame(cone: &QuadraticCone) -> CMat {
    let n = cone.n();
    let mut he = CMat::zeros(n, n);
    he.view_mut((0, 0), (2, 2)).copy_from(&linalg::to_dmat(&h_e()));
    if linalg::max_abs(&(cone.h() - &he)) <= 1e-12 * linalg::max_abs(cone.h()).max(1.0) {
        return CMat::identity(n, n);
    }
    let (t, _, _) = working_frame(cone.h());
    let mut ce = CMat::identity(n, n);
    ce.view_mut((0, 0), (2, 2)).copy_from(&linalg::to_dmat(&(reduction2::chofvar() * r(0.5))));
    t * ce
}

/// Deterministic α grid: moduli `2^k` with `k = 0, −1, 1, …, ±20`, 16 phases each.
fn alpha_grid(phase_first: impl Fn(f64) -> bool) -> Vec<C64> {
    let mut ks = vec![0i32];
    for k in 1..=20 {
        ks.push(-k);
        ks.push(k);
    }
    let mut phases: Vec<f64> = (0..16).map(|m| TAU * m as f64 / 16.0).collect();
    phases.sort_by_key(|&p| !phase_first(p));
    let mut out = Vec::with_capacity(ks.len() * 16);
    for k in ks {
        for &p in &phases {
            out.push(C64::from_polar(2f64.powi(k), p));
        }
    }
    out
}

fn unit_vec(n: usize, j: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[j] = ONE;
    v
}

fn basis2(a: &CVec, b: &CVec) -> CMat {
    CMat::from_columns(&[a.clone(), b.clone()])
}

/// Complex quadratic `vᵀ Q v` with `Q` symmetric.
fn qform(q: &CMat, v: &CVec) -> C64 {
    linalg::bdot(v, &(q * v))
}

/// Among coordinate directions and pairwise sums in the columns of `dirs`,
/// the one maximizing `|q(v)|`.
fn best_direction(q: &CMat, dirs: &CMat) -> Option<CVec> {
    let mut cands: Vec<CVec> = (0..dirs.ncols()).map(|j| dirs.column(j).into_owned()).collect();
    for i in 0..dirs.ncols() {
        for j in i + 1..dirs.ncols() {
            cands.push((dirs.column(i) + dirs.column(j)) * r(std::f64::consts::FRAC_1_SQRT_2));
        }
    }
    cands
        .into_iter()
        .map(|v| (qform(q, &v).norm() / v.norm_squared().max(f64::MIN_POSITIVE), v))
        .filter(|(m, _)| *m > 0.0)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, v)| v)
}

/// Degenerate slices: a semidefinite ρ′ gets the affine family `{ℓ = ε}`
/// with `ℓ` missing the real kernel of ρ′.
fn semidefinite_family(restricted: &QuadraticCone) -> Option<DiscFamily> {
    let g = restricted.real_matrix();
    let (vals, vecs) = linalg::sym_eigen(&g);
    let thr = tol::ZERO_EIGEN_REL * linalg::spectral_radius(&vals);
    let pos = vals.iter().any(|&v| v > thr);
    let neg = vals.iter().any(|&v| v < -thr);
    let side = match (pos, neg) {
        (true, false) => Side::Plus,
        (false, true) => Side::Minus,
        _ => return None,
    };
    let kernel: Vec<usize> = (0..4).filter(|&k| vals[k].abs() <= thr).collect();
    let ell = match kernel.len() {
        0 => CVec::from_vec(vec![ONE, ZERO]),
        1 => {
            let v = vecs.column(kernel[0]);
            let k = CVec::from_vec(vec![c(v[0], v[2]), c(v[1], v[3])]);
            // ℓ(w) = i k̄ᵀw / |k|² takes the value i on k, so {ℓ = ε} misses ℝk
            k.map(|z| z.conj() * I) / r(k.norm_squared())
        }
        _ => return None,
    };
    Some(DiscFamily {
        kind: DiscKind::AffineLine { ell, shift: ONE },
        side,
        radius: 1.0,
    })
}

/// Restricts, classifies, decides and verifies one candidate plane.
fn evaluate(cone: &QuadraticCone, slice: Slice, opts: &SliceOptions) -> Option<SliceResult> {
    let restricted = restrict(cone, &slice).ok()?;
    let classification = normalform2::classify2(&restricted);
    let verdict = match &classification {
        Classification::Normal(res) => decider::decide2(res),
        Classification::Degenerate(rep) => match rep.reason {
            DegeneracyReason::DimensionDeficient | DegeneracyReason::PointCone => {
                let fam = semidefinite_family(&restricted)?;
                Verdict::OneSided {
                    side: fam.side,
                    family: fam,
                }
            }
            _ => return None,
        },
    };
    let Verdict::OneSided { family, .. } = &verdict else {
        return None;
    };
    let discs = decider::verify_discs(&restricted, family, &opts.eps, opts.samples, opts.seed).ok()?;
    Some(SliceResult {
        slice,
        restricted,
        classification,
        verdict,
        discs,
        tried: 0,
    })
}

struct Search<'a> {
    cone: &'a QuadraticCone,
    opts: &'a SliceOptions,
    tried: usize,
    budget: usize,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.tried >= self.budget
    }

    /// Tries a plane given in working coordinates `w` with `z = T w`.
    fn try_plane(&mut self, t: &CMat, b: CMat, construction: Construction, case: &'static str) -> Option<SliceResult> {
        if self.exhausted() {
            return None;
        }
        self.tried += 1;
        let slice = Slice::new(t * b, construction, case).ok()?;
        evaluate(self.cone, slice, self.opts)
    }
}

/// Looks for a 2-plane whose section is one-sided, with default sampling.
///
/// `budget` caps the number of candidate planes that are classified and
/// verified, structured candidates first, then random ones.
pub fn find_good_slice(cone: &QuadraticCone, budget: usize) -> SliceSearch {
    find_good_slice_with(cone, budget, &SliceOptions::default())
}

pub fn find_good_slice_with(cone: &QuadraticCone, budget: usize, opts: &SliceOptions) -> SliceSearch {
    let n = cone.n();
    if n < 3 || budget == 0 {
        return SliceSearch::NoSliceFound {
            reason: "find_good_slice needs n >= 3 and budget >= 1".into(),
            tried: 0,
        };
    }
    let mut search = Search {
        cone,
        opts,
        tried: 0,
        budget,
    };
    let (work, _) = cone.canonical_sign();
    let (_, pi, nu) = working_frame(work.h());
    let structured = match (pi, nu) {
        (p, _) if p >= 2 => pi_ge_2(&mut search, &work),
        (1, 1) => one_one(&mut search, &work),
        (1, 0) => one_zero(&mut search, &work),
        _ => None,
    };
    if let Some(mut found) = structured {
        found.tried = search.tried;
        return SliceSearch::Found(Box::new(found));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for index in 0.. {
        if search.exhausted() {
            break;
        }
        let m = linalg::random_cmat(&mut rng, n, 2);
        let b = linalg::orthonormalize(&m, 1e-8);
        if b.ncols() < 2 {
            continue;
        }
        let id = CMat::identity(n, n);
        if let Some(mut found) = search.try_plane(&id, b, Construction::Random { index }, case::RANDOM) {
            found.tried = search.tried;
            return SliceSearch::Found(Box::new(found));
        }
    }
    SliceSearch::NoSliceFound {
        reason: format!(
            "hermitian signature ({pi}, {nu}): no structured or random slice is one-sided"
        ),
        tried: search.tried,
    }
}

fn pi_ge_2(search: &mut Search, work: &QuadraticCone) -> Option<SliceResult> {
    let n = work.n();
    let (t0, _, _) = working_frame(work.h());
    let s0 = work.pullback(&t0);
    let block = linalg::to_mat2(&s0.s().view((0, 0), (2, 2)).into_owned());
    let tk = takagi2(&block).ok()?;
    let mut u = CMat::identity(n, n);
    u.view_mut((0, 0), (2, 2)).copy_from(&linalg::to_dmat(&tk.u));
    let t = &t0 * &u;
    let s = s0.pullback(&u);
    let (a, b) = (tk.d[0], tk.d[1]);
    let e1 = unit_vec(n, 0);
    let e2 = unit_vec(n, 1);
    let bnd = tol::BOUNDARY;
    if a > 1.0 + bnd {
        return search.try_plane(&t, basis2(&e1, &e2), Construction::Axis, case::PI2_I);
    }
    if a * b < 1.0 - bnd {
        return search.try_plane(&t, basis2(&e1, &e2), Construction::Axis, case::PI2_II);
    }
    // A = B = 1: shear the second or first coordinate into z_j
    let grid = alpha_grid(|_| true);
    for j in 2..n {
        // shear along the coordinate carrying the larger mixed coefficient first
        let order = if s.s()[(1, j)].norm() >= s.s()[(0, j)].norm() {
            [true, false]
        } else {
            [false, true]
        };
        for shear_z2 in order {
            for &alpha in &grid {
                if search.exhausted() {
                    return None;
                }
                let (b1, b2, cons) = if shear_z2 {
                    (e1.clone(), &e2 + unit_vec(n, j) * alpha, Construction::ShearZ2 { j: j + 1, alpha })
                } else {
                    (&e1 + unit_vec(n, j) * alpha, e2.clone(), Construction::ShearZ1 { j: j + 1, alpha })
                };
                let bm = basis2(&b1, &b2);
                let restricted = s.pullback(&bm);
                if !shear_margin_ok(&restricted) {
                    continue;
                }
                if let Some(found) = search.try_plane(&t, bm, cons, case::PI2_III) {
                    return Some(found);
                }
            }
        }
    }
    None
}

/// `|A′B′ − 1| ≥ margin` for a slice with positive definite hermitian part.
fn shear_margin_ok(restricted: &QuadraticCone) -> bool {
    let hs = restricted.hermitian_signature(tol::ZERO_EIGEN_REL);
    if (hs.pi, hs.nu) != (2, 0) {
        return true;
    }
    let Ok((_, normed)) = normalform2::normalize_hermitian(restricted) else {
        return false;
    };
    let det = linalg::to_mat2(normed.s()).determinant().norm();
    (det - 1.0).abs() >= tol::SCAN_MARGIN
}

/// Linear-terms form of a `(1,1)` cone with vanishing trailing quadratic part.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearTermsCase {
    /// `R = 0`.
    Zero,
    /// `R = z₁z₃`.
    Z1Z3,
    /// `R = z₂z₃`.
    Z2Z3,
    /// `R = c z₁z₃ + z₂z₃`, `c ≠ 0`.
    Dependent { c: C64 },
    /// `R = z₁z₃ + z₂z₄`.
    Independent,
}

impl LinearTermsCase {
    pub fn label(&self) -> &'static str {
        match self {
            LinearTermsCase::Zero => case::L_I,
            LinearTermsCase::Z1Z3 => case::L_II,
            LinearTermsCase::Z2Z3 => case::L_III,
            LinearTermsCase::Dependent { .. } => case::L_IV,
            LinearTermsCase::Independent => case::L_V,
        }
    }
}

/// Result of [`reduce_linear_terms`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTerms {
    pub case: LinearTermsCase,
    /// `S` on `(z₁, z₂)` in the `Im(z₁z̄₂)` frame.
    pub s: CMat2,
    /// Frame change `z = T w` to the `Im(z₁z̄₂)` frame.
    pub frame: CMat,
    /// Directions `d₃ (, d₄)` in the trailing coordinates with `l₁(d₃) = 1` etc.
    /// For `Z2Z3` and `Dependent`, `d₃` satisfies `l₂(d₃) = 1`.
    pub dual: Vec<CVec>,
}

/// Trailing data of a `(1,1)` cone in the `Im(z₁z̄₂)` frame:
/// `(S, l₁, l₂, q, frame)`.
fn trailing_parts(cone: &QuadraticCone) -> (CMat2, CVec, CVec, CMat, CMat) {
    let n = cone.n();
    let t = e_frame(cone);
    let se = cone.pullback(&t);
    let s = se.s();
    let s2 = linalg::to_mat2(&s.view((0, 0), (2, 2)).into_owned());
    let l1 = CVec::from_iterator(n - 2, (2..n).map(|j| s[(0, j)]));
    let l2 = CVec::from_iterator(n - 2, (2..n).map(|j| s[(1, j)]));
    let q = s.view((2, 2), (n - 2, n - 2)).into_owned();
    (s2, l1, l2, q, t)
}

/// Linear-terms case of a `(1,1)` cone whose trailing quadratic part vanishes.
pub fn reduce_linear_terms(cone: &QuadraticCone) -> Result<LinearTerms> {
    let hs = cone.hermitian_signature(tol::ZERO_EIGEN_REL);
    if (hs.pi, hs.nu) != (1, 1) || cone.n() < 3 {
        return Err(Error::InvalidArgument(format!(
            "needs n >= 3 and hermitian signature (1,1), got ({}, {})",
            hs.pi, hs.nu
        )));
    }
    let (s, l1, l2, q, frame) = trailing_parts(cone);
    let scale = linalg::max_abs(&cone.pullback(&frame).s().clone_owned()).max(1.0);
    let qn = linalg::max_abs(&q);
    if qn > 1e-10 * scale.max(cone.norm()) {
        return Err(Error::QNotZero { norm: qn });
    }
    let thr = tol::ZERO_EIGEN_REL * scale;
    let (n1, n2) = (l1.norm(), l2.norm());
    let dual_of = |l: &CVec| l.map(|z| z.conj()) / r(l.norm_squared());
    let case = if n1 <= thr && n2 <= thr {
        return Ok(LinearTerms {
            case: LinearTermsCase::Zero,
            s,
            frame,
            dual: vec![],
        });
    } else if n2 <= thr {
        return Ok(LinearTerms {
            case: LinearTermsCase::Z1Z3,
            s,
            frame,
            dual: vec![dual_of(&l1)],
        });
    } else if n1 <= thr {
        return Ok(LinearTerms {
            case: LinearTermsCase::Z2Z3,
            s,
            frame,
            dual: vec![dual_of(&l2)],
        });
    } else {
        let m = n1.max(n2);
        let lm = CMat::from_rows(&[l1.transpose(), l2.transpose()]);
        let sv = lm.clone().svd(false, false).singular_values;
        if sv.len() < 2 || sv[0].min(sv[1]) <= tol::ZERO_EIGEN_REL * m {
            let c = linalg::hdot(&l2, &l1) / r(l2.norm_squared());
            LinearTerms {
                case: LinearTermsCase::Dependent { c },
                s,
                frame,
                dual: vec![dual_of(&l2)],
            }
        } else {
            // right inverse of [l₁; l₂]
            let gram = &lm * lm.adjoint();
            let inv = gram.try_inverse().ok_or(Error::SingularMatrix { det: 0.0 })?;
            let d = lm.adjoint() * inv;
            LinearTerms {
                case: LinearTermsCase::Independent,
                s,
                frame,
                dual: vec![d.column(0).into_owned(), d.column(1).into_owned()],
            }
        }
    };
    Ok(case)
}

/// Embeds `(a, b, trailing)` into ℂⁿ.
fn lift(n: usize, a: C64, b: C64, tail: &CVec) -> CVec {
    let mut v = CVec::zeros(n);
    v[0] = a;
    v[1] = b;
    for k in 0..tail.len() {
        v[2 + k] = tail[k];
    }
    v
}

/// Slice parameters `(α, β)` for `R = z₁z₃`: `z₃ = α z₁ + β z₂`.
/// `None` when `C = 0` (then `{z₁ = 0}` lies in the cone).
fn case_ii_params(s: &CMat2) -> Option<(C64, C64)> {
    let (a, b, cc) = (s[(0, 0)], s[(0, 1)], s[(1, 1)]);
    let scale = linalg::max_abs2(s).max(1.0);
    if cc.norm() <= tol::ZERO_EIGEN_REL * scale {
        return None;
    }
    let root = (cc.norm_sqr() + 2.0).sqrt();
    if cc.re.abs() <= tol::ZERO_EIGEN_REL * scale {
        Some((-(a + cc) * 0.5, -b + root))
    } else {
        Some((-(a + cc.conj()) * 0.5, -b + I * root))
    }
}

fn one_one(search: &mut Search, work: &QuadraticCone) -> Option<SliceResult> {
    let n = work.n();
    let (s, l1, l2, q, t) = trailing_parts(work);
    let scale = linalg::max_abs(work.pullback(&t).s()).max(1.0);
    if linalg::max_abs(&q) > tol::ZERO_EIGEN_REL * scale {
        // Hermitian part on span(e₁ of the |z₁|²−|z₂|² frame, e′) is diag(1, 0)
        // and the trailing coefficient q(e′) ≠ 0, so the section is M10_1.
        let (td, _, _) = working_frame(work.h());
        let dirs = CMat::identity(n - 2, n - 2);
        let ep = best_direction(&q, &dirs)?;
        let b = basis2(&unit_vec(n, 0), &lift(n, ZERO, ZERO, &ep));
        return search.try_plane(&td, b, Construction::QuadraticDirection, case::Q_NONZERO);
    }
    let lt = reduce_linear_terms(work).ok()?;
    let _ = (l1, l2);
    match lt.case {
        LinearTermsCase::Zero => {
            let b = basis2(&unit_vec(n, 0), &unit_vec(n, 1));
            search.try_plane(&t, b, Construction::Axis, case::L_I)
        }
        LinearTermsCase::Z1Z3 => {
            let d = &lt.dual[0];
            let (al, be) = case_ii_params(&s)?;
            let b = basis2(&lift(n, ONE, ZERO, &(d * al)), &lift(n, ZERO, ONE, &(d * be)));
            search.try_plane(&t, b, Construction::AlphaBeta { alpha: al, beta: be }, case::L_II)
        }
        LinearTermsCase::Z2Z3 => {
            // −ρ(Jz) has linear term −z₁z₃, so its dual direction is −d
            let d = &(-&lt.dual[0]);
            let (al, be) = case_ii_params(&swapped_s(&s))?;
            // swap back: ρ̃(z) = −ρ(Jz) exchanges the roles of z₁ and z₂
            let b = basis2(&lift(n, ZERO, ONE, &(d * al)), &lift(n, ONE, ZERO, &(d * be)));
            search.try_plane(&t, b, Construction::AlphaBeta { alpha: al, beta: be }, case::L_III)
        }
        LinearTermsCase::Dependent { c: cr } => {
            let d = &lt.dual[0];
            if cr.im.abs() <= tol::ZERO_EIGEN_REL * (1.0 + cr.norm()) {
                // (w₁, w₂) = (c z₁ + z₂, z₂/c) is in SL(2,ℝ); then R = w₁z₃
                let c0 = cr.re;
                let g = CMat2::new(r(1.0 / c0), r(-1.0), ZERO, r(c0));
                let sw = g.transpose() * s * g;
                let (al, be) = case_ii_params(&sw)?;
                let b1 = g * nalgebra::Vector2::new(ONE, ZERO);
                let b2 = g * nalgebra::Vector2::new(ZERO, ONE);
                let b = basis2(&lift(n, b1[0], b1[1], &(d * al)), &lift(n, b2[0], b2[1], &(d * be)));
                return search.try_plane(&t, b, Construction::AlphaBeta { alpha: al, beta: be }, case::L_IV);
            }
            let arg_c = cr.arg();
            let arg_a = s[(0, 0)].arg();
            let grid = alpha_grid(|th| (th + arg_c - arg_a).sin() * arg_c.sin() < 0.0);
            let tmat = CMat2::new(ZERO, cr, cr, r(2.0));
            for alpha in grid {
                if search.exhausted() {
                    return None;
                }
                if !check_det_test(&(s + tmat * alpha)) {
                    continue;
                }
                let b = basis2(&unit_vec(n, 0), &lift(n, ZERO, ONE, &(d * alpha)));
                if let Some(found) = search.try_plane(&t, b, Construction::LineAlpha { alpha }, case::L_IV) {
                    return Some(found);
                }
            }
            None
        }
        LinearTermsCase::Independent => {
            let (d3, d4) = (&lt.dual[0], &lt.dual[1]);
            let scale = linalg::max_abs2(&s).max(1.0);
            let (a, bb, cc) = (s[(0, 0)], s[(0, 1)], s[(1, 1)]);
            if cc.norm() > tol::ZERO_EIGEN_REL * scale {
                // restrict z′ to span(d₃): R = z₁z₃
                let (al, be) = case_ii_params(&s)?;
                let b = basis2(&lift(n, ONE, ZERO, &(d3 * al)), &lift(n, ZERO, ONE, &(d3 * be)));
                return search.try_plane(&t, b, Construction::AlphaBeta { alpha: al, beta: be }, case::L_V);
            }
            if a.norm() > tol::ZERO_EIGEN_REL * scale {
                // restrict z′ to span(d₄): R = z₂z₄
                let (al, be) = case_ii_params(&swapped_s(&s))?;
                let d4 = -d4;
                let b = basis2(&lift(n, ZERO, ONE, &(&d4 * al)), &lift(n, ONE, ZERO, &(&d4 * be)));
                return search.try_plane(&t, b, Construction::AlphaBeta { alpha: al, beta: be }, case::L_V);
            }
            // z₃ = ½z₁ + κz₂, z₄ = κz₁ − ½z₂ with κ = −B/2 + i gives S⋆ = [[1, 2i], [2i, −1]]
            let kappa = -bb * 0.5 + I;
            let b1 = lift(n, ONE, ZERO, &(d3 * r(0.5) + d4 * kappa));
            let b2 = lift(n, ZERO, ONE, &(d3 * kappa - d4 * r(0.5)));
            search.try_plane(&t, basis2(&b1, &b2), Construction::CaseV, case::L_V)
        }
    }
}

/// `S` of `−ρ(Jz)` with `J` the swap of `z₁, z₂`.
fn swapped_s(s: &CMat2) -> CMat2 {
    CMat2::new(-s[(1, 1)], -s[(0, 1)], -s[(1, 0)], -s[(0, 0)])
}

fn one_zero(search: &mut Search, work: &QuadraticCone) -> Option<SliceResult> {
    let n = work.n();
    let (t, _, _) = working_frame(work.h());
    let sw = work.pullback(&t);
    let s = sw.s();
    let scale = linalg::max_abs(s).max(1.0);
    let thr = tol::ZERO_EIGEN_REL * scale;
    let l = CVec::from_iterator(n - 1, (1..n).map(|j| s[(0, j)]));
    let q = s.view((1, 1), (n - 1, n - 1)).into_owned();
    if linalg::max_abs(&q) <= thr {
        // {z₁ = 0} lies in the cone
        return None;
    }
    let lift1 = |v: &CVec| {
        let mut out = CVec::zeros(n);
        for k in 0..n - 1 {
            out[k + 1] = v[k];
        }
        out
    };
    let e1 = unit_vec(n, 0);
    let (ep, tag) = if l.norm() <= thr {
        (best_direction(&q, &CMat::identity(n - 1, n - 1))?, case::P10_L0)
    } else {
        let d = l.map(|z| z.conj()) / r(l.norm_squared());
        let qd = &q * &d;
        let lrow = CMat::from_row_slice(1, n - 1, l.as_slice());
        let ker = linalg::null_space(&lrow, 1e-12);
        if qd.norm() > thr {
            if qform(&q, &d).norm() > thr {
                (d, case::P10_DQ)
            } else {
                // q(d) = 0 but q(d, k) ≠ 0 for some k in ker l
                let mut best: Option<(f64, CVec)> = None;
                for j in 0..ker.ncols() {
                    for s0 in [ONE, r(0.5), r(2.0), I] {
                        let v = &d + ker.column(j) * s0;
                        let m = qform(&q, &v).norm() / v.norm_squared();
                        if best.as_ref().is_none_or(|b| m > b.0) {
                            best = Some((m, v));
                        }
                    }
                }
                (best?.1, case::P10_DQ)
            }
        } else {
            (best_direction(&q, &ker)?, case::P10_RADICAL)
        }
    };
    search.try_plane(&t, basis2(&e1, &lift1(&ep)), Construction::QuadraticDirection, tag)
}

/// Recognised two-sided model forms for n ≥ 3.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoSidedForm {
    /// ρ only depends on the projection to a 2-plane (`complement`, n × 2 orthonormal).
    ProductForm {
        inner: NormalFormResult,
        complement: CMat,
    },
    /// `ρ(Tw) = Re(w₁² + ⋯ + w_k²)`, `k > 2`.
    Ts1 { k: usize, t: CMat, residual: f64 },
    /// `ρ(Tw) = Re(w₁w₂ + w₁w̄₃)`; `α = aᵀz`, `λ = lᵀz`, `μ = mᵀz`.
    Ts2 {
        a: CVec,
        l: CVec,
        m: CVec,
        t: CMat,
        residual: f64,
    },
    Unknown,
}

impl TwoSidedForm {
    pub fn label(&self) -> &'static str {
        match self {
            TwoSidedForm::ProductForm { .. } => "ProductForm",
            TwoSidedForm::Ts1 { .. } => "TS1",
            TwoSidedForm::Ts2 { .. } => "TS2",
            TwoSidedForm::Unknown => "Unknown",
        }
    }

    /// Linear hypersurface inside the cone, when the form provides one.
    pub fn contained_hyperplane(&self) -> Option<Hyperplane> {
        match self {
            TwoSidedForm::Ts2 { a, .. } => Some(Hyperplane { ell: a.clone() }),
            _ => None,
        }
    }
}

/// Complex symmetric congruence `Tᵀ S T = diag(1,…,1,0,…,0)` by symmetric
/// elimination with pivoting. Returns `(T, rank)`.
pub fn congruence_diagonalize(s: &CMat, rel: f64) -> (CMat, usize) {
    let n = s.nrows();
    let mut m = s.clone();
    let mut t = CMat::identity(n, n);
    let scale = linalg::max_abs(s);
    let thr = rel * scale;
    let mut rank = 0;
    for k in 0..n {
        // pivot: largest diagonal entry in the trailing block
        let (mut p, mut best) = (k, m[(k, k)].norm());
        for i in k + 1..n {
            if m[(i, i)].norm() > best {
                best = m[(i, i)].norm();
                p = i;
            }
        }
        if best <= thr {
            // make a diagonal entry nonzero from an off-diagonal one: e_i ← e_i + e_j
            let mut off = None;
            for i in k..n {
                for j in i + 1..n {
                    if m[(i, j)].norm() > thr && off.is_none_or(|(_, _, v): (usize, usize, f64)| m[(i, j)].norm() > v) {
                        off = Some((i, j, m[(i, j)].norm()));
                    }
                }
            }
            let Some((i, j, _)) = off else { break };
            let mut e = CMat::identity(n, n);
            e[(j, i)] = ONE;
            m = e.transpose() * &m * &e;
            t *= &e;
            p = i;
        }
        if p != k {
            let mut e = CMat::identity(n, n);
            e.swap_columns(p, k);
            m = e.transpose() * &m * &e;
            t *= &e;
        }
        let piv = m[(k, k)];
        let mut e = CMat::identity(n, n);
        for j in k + 1..n {
            e[(k, j)] = -m[(k, j)] / piv;
        }
        m = e.transpose() * &m * &e;
        t *= &e;
        let mut sc = CMat::identity(n, n);
        sc[(k, k)] = ONE / piv.sqrt();
        m = sc.transpose() * &m * &sc;
        t *= &sc;
        rank += 1;
    }
    (t, rank)
}

fn form_residual(cone: &QuadraticCone, t: &CMat, target: &QuadraticCone) -> f64 {
    match apply_change(cone, t, 1.0, 1) {
        Ok(cur) => linalg::fro(&(cur.s() - target.s())) + linalg::fro(&(cur.h() - target.h())),
        Err(_) => f64::INFINITY,
    }
}

fn form_bound(cone: &QuadraticCone, t: &CMat) -> f64 {
    tol::FORM_VERIFY_REL * cone.norm().max(f64::MIN_POSITIVE) * linalg::fro(t).powi(2).max(1.0)
}

/// Recognises the two-sided model forms; every returned form is verified.
pub fn classify_two_sided_nd(cone: &QuadraticCone) -> TwoSidedForm {
    let n = cone.n();
    if n < 3 || cone.is_zero() {
        return TwoSidedForm::Unknown;
    }
    // product form: common kernel of S and H of dimension n − 2
    let stacked = {
        let mut m = CMat::zeros(2 * n, n);
        m.view_mut((0, 0), (n, n)).copy_from(cone.s());
        m.view_mut((n, 0), (n, n)).copy_from(cone.h());
        m
    };
    let ker = linalg::null_space(&stacked, tol::PRODUCT_KERNEL_REL);
    if ker.ncols() == n - 2 {
        let full = linalg::complete_basis(&ker);
        let comp = full.columns(n - 2, 2).into_owned();
        let inner_cone = cone.pullback(&comp);
        if let Classification::Normal(inner) = normalform2::classify2(&inner_cone) {
            // ρ(z) = ρ(P z) with P the projection on the complement
            let proj = &comp * comp.adjoint();
            let pc = cone.pullback(&proj);
            let res = linalg::fro(&(pc.s() - cone.s())) + linalg::fro(&(pc.h() - cone.h()));
            if res <= form_bound(cone, &proj) {
                return TwoSidedForm::ProductForm {
                    inner,
                    complement: comp,
                };
            }
        }
    }
    let sn = linalg::fro(cone.s());
    let hn = linalg::fro(cone.h());
    if hn <= tol::ZERO_EIGEN_REL * sn {
        let (t, k) = congruence_diagonalize(cone.s(), tol::ZERO_EIGEN_REL);
        if k > 2 {
            let mut s = CMat::zeros(n, n);
            for j in 0..k {
                s[(j, j)] = ONE;
            }
            let target = QuadraticCone::new(s, CMat::zeros(n, n)).expect("diagonal");
            let residual = form_residual(cone, &t, &target);
            if residual <= form_bound(cone, &t) {
                return TwoSidedForm::Ts1 { k, t, residual };
            }
        }
    }
    if let Some(ts2) = detect_ts2(cone) {
        return ts2;
    }
    TwoSidedForm::Unknown
}

fn detect_ts2(cone: &QuadraticCone) -> Option<TwoSidedForm> {
    let n = cone.n();
    let hs = cone.hermitian_signature(tol::ZERO_EIGEN_REL);
    if (hs.pi, hs.nu) != (1, 1) {
        return None;
    }
    let (vals, vecs) = linalg::herm_eigen(cone.h());
    let g: CVec = vecs.column(0) / r(vals[0].sqrt());
    let h: CVec = vecs.column(n - 1) / r((-vals[n - 1]).sqrt());
    let kern = vecs.columns(1, n - 2).into_owned();
    let s = cone.s();
    let scale = linalg::max_abs(s).max(linalg::max_abs(cone.h()));
    let thr = tol::ZERO_EIGEN_REL * scale;
    // S vanishes on ker H
    if linalg::max_abs(&(kern.transpose() * s * &kern)) > thr {
        return None;
    }
    // w_ψ = g + e^{iψ} h is H-null; need w_ψᵀ S K = 0 and w_ψᵀ S w_ψ = 0
    let gsk = (g.transpose() * s * &kern).transpose();
    let hsk = (h.transpose() * s * &kern).transpose();
    let mut zetas: Vec<C64> = Vec::new();
    if let Some(j) = (0..hsk.len()).max_by(|&a, &b| hsk[a].norm().total_cmp(&hsk[b].norm())) {
        if hsk[j].norm() > thr {
            zetas.push(-gsk[j] / hsk[j]);
        }
    }
    if zetas.is_empty() {
        let a2 = linalg::bdot(&h, &(s * &h));
        let b2 = linalg::bdot(&g, &(s * &h));
        let c2 = linalg::bdot(&g, &(s * &g));
        if a2.norm() > thr {
            let disc = (b2 * b2 - a2 * c2).sqrt();
            zetas.push((-b2 + disc) / a2);
            zetas.push((-b2 - disc) / a2);
        } else if b2.norm() > thr {
            zetas.push(-c2 / (b2 * 2.0));
        } else {
            zetas.push(ONE);
        }
    }
    for zeta in zetas {
        if (zeta.norm() - 1.0).abs() > 1e-6 {
            continue;
        }
        let zeta = zeta / zeta.norm();
        let w: CVec = &g + &h * zeta;
        // a spans the annihilator of ker H ⊕ ℂw
        let mut rows = CMat::zeros(n - 1, n);
        for j in 0..n - 2 {
            rows.set_row(j, &kern.column(j).transpose());
        }
        rows.set_row(n - 2, &w.transpose());
        let ann = linalg::null_space(&rows, 1e-9);
        if ann.ncols() != 1 {
            continue;
        }
        let a: CVec = ann.column(0).into_owned();
        let abar = a.map(|z| z.conj());
        let a2 = a.norm_squared();
        // S = sym(l aᵀ), H = ½(m̄ aᵀ + ā mᵀ)
        let t0 = linalg::bdot(&abar, &(s * &abar)) / a2;
        let l: CVec = (s * &abar * r(2.0) - &a * t0) / r(a2);
        let hbar = cone.h().map(|z| z.conj());
        let h0 = linalg::bdot(&a, &(cone.h() * &abar)).re / a2;
        let m: CVec = (&hbar * &a * r(2.0) - &a * r(h0)) / r(a2);
        let lam = CMat::from_columns(&[a.clone(), l.clone(), m.clone()]);
        let sv = lam.svd(false, false).singular_values;
        let smax = sv.iter().fold(0.0f64, |x, &y| x.max(y));
        let smin = sv.iter().fold(f64::INFINITY, |x, &y| x.min(y));
        if smin <= 1e-9 * smax {
            continue;
        }
        // rows of T⁻¹: aᵀ, lᵀ, mᵀ, then an orthonormal completion
        let mut tinv = CMat::zeros(n, n);
        tinv.set_row(0, &a.transpose());
        tinv.set_row(1, &l.transpose());
        tinv.set_row(2, &m.transpose());
        if n > 3 {
            let top = tinv.rows(0, 3).into_owned();
            let comp = linalg::null_space(&top.map(|z| z.conj()), 1e-12);
            for j in 0..n - 3 {
                tinv.set_row(3 + j, &comp.column(j).map(|z| z.conj()).transpose());
            }
        }
        let Some(t) = tinv.try_inverse() else { continue };
        let target = ts2_form(n);
        let residual = form_residual(cone, &t, &target);
        if residual <= form_bound(cone, &t) {
            return Some(TwoSidedForm::Ts2 {
                a,
                l,
                m,
                t,
                residual,
            });
        }
    }
    None
}

/// `Re(z₁z₂ + z₁z̄₃)` on ℂⁿ.
pub fn ts2_form(n: usize) -> QuadraticCone {
    let mut s = CMat::zeros(n, n);
    s[(0, 1)] = r(0.5);
    s[(1, 0)] = r(0.5);
    let mut h = CMat::zeros(n, n);
    h[(0, 2)] = r(0.5);
    h[(2, 0)] = r(0.5);
    QuadraticCone::new(s, h).expect("symmetric")
}

/// `Re(z₁² + ⋯ + z_k²)` on ℂⁿ.
pub fn ts1_form(n: usize, k: usize) -> QuadraticCone {
    let s = CMat::from_fn(n, n, |i, j| if i == j && i < k { ONE } else { ZERO });
    QuadraticCone::new(s, CMat::zeros(n, n)).expect("diagonal")
}

/// Support witnesses of a product form, lifted from the inner 2-dimensional verdict.
pub fn product_witness(inner: &NormalFormResult, complement: &CMat) -> Option<decider::SupportWitness> {
    match decider::decide2(inner) {
        Verdict::TwoSided { witness } => {
            // w = B* z on the complement
            let lift = |h: &Hyperplane| Hyperplane {
                ell: (h.ell.transpose() * complement.adjoint()).transpose(),
            };
            Some(decider::SupportWitness {
                aplus: lift(&witness.aplus),
                aminus: lift(&witness.aminus),
                kind: witness.kind,
                angles: witness.angles,
            })
        }
        _ => None,
    }
}

/// Angle helper for reports: `arg` in `[0, 2π)`.
pub fn arg_positive(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::diagonal;

    fn found(s: SliceSearch) -> SliceResult {
        match s {
            SliceSearch::Found(r) => *r,
            SliceSearch::NoSliceFound { reason, tried } => panic!("no slice ({tried} tried): {reason}"),
        }
    }

    #[test]
    fn det_test_examples() {
        assert!(check_det_test(&CMat2::new(ONE, I * 2.0, I * 2.0, -ONE)));
        assert!(!check_det_test(&CMat2::new(c(1.0, 1.0), ZERO, ZERO, c(1.0, -1.0))));
        assert!(!check_det_test(&CMat2::new(ONE, ONE, ONE, ONE)));
    }

    #[test]
    fn axis_slice_of_m20_product() {
        let cone = diagonal(&[r(2.0), r(1.0), ZERO], &[1.0, 1.0, 1.0]);
        let res = found(find_good_slice(&cone, 16));
        assert_eq!(res.slice.case, case::PI2_I);
        assert!(matches!(res.verdict, Verdict::OneSided { side: Side::Plus, .. }));
    }

    #[test]
    fn restrict_axis_gives_example_m() {
        let cone = diagonal(&[r(0.5), r(1.0 / 3.0), ONE], &[1.0, -1.0, 1.0]);
        let b = basis2(&unit_vec(3, 0), &unit_vec(3, 1));
        let sl = Slice::new(b, Construction::Axis, case::PI2_I).unwrap();
        let rc = restrict(&cone, &sl).unwrap();
        let m = decider::example_cone();
        assert!(linalg::max_abs(&(rc.s() - m.s())) < 1e-15);
        assert!(linalg::max_abs(&(rc.h() - m.h())) < 1e-15);
    }

    #[test]
    fn degenerate_basis_rejected() {
        let v = unit_vec(3, 0);
        assert!(matches!(
            Slice::new(basis2(&v, &v), Construction::Custom, case::RANDOM),
            Err(Error::DegenerateBasis { .. })
        ));
    }

    #[test]
    fn congruence_diagonalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = linalg::random_cmat(&mut rng, 4, 3);
        let s = &m * m.transpose();
        let (t, k) = congruence_diagonalize(&s, 1e-9);
        assert_eq!(k, 3);
        let d = t.transpose() * &s * &t;
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j && i < 3 { ONE } else { ZERO };
                assert!((d[(i, j)] - want).norm() < 1e-9, "{d}");
            }
        }
        let off = CMat::from_row_slice(3, 3, &[ZERO, ONE, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ONE]);
        let (_, k) = congruence_diagonalize(&off, 1e-9);
        assert_eq!(k, 3);
    }

    #[test]
    fn model_forms() {
        assert_eq!(classify_two_sided_nd(&ts1_form(3, 3)).label(), "TS1");
        assert_eq!(classify_two_sided_nd(&ts2_form(3)).label(), "TS2");
        let prod = diagonal(&[r(0.5), r(1.0 / 3.0), ZERO], &[1.0, -1.0, 0.0]);
        match classify_two_sided_nd(&prod) {
            TwoSidedForm::ProductForm { inner, .. } => assert_eq!(inner.ntype.tag(), "M11_1"),
            other => panic!("{other:?}"),
        }
    }

    /// Cone `Re(zᵀSz) + Im(z₁z̄₂)` with the given `S`.
    fn linear_terms_cone(s: &[C64], n: usize) -> QuadraticCone {
        let s = CMat::from_row_slice(n, n, s);
        let mut h = CMat::zeros(n, n);
        h[(0, 1)] = c(0.0, 0.5);
        h[(1, 0)] = c(0.0, -0.5);
        QuadraticCone::new(s, h).unwrap()
    }

    fn dense(s: &[C64], h: &[f64], n: usize) -> QuadraticCone {
        let s = CMat::from_row_slice(n, n, s);
        let h = CMat::from_diagonal(&CVec::from_iterator(n, h.iter().map(|&x| r(x))));
        QuadraticCone::new(s, h).unwrap()
    }

    fn assert_case(cone: &QuadraticCone, want: &str) -> SliceResult {
        let res = found(find_good_slice(cone, 256));
        assert_eq!(res.slice.case, want, "{:?}", res.slice.construction);
        assert!(matches!(res.verdict, Verdict::OneSided { .. }));
        assert!(res.discs.min_margin > 0.0);
        res
    }

    #[test]
    fn pi_ge_2_cases() {
        let (o, z) = (ONE, ZERO);
        assert_case(&diagonal(&[r(0.5), r(0.5), ONE], &[1.0, 1.0, 1.0]), case::PI2_II);
        let sh = dense(&[o, z, o, z, o, z, o, z, z], &[1.0, 1.0, 1.0], 3);
        let res = assert_case(&sh, case::PI2_III);
        assert!(matches!(res.slice.construction, Construction::ShearZ1 { j: 3, .. }));
    }

    #[test]
    fn linear_terms_cases() {
        let (o, z) = (ONE, ZERO);
        let e = crate::normalform2::e_frame_s(&crate::normalform2::NormalFormType::M11_1 { a: 2.0, b: 0.5 }).unwrap();
        let c0 = linear_terms_cone(&[e[(0, 0)], e[(0, 1)], z, e[(1, 0)], e[(1, 1)], z, z, z, z], 3);
        assert_eq!(reduce_linear_terms(&c0).unwrap().case, LinearTermsCase::Zero);
        assert_case(&c0, case::L_I);

        let (a, b) = (r(0.3), r(0.2));
        for cc in [ONE, I, c(0.4, -2.0)] {
            let c2 = linear_terms_cone(&[a, b, o, b, cc, z, o, z, z], 3);
            assert_eq!(reduce_linear_terms(&c2).unwrap().case, LinearTermsCase::Z1Z3);
            assert_case(&c2, case::L_II);
            let c3 = linear_terms_cone(&[cc, b, z, b, a, o, z, o, z], 3);
            assert_eq!(reduce_linear_terms(&c3).unwrap().case, LinearTermsCase::Z2Z3);
            assert_case(&c3, case::L_III);
        }
        // C = 0: {z₁ = 0} lies in the cone
        let nm = linear_terms_cone(&[a, b, o, b, z, z, o, z, z], 3);
        assert!(matches!(find_good_slice(&nm, 16), SliceSearch::NoSliceFound { .. }));

        let c4 = linear_terms_cone(&[a, b, o, b, o, r(2.0), o, r(2.0), z], 3);
        assert_eq!(reduce_linear_terms(&c4).unwrap().case, LinearTermsCase::Dependent { c: r(0.5) });
        assert_case(&c4, case::L_IV);
        let c4i = linear_terms_cone(&[a, b, I, b, o, o, I, o, z], 3);
        match reduce_linear_terms(&c4i).unwrap().case {
            LinearTermsCase::Dependent { c: cr } => assert!((cr - I).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_case(&c4i, case::L_IV);

        let bb = r(0.7);
        #[rustfmt::skip]
        let c5 = linear_terms_cone(&[
            z, bb, o, z,
            bb, z, z, o,
            o, z, z, z,
            z, o, z, z,
        ], 4);
        assert_eq!(reduce_linear_terms(&c5).unwrap().case, LinearTermsCase::Independent);
        let res = assert_case(&c5, case::L_V);
        assert_eq!(res.slice.construction, Construction::CaseV);
        let kappa = -bb * 0.5 + I;
        let b1 = CVec::from_vec(vec![o, z, r(0.5), kappa]);
        let b2 = CVec::from_vec(vec![z, o, kappa, r(-0.5)]);
        let sstar = c5.pullback(&basis2(&b1, &b2));
        let sm = linalg::to_mat2(sstar.s());
        assert!((sm.determinant() - r(3.0)).norm() < 1e-12);
        assert!((reduction2::real_parts(&sm).0.determinant() + 1.0).abs() < 1e-12);
        assert!(check_det_test(&sm));
    }

    #[test]
    fn q_nonzero_and_one_zero_cases() {
        let (o, z, h) = (ONE, ZERO, r(0.5));
        let q = linear_terms_cone(&[z, z, z, z, z, z, z, z, o], 3);
        assert!(matches!(reduce_linear_terms(&q), Err(Error::QNotZero { .. })));
        assert_case(&q, case::Q_NONZERO);
        assert_case(&dense(&[h, z, z, z, o, z, z, z, z], &[1.0, 0.0, 0.0], 3), case::P10_L0);
        assert_case(&dense(&[z, h, z, h, z, h, z, h, z], &[1.0, 0.0, 0.0], 3), case::P10_DQ);
        assert_case(&dense(&[z, h, z, h, z, z, z, z, o], &[1.0, 0.0, 0.0], 3), case::P10_RADICAL);
        // q = 0: non-minimal
        let nm = dense(&[o, h, z, h, z, z, z, z, z], &[1.0, 0.0, 0.0], 3);
        assert!(matches!(find_good_slice(&nm, 8), SliceSearch::NoSliceFound { .. }));
    }

    #[test]
    fn two_sided_product_has_no_slice() {
        let prod = diagonal(&[r(0.5), r(1.0 / 3.0), ZERO], &[1.0, -1.0, 0.0]);
        assert!(matches!(find_good_slice(&prod, 32), SliceSearch::NoSliceFound { .. }));
    }

    #[test]
    fn restriction_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cone = crate::quadform::random_cone(&mut rng, 4);
        let b1 = linalg::random_cmat(&mut rng, 4, 3);
        let b2 = linalg::random_cmat(&mut rng, 3, 2);
        let lhs = cone.pullback(&b1).pullback(&b2);
        let rhs = cone.pullback(&(&b1 * &b2));
        assert!(linalg::max_abs(&(lhs.s() - rhs.s())) < 1e-10);
        assert!(linalg::max_abs(&(lhs.h() - rhs.h())) < 1e-10);
        let sl = Slice::new(linalg::random_cmat(&mut rng, 4, 2), Construction::Custom, case::RANDOM).unwrap();
        let rc = restrict(&cone, &sl).unwrap();
        for _ in 0..100 {
            let w = linalg::random_cvec(&mut rng, 2);
            let z = &sl.basis * &w;
            assert!((rc.evaluate(&w) - cone.evaluate(&z)).abs() < 1e-10 * (1.0 + w.norm_squared()));
        }
    }

    #[test]
    fn shear_coefficients() {
        // z₃ = αz₂ in Re(z₁² + z₂² + a z₂z₃ + b z₃²) + |z₁|² + |z₂|² + ε|z₃|²
        let (a, b, eps, alpha) = (0.7, -0.3, 1.0, 0.4);
        let (o, z) = (ONE, ZERO);
        let cone = dense(&[o, z, z, z, o, r(a / 2.0), z, r(a / 2.0), r(b)], &[1.0, 1.0, eps], 3);
        let bm = basis2(&unit_vec(3, 0), &CVec::from_vec(vec![z, o, r(alpha)]));
        let rc = cone.pullback(&bm);
        assert!((rc.s()[(1, 1)] - r(1.0 + alpha * a + alpha * alpha * b)).norm() < 1e-14);
        assert!((rc.h()[(1, 1)].re - (1.0 + eps * alpha * alpha)).abs() < 1e-14);
    }
}
