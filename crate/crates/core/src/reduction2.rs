//! 2×2 matrix reductions used by the n = 2 classifier.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, r, CMat2, RMat2, C64, I, ONE, ZERO};
use crate::tol;

/// `uᵀ S u = diag(d₁, d₂)` with `u` unitary and `d₁ ≥ d₂ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TakagiFactorization {
    pub u: CMat2,
    pub d: [f64; 2],
}

/// The SO(1,1) element `½[[σ, δ], [δ, σ]]` with `σ = τ + 1/τ`, `δ = τ − 1/τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So11Element {
    pub tau: f64,
    pub matrix: RMat2,
}

impl So11Element {
    pub fn new(tau: f64) -> Self {
        let sigma = tau + 1.0 / tau;
        let delta = tau - 1.0 / tau;
        Self {
            tau,
            matrix: RMat2::new(sigma, delta, delta, sigma) * 0.5,
        }
    }
}

/// `det S`, `det P`, `det Q` for `S = P + iQ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetInvariants {
    pub det_s: C64,
    pub det_p: f64,
    pub det_q: f64,
}

/// Shape of `gᵀ P g` returned by [`sl2_reduce_sym`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sl2Canonical {
    /// `sign · √(det P) · I`.
    Scalar { sign: f64, value: f64 },
    /// `value · diag(1, −1)`, `value = √(−det P) > 0`.
    Split { value: f64 },
    /// `sign · diag(1, 0)`.
    Rank1 { sign: f64 },
}

impl Sl2Canonical {
    pub fn matrix(&self) -> RMat2 {
        match *self {
            Sl2Canonical::Scalar { sign, value } => RMat2::identity() * (sign * value),
            Sl2Canonical::Split { value } => RMat2::new(value, 0.0, 0.0, -value),
            Sl2Canonical::Rank1 { sign } => RMat2::new(sign, 0.0, 0.0, 0.0),
        }
    }
}

/// The hermitian matrix of `Im(z₁ z̄₂)`.
pub fn h_e() -> CMat2 {
    CMat2::new(ZERO, c(0.0, 0.5), c(0.0, -0.5), ZERO)
}

/// The change of variables `[[1, i], [−i, −1]]` taking `Im(z₁z̄₂)` to `|z₁|² − |z₂|²`.
/// It squares to `2I`.
pub fn chofvar() -> CMat2 {
    CMat2::new(ONE, I, -I, -ONE)
}

fn sym_dev(s: &CMat2) -> f64 {
    (s[(0, 1)] - s[(1, 0)]).norm()
}

/// Takagi factorization of a complex symmetric 2×2 matrix.
///
/// The top singular vector comes from the real symmetric 4×4 embedding
/// `[[A, −B], [−B, −A]]` of `x ↦ S x̄` (`S = A + iB`); the second column is the
/// unitary complement, phase-corrected so its diagonal entry is real.
pub fn takagi2(s: &CMat2) -> Result<TakagiFactorization> {
    let scale = linalg::max_abs2(s);
    let dev = sym_dev(s);
    if dev > tol::SYMMETRY_REL * scale.max(f64::MIN_POSITIVE) && dev > 0.0 {
        return Err(Error::NotSymmetric { deviation: dev });
    }
    if scale == 0.0 {
        return Ok(TakagiFactorization {
            u: CMat2::identity(),
            d: [0.0, 0.0],
        });
    }
    let s = (s + s.transpose()) * r(0.5);
    let a = s.map(|z| z.re);
    let b = s.map(|z| z.im);
    let emb = nalgebra::Matrix4::new(
        a[(0, 0)],
        a[(0, 1)],
        -b[(0, 0)],
        -b[(0, 1)],
        a[(1, 0)],
        a[(1, 1)],
        -b[(1, 0)],
        -b[(1, 1)],
        -b[(0, 0)],
        -b[(0, 1)],
        -a[(0, 0)],
        -a[(0, 1)],
        -b[(1, 0)],
        -b[(1, 1)],
        -a[(1, 0)],
        -a[(1, 1)],
    );
    let eig = nalgebra::SymmetricEigen::new(emb);
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let mut x1 = nalgebra::Vector2::new(c(v[0], v[2]), c(v[1], v[3]));
    let nx = (x1[0].norm_sqr() + x1[1].norm_sqr()).sqrt();
    x1 /= r(nx);
    let mut x2 = nalgebra::Vector2::new(-x1[1].conj(), x1[0].conj());
    let phase = |x: &nalgebra::Vector2<C64>| {
        let val = (x.transpose() * s * x)[(0, 0)];
        if val.norm() > 0.0 {
            C64::from_polar(1.0, -0.5 * val.arg())
        } else {
            ONE
        }
    };
    x1 *= phase(&x1);
    x2 *= phase(&x2);
    let u = CMat2::from_columns(&[x1, x2]);
    let dm = u.transpose() * s * u;
    let d1 = dm[(0, 0)].re.max(0.0);
    let d2 = dm[(1, 1)].re.max(0.0);
    if d2 > d1 {
        // Only reachable through rounding when d1 == d2.
        let u = CMat2::from_columns(&[x2, x1]);
        return Ok(TakagiFactorization { u, d: [d2, d1] });
    }
    Ok(TakagiFactorization { u, d: [d1, d2] })
}

/// SL(2,ℝ) congruence bringing a nonzero real symmetric matrix to canonical shape.
pub fn sl2_reduce_sym(p: &RMat2) -> Result<(RMat2, Sl2Canonical)> {
    let norm = p.abs().max();
    if norm == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let (l1, l2, rot) = linalg::sym2_eigen(p);
    let det = l1 * l2;
    let thr = tol::DET_ZERO_REL * norm * norm;
    if det > thr {
        let s1 = (l2 / l1).abs().powf(0.25);
        let g = rot * RMat2::new(s1, 0.0, 0.0, 1.0 / s1);
        let canon = Sl2Canonical::Scalar {
            sign: l1.signum(),
            value: det.sqrt(),
        };
        Ok((g, canon))
    } else if det < -thr {
        let s1 = (l2 / l1).abs().powf(0.25);
        let g = rot * RMat2::new(s1, 0.0, 0.0, 1.0 / s1);
        Ok((g, Sl2Canonical::Split { value: (-det).sqrt() }))
    } else {
        // one eigenvalue is numerically zero
        let (big, rot) = if l1.abs() >= l2.abs() {
            (l1, rot)
        } else {
            (l2, rot * RMat2::new(0.0, -1.0, 1.0, 0.0))
        };
        let s1 = 1.0 / big.abs().sqrt();
        let g = rot * RMat2::new(s1, 0.0, 0.0, 1.0 / s1);
        Ok((g, Sl2Canonical::Rank1 { sign: big.signum() }))
    }
}

/// Positive roots of `a u² + b u + c = 0`.
fn positive_roots(a: f64, b: f64, c0: f64, scale: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if a.abs() <= 1e-14 * scale {
        if b.abs() > 1e-14 * scale {
            out.push(-c0 / b);
        }
    } else {
        let disc = (b * b - 4.0 * a * c0).max(0.0);
        let qq = -0.5 * (b + b.signum() * disc.sqrt());
        out.push(qq / a);
        if qq != 0.0 {
            out.push(c0 / qq);
        }
    }
    out.retain(|&u| u > 0.0 && u.is_finite());
    out
}

/// SO(1,1) congruence zeroing a diagonal entry of a real symmetric matrix
/// with `det Q ≤ 0`.
///
/// With `u = τ²`, the diagonal entries of `kᵀQk` satisfy
/// `4u·p' = u²(p+2q+r) + 2u(p−r) + (p−2q+r)` and
/// `4u·r' = u²(p+2q+r) − 2u(p−r) + (p−2q+r)`.
/// The positive root closest to `u = 1` (in log scale) is used.
pub fn so11_zero_diag(q: &RMat2) -> Result<(So11Element, RMat2)> {
    let norm = q.abs().max();
    let det = q.determinant();
    if det > tol::DET_ZERO_REL * norm * norm {
        return Err(Error::PositiveDeterminant { det });
    }
    if norm == 0.0 {
        return Ok((So11Element::new(1.0), *q));
    }
    let (p, qq, rr) = (q[(0, 0)], 0.5 * (q[(0, 1)] + q[(1, 0)]), q[(1, 1)]);
    let a = p + 2.0 * qq + rr;
    let cc = p - 2.0 * qq + rr;
    let mut cands = positive_roots(a, 2.0 * (p - rr), cc, norm);
    cands.extend(positive_roots(a, -2.0 * (p - rr), cc, norm));
    let best = cands.into_iter().min_by(|x, y| {
        x.ln()
            .abs()
            .total_cmp(&y.ln().abs())
            .then(x.total_cmp(y))
    });
    let Some(u) = best else {
        return Err(Error::NoZeroingElement);
    };
    let k = So11Element::new(u.sqrt());
    let qp = k.matrix.transpose() * q * k.matrix;
    Ok((k, qp))
}

/// Writes a preserver of `Im(z₁z̄₂)` as `e^{iθ} g`, `g ∈ SL(2,ℝ)`, `θ ∈ [0, π)`.
pub fn factor_preserver(k: &CMat2) -> Result<(f64, RMat2)> {
    let he = h_e();
    let dev = linalg::max_abs2(&(k.adjoint() * he * k - he));
    let scale = linalg::max_abs2(k).powi(2).max(1.0);
    if dev > 1e-10 * scale {
        return Err(Error::NotPreserver { deviation: dev });
    }
    let mut theta = 0.5 * k.determinant().arg();
    if theta < 0.0 {
        theta += PI;
    }
    if theta >= PI {
        theta -= PI;
    }
    let g = k * C64::from_polar(1.0, -theta);
    let imag = g.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    if imag > 1e-10 * linalg::max_abs2(k).max(1.0) {
        return Err(Error::NotPreserver { deviation: imag });
    }
    Ok((theta, g.map(|z| z.re)))
}

pub fn real_parts(s: &CMat2) -> (RMat2, RMat2) {
    (s.map(|z| z.re), s.map(|z| z.im))
}

pub fn det_invariants(s: &CMat2) -> DetInvariants {
    let (p, q) = real_parts(s);
    DetInvariants {
        det_s: s.determinant(),
        det_p: p.determinant(),
        det_q: q.determinant(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn rand_sym<R: Rng>(rng: &mut R) -> CMat2 {
        let a = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let b = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let d = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
        CMat2::new(a, b, b, d)
    }

    fn check_takagi(s: &CMat2) -> TakagiFactorization {
        let t = takagi2(s).unwrap();
        let norm = linalg::max_abs2(s).max(1e-300);
        let diag = CMat2::new(r(t.d[0]), ZERO, ZERO, r(t.d[1]));
        assert!(linalg::max_abs2(&(t.u.transpose() * s * t.u - diag)) <= 1e-10 * norm);
        assert!(linalg::max_abs2(&(t.u.adjoint() * t.u - CMat2::identity())) <= 1e-12);
        assert!(t.d[0] >= t.d[1] && t.d[1] >= 0.0);
        // oracle: singular values from the SVD
        let sv = s.svd(false, false).singular_values;
        let (s1, s2) = (sv[0].max(sv[1]), sv[0].min(sv[1]));
        assert!((t.d[0] - s1).abs() <= 1e-10 * norm);
        assert!((t.d[1] - s2).abs() <= 1e-10 * norm);
        t
    }

    #[test]
    fn takagi_examples() {
        let t = check_takagi(&CMat2::new(r(0.5), ZERO, ZERO, r(1.0 / 3.0)));
        assert!((t.d[0] - 0.5).abs() < 1e-15 && (t.d[1] - 1.0 / 3.0).abs() < 1e-15);
        let t = takagi2(&CMat2::zeros()).unwrap();
        assert_eq!(t.d, [0.0, 0.0]);
        assert_eq!(t.u, CMat2::identity());
        let t = check_takagi(&CMat2::new(ZERO, ONE, ONE, ZERO));
        assert!((t.d[0] - 1.0).abs() < 1e-12 && (t.d[1] - 1.0).abs() < 1e-12);
        check_takagi(&CMat2::new(I, ZERO, ZERO, I * 3.0));
        check_takagi(&CMat2::new(ONE, I, I, -ONE));
    }

    #[test]
    fn takagi_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            check_takagi(&rand_sym(&mut rng));
        }
    }

    #[test]
    fn takagi_rejects_asymmetric() {
        assert!(matches!(
            takagi2(&CMat2::new(ONE, ONE, ZERO, ONE)),
            Err(Error::NotSymmetric { .. })
        ));
    }

    fn check_sl2(p: &RMat2) -> Sl2Canonical {
        let (g, canon) = sl2_reduce_sym(p).unwrap();
        let norm = p.abs().max();
        assert!((g.determinant() - 1.0).abs() <= 1e-12);
        assert!((g.transpose() * p * g - canon.matrix()).abs().max() <= 1e-10 * norm);
        canon
    }

    #[test]
    fn sl2_examples() {
        assert_eq!(
            check_sl2(&RMat2::new(2.0, 0.0, 0.0, 2.0)),
            Sl2Canonical::Scalar { sign: 1.0, value: 2.0 }
        );
        match check_sl2(&RMat2::new(1.0, 0.0, 0.0, -4.0)) {
            Sl2Canonical::Split { value } => assert!((value - 2.0).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            check_sl2(&RMat2::new(1.0, 1.0, 1.0, 1.0)),
            Sl2Canonical::Rank1 { sign: 1.0 }
        );
        assert_eq!(
            check_sl2(&RMat2::new(0.0, 0.0, 0.0, -3.0)),
            Sl2Canonical::Rank1 { sign: -1.0 }
        );
        match check_sl2(&RMat2::new(-1.0, 0.5, 0.5, -2.0)) {
            Sl2Canonical::Scalar { sign, .. } => assert_eq!(sign, -1.0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(sl2_reduce_sym(&RMat2::zeros()), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn so11_examples() {
        let (k, qp) = so11_zero_diag(&RMat2::new(0.0, 0.0, 0.0, 5.0)).unwrap();
        assert!((k.tau - 1.0).abs() < 1e-12);
        assert!((qp - RMat2::new(0.0, 0.0, 0.0, 5.0)).abs().max() < 1e-12);

        let q = RMat2::new(2.0, 0.0, 0.0, -1.0);
        let (k, qp) = so11_zero_diag(&q).unwrap();
        assert!(qp[(0, 0)].abs().min(qp[(1, 1)].abs()) < 1e-12);
        assert!((qp.determinant() + 2.0).abs() < 1e-10);
        let hyp = RMat2::new(1.0, 0.0, 0.0, -1.0);
        assert!((k.matrix.transpose() * hyp * k.matrix - hyp).abs().max() < 1e-12);
        // oracle: dense scan of p'(τ)·r'(τ) sign changes over τ ∈ (0, 10]
        let diag_prod = |tau: f64| {
            let m = So11Element::new(tau).matrix;
            let d = m.transpose() * q * m;
            d[(0, 0)] * d[(1, 1)]
        };
        let mut roots = Vec::new();
        let mut prev = diag_prod(1e-3);
        for i in 1..=100_000 {
            let tau = 1e-3 + i as f64 * 1e-4;
            let cur = diag_prod(tau);
            if prev.signum() != cur.signum() {
                roots.push(tau);
            }
            prev = cur;
        }
        assert!(roots.iter().any(|t| (t - k.tau).abs() < 2e-4), "{roots:?} vs {}", k.tau);
        // u = 3 − 2√2 is the root closest to 1 in log scale (tie with 3 + 2√2)
        assert!((k.tau * k.tau - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);

        let (k, _) = so11_zero_diag(&RMat2::new(0.0, 3.0, 3.0, 0.0)).unwrap();
        assert!((k.tau - 1.0).abs() < 1e-12);
        assert!(matches!(
            so11_zero_diag(&RMat2::identity()),
            Err(Error::PositiveDeterminant { .. })
        ));
        assert!(matches!(
            so11_zero_diag(&RMat2::new(1.0, -1.0, -1.0, 1.0)),
            Err(Error::NoZeroingElement)
        ));
    }

    #[test]
    fn so11_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 500 {
            let p: f64 = rng.sample(StandardNormal);
            let q: f64 = rng.sample(StandardNormal);
            let s: f64 = rng.sample(StandardNormal);
            let m = RMat2::new(p, q, q, s);
            if m.determinant() > 0.0 {
                continue;
            }
            done += 1;
            let norm = m.abs().max();
            let (_, qp) = so11_zero_diag(&m).unwrap();
            assert!(qp[(0, 0)].abs().min(qp[(1, 1)].abs()) <= 1e-8 * norm);
            assert!((qp.determinant() - m.determinant()).abs() <= 1e-10 * norm * norm);
        }
    }

    #[test]
    fn preserver_examples() {
        let (t, g) = factor_preserver(&CMat2::identity()).unwrap();
        assert_eq!(t, 0.0);
        assert!((g - RMat2::identity()).abs().max() < 1e-15);
        let k = CMat2::identity() * C64::from_polar(1.0, PI / 4.0);
        let (t, g) = factor_preserver(&k).unwrap();
        assert!((t - PI / 4.0).abs() < 1e-14);
        assert!((g - RMat2::identity()).abs().max() < 1e-14);
        assert!(matches!(
            factor_preserver(&CMat2::new(r(2.0), ZERO, ZERO, ONE)),
            Err(Error::NotPreserver { .. })
        ));
    }

    #[test]
    fn preserver_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let cc: f64 = rng.sample(StandardNormal);
            let d = if a.abs() > 1e-3 { (1.0 + b * cc) / a } else { continue };
            let g0 = RMat2::new(a, b, cc, d);
            let th0: f64 = rng.random_range(0.0..2.0 * PI);
            let k = g0.map(r) * C64::from_polar(1.0, th0);
            let (th, g) = factor_preserver(&k).unwrap();
            let back = g.map(r) * C64::from_polar(1.0, th);
            assert!(linalg::max_abs2(&(back - k)) <= 1e-10 * linalg::max_abs2(&k).max(1.0));
            assert!((g.determinant() - 1.0).abs() < 1e-9 * g.abs().max().powi(2));
            let diff = (th - th0).rem_euclid(PI);
            assert!(diff < 1e-9 || PI - diff < 1e-9);
        }
    }

    #[test]
    fn chofvar_maps_frames() {
        let cm = chofvar();
        let d = cm.adjoint() * h_e() * cm;
        let want = CMat2::new(ONE, ZERO, ZERO, -ONE);
        assert!(linalg::max_abs2(&(d - want)) < 1e-15);
        assert!(linalg::max_abs2(&(cm * cm - CMat2::identity() * r(2.0))) < 1e-15);
    }

    #[test]
    fn det_invariant_examples() {
        let a = c(3.0, 4.0);
        let inv = det_invariants(&CMat2::new(a, ZERO, ZERO, a.conj()));
        assert!((inv.det_s - r(25.0)).norm() < 1e-12);
        assert!((inv.det_p - 9.0).abs() < 1e-12);
        assert!((inv.det_q + 16.0).abs() < 1e-12);
        let z = det_invariants(&CMat2::zeros());
        assert_eq!((z.det_s, z.det_p, z.det_q), (ZERO, 0.0, 0.0));
    }

    #[test]
    fn det_invariant_identity_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let s = rand_sym(&mut rng);
            let inv = det_invariants(&s);
            let (p, q) = real_parts(&s);
            let im = q[(0, 0)] * p[(1, 1)] + p[(0, 0)] * q[(1, 1)] - 2.0 * q[(0, 1)] * p[(0, 1)];
            let want = c(inv.det_p - inv.det_q, im);
            assert!((inv.det_s - want).norm() < 1e-12 * (1.0 + want.norm()));

            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let g = RMat2::new(a, b, 0.3, (1.0 + 0.3 * b) / a).map(r);
            // the preserver e^{iπ/2}·g acts as S ↦ e^{iπ} gᵀSg
            let k = g * I;
            let s2 = k.transpose() * s * k;
            let inv2 = det_invariants(&s2);
            let tol = 1e-8 * (1.0 + linalg::max_abs2(&s2).powi(2));
            assert!((inv2.det_s - inv.det_s).norm() < tol);
            assert!((inv2.det_p - inv.det_p).abs() < tol);
            assert!((inv2.det_q - inv.det_q).abs() < tol);
        }
    }
}
