//! Real quadratic forms on ℂⁿ.
//!
//! A form is stored as `ρ(z) = Re(zᵀ S z) + z* H z` with `S` complex symmetric
//! (harmonic part) and `H` hermitian (hermitian part). The decomposition of a
//! real quadratic polynomial into this shape is unique.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, hdot, r, vnorm, CMat, CVec, C64, ZERO};
use crate::tol;

/// A real variable `x_k` or `y_k` (1-based), with `z_k = x_k + i y_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealVar {
    X(usize),
    Y(usize),
}

impl RealVar {
    /// Position in the real coordinate vector `(x1..xn, y1..yn)`.
    pub fn slot(self, n: usize) -> usize {
        match self {
            RealVar::X(k) => k - 1,
            RealVar::Y(k) => n + k - 1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            RealVar::X(k) | RealVar::Y(k) => k,
        }
    }
}

impl FromStr for RealVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownVariable(s.to_string());
        let (head, tail) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
        let k: usize = tail.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match head {
            "x" | "X" => Ok(RealVar::X(k)),
            "y" | "Y" => Ok(RealVar::Y(k)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for RealVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealVar::X(k) => write!(f, "x{k}"),
            RealVar::Y(k) => write!(f, "y{k}"),
        }
    }
}

/// One monomial `coeff · Π vars` of a polynomial in the real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub vars: Vec<RealVar>,
    pub coeff: C64,
}

impl Term {
    pub fn new(vars: &[RealVar], coeff: f64) -> Self {
        Self {
            vars: vars.to_vec(),
            coeff: r(coeff),
        }
    }
}

/// A real quadratic form on ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCone {
    n: usize,
    s: CMat,
    h: CMat,
}

/// Signature of the hermitian part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianSignature {
    pub pi: usize,
    pub nu: usize,
}

/// Inertia of ρ as a real quadratic form on ℝ²ⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSignature {
    pub p: usize,
    pub q: usize,
}

/// A point on the cone together with `|ρ(point)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSample {
    pub point: CVec,
    pub residual: f64,
}

impl QuadraticCone {
    /// Builds a cone from its harmonic and hermitian parts.
    ///
    /// Rejects inputs that are not symmetric/hermitian within
    /// [`tol::SYMMETRY_REL`]; the stored matrices are exactly symmetrized.
    pub fn new(s: CMat, h: CMat) -> Result<Self> {
        let (cone, ds, dh) = Self::symmetrized(s, h)?;
        let scale_s = linalg::fro(&cone.s).max(f64::MIN_POSITIVE);
        let scale_h = linalg::fro(&cone.h).max(f64::MIN_POSITIVE);
        if ds > tol::SYMMETRY_REL * scale_s && ds > 0.0 {
            return Err(Error::NotSymmetric { deviation: ds });
        }
        if dh > tol::SYMMETRY_REL * scale_h && dh > 0.0 {
            return Err(Error::NotHermitian { deviation: dh });
        }
        Ok(cone)
    }

    /// Symmetrizes `S` and hermitizes `H` unconditionally. Returns the cone
    /// and the largest entry change made to each matrix.
    pub fn symmetrized(s: CMat, h: CMat) -> Result<(Self, f64, f64)> {
        let n = s.nrows();
        if n < 2 || s.ncols() != n || h.nrows() != n || h.ncols() != n {
            return Err(Error::Dimension(format!(
                "S is {}x{}, H is {}x{}; need square n x n with n >= 2",
                s.nrows(),
                s.ncols(),
                h.nrows(),
                h.ncols()
            )));
        }
        if s.iter().chain(h.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        let s2 = (&s + s.transpose()).map(|z| z * 0.5);
        let h2 = (&h + h.adjoint()).map(|z| z * 0.5);
        let ds = linalg::max_abs(&(&s2 - &s));
        let dh = linalg::max_abs(&(&h2 - &h));
        Ok((Self { n, s: s2, h: h2 }, ds, dh))
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            s: CMat::zeros(n, n),
            h: CMat::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    /// `‖S‖_F + ‖H‖_F`, the scale used by relative tolerances.
    pub fn norm(&self) -> f64 {
        linalg::fro(&self.s) + linalg::fro(&self.h)
    }

    pub fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }

    /// ρ(z).
    pub fn evaluate(&self, z: &CVec) -> f64 {
        let sz = &self.s * z;
        let hz = &self.h * z;
        linalg::bdot(z, &sz).re + hdot(z, &hz).re
    }

    /// The real polar form `B(u, v)` with `B(z, z) = ρ(z)`.
    pub fn polar(&self, u: &CVec, v: &CVec) -> f64 {
        let sv = &self.s * v;
        let hv = &self.h * v;
        linalg::bdot(u, &sv).re + 0.5 * (hdot(u, &hv).re + hdot(v, &(&self.h * u)).re)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            n: self.n,
            s: self.s.map(|z| z * k),
            h: self.h.map(|z| z * k),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Pulls the form back along `z = T w`: `S → TᵀST`, `H → T*HT`.
    ///
    /// `T` may be rectangular (n × m), giving a form on ℂᵐ.
    pub fn pullback(&self, t: &CMat) -> Self {
        let s = t.transpose() * &self.s * t;
        let h = t.adjoint() * &self.h * t;
        let m = t.ncols();
        let s = (&s + s.transpose()).map(|z| z * 0.5);
        let h = (&h + h.adjoint()).map(|z| z * 0.5);
        Self { n: m, s, h }
    }

    /// The real symmetric 2n×2n matrix `G` with `ρ(x + iy) = (x,y)ᵀ G (x,y)`.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let p = self.s.map(|z| z.re);
        let q = self.s.map(|z| z.im);
        let rr = self.h.map(|z| z.re);
        let k = self.h.map(|z| z.im);
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        let qk = &q + &k;
        g.view_mut((0, 0), (n, n)).copy_from(&(&p + &rr));
        g.view_mut((n, n), (n, n)).copy_from(&(&rr - &p));
        g.view_mut((0, n), (n, n)).copy_from(&(-&qk));
        g.view_mut((n, 0), (n, n)).copy_from(&(-qk.transpose()));
        g
    }

    /// Inverse of [`Self::real_matrix`]; `g` is symmetrized first.
    pub fn from_real_matrix(g: &DMatrix<f64>) -> Result<Self> {
        if g.nrows() != g.ncols() || !g.nrows().is_multiple_of(2) || g.nrows() < 4 {
            return Err(Error::Dimension(format!(
                "real matrix is {}x{}; need 2n x 2n with n >= 2",
                g.nrows(),
                g.ncols()
            )));
        }
        let n = g.nrows() / 2;
        let g = (g + g.transpose()) * 0.5;
        let gxx = g.view((0, 0), (n, n));
        let gyy = g.view((n, n), (n, n));
        let gxy = g.view((0, n), (n, n));
        let p = (gxx - gyy) * 0.5;
        let rr = (gxx + gyy) * 0.5;
        let q = -(gxy + gxy.transpose()) * 0.5;
        let k = -(gxy - gxy.transpose()) * 0.5;
        let s = CMat::from_fn(n, n, |i, j| c(p[(i, j)], q[(i, j)]));
        let h = CMat::from_fn(n, n, |i, j| c(rr[(i, j)], k[(i, j)]));
        Ok(Self { n, s, h })
    }

    /// Renders ρ as a list of real monomials in `x1..xn, y1..yn`.
    pub fn to_terms(&self) -> Vec<Term> {
        let g = self.real_matrix();
        let n = self.n;
        let var = |slot: usize| {
            if slot < n {
                RealVar::X(slot + 1)
            } else {
                RealVar::Y(slot - n + 1)
            }
        };
        let mut terms = Vec::new();
        for a in 0..2 * n {
            for b in a..2 * n {
                let coeff = if a == b { g[(a, a)] } else { 2.0 * g[(a, b)] };
                if coeff != 0.0 {
                    terms.push(Term::new(&[var(a), var(b)], coeff));
                }
            }
        }
        terms
    }

    /// Hermitian signature with eigenvalue threshold `rel · ‖H‖₂`.
    pub fn hermitian_signature(&self, rel: f64) -> HermitianSignature {
        let (vals, _) = linalg::herm_eigen(&self.h);
        let thr = rel * linalg::spectral_radius(&vals);
        let (pi, nu) = linalg::inertia(&vals, thr);
        HermitianSignature { pi, nu }
    }

    /// Real signature with eigenvalue threshold `rel · ‖G‖₂`.
    pub fn real_signature(&self, rel: f64) -> RealSignature {
        let (vals, _) = linalg::sym_eigen(&self.real_matrix());
        let thr = rel * linalg::spectral_radius(&vals);
        let (p, q) = linalg::inertia(&vals, thr);
        RealSignature { p, q }
    }

    /// Returns `(±ρ, ±1)` so that the hermitian signature has `π ≥ ν`.
    /// Ties keep the input sign.
    pub fn canonical_sign(&self) -> (Self, i8) {
        let sig = self.hermitian_signature(tol::ZERO_EIGEN_REL);
        if sig.nu > sig.pi {
            (self.negated(), -1)
        } else {
            (self.clone(), 1)
        }
    }

    /// Residual bound for a sample at `z`.
    pub fn sample_bound(&self, z: &CVec, rel: f64) -> f64 {
        rel * vnorm(z).powi(2) * self.norm().max(f64::MIN_POSITIVE)
    }

    /// Deterministic sampling of points on `{ρ = 0}` with `|z| <= radius`.
    ///
    /// Each attempt draws a random real 2-plane `{u + t v}` and keeps the real
    /// roots of `ρ(u + t v) = 0`; accepted points are rescaled to a uniform
    /// random radius in `(0, radius]`.
    pub fn sample_cone(&self, seed: u64, count: usize, radius: f64) -> Result<Vec<ConeSample>> {
        if count == 0 || radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidArgument(
                "sample_cone needs count >= 1 and radius > 0".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = 20 * count + 1000;
        let mut out = Vec::with_capacity(count);
        let norm = self.norm();
        for _ in 0..budget {
            if out.len() == count {
                break;
            }
            let u = linalg::random_cvec(&mut rng, self.n);
            let v = linalg::random_cvec(&mut rng, self.n);
            let a = self.evaluate(&v);
            let b = self.polar(&u, &v);
            let c0 = self.evaluate(&u);
            let scale = norm * (vnorm(&u) + vnorm(&v)).powi(2);
            let mut roots: Vec<f64> = Vec::with_capacity(2);
            if a.abs() <= 1e-14 * scale {
                if b.abs() > 1e-14 * scale {
                    roots.push(-c0 / (2.0 * b));
                } else if c0.abs() <= 1e-14 * scale {
                    roots.push(0.0);
                }
            } else {
                let disc = b * b - a * c0;
                if disc >= 0.0 {
                    let qq = -(b + b.signum() * disc.sqrt());
                    roots.push(qq / a);
                    if qq != 0.0 {
                        roots.push(c0 / qq);
                    }
                }
            }
            for t in roots {
                if out.len() == count {
                    break;
                }
                let z: CVec = &u + &v * r(t);
                let nz = vnorm(&z);
                if nz == 0.0 || !nz.is_finite() {
                    continue;
                }
                let rad = radius * (1.0 - rng.random::<f64>());
                let z = z * r(rad / nz);
                let residual = self.evaluate(&z).abs();
                if residual <= self.sample_bound(&z, tol::SAMPLE_RESIDUAL_REL) || norm == 0.0 {
                    out.push(ConeSample { point: z, residual });
                }
            }
        }
        if out.len() < count {
            return Err(Error::InsufficientSamples {
                requested: count,
                found: out.len(),
            });
        }
        Ok(out)
    }
}

/// Decomposes a homogeneous real quadratic polynomial in the real coordinates.
///
/// The dimension is the largest variable index, or `n` when given.
pub fn decompose(terms: &[Term], n: Option<usize>) -> Result<QuadraticCone> {
    let mut dim = n.unwrap_or(0);
    for (index, t) in terms.iter().enumerate() {
        if t.vars.len() != 2 {
            return Err(Error::NonHomogeneous {
                index,
                degree: t.vars.len(),
            });
        }
        if t.coeff.im != 0.0 {
            return Err(Error::NonReal {
                index,
                coeff: t.coeff,
            });
        }
        for v in &t.vars {
            if n.is_some_and(|n| v.index() > n) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
            dim = dim.max(v.index());
        }
    }
    let dim = dim.max(2);
    let mut g = DMatrix::<f64>::zeros(2 * dim, 2 * dim);
    for t in terms {
        let a = t.vars[0].slot(dim);
        let b = t.vars[1].slot(dim);
        if a == b {
            g[(a, a)] += t.coeff.re;
        } else {
            g[(a, b)] += 0.5 * t.coeff.re;
            g[(b, a)] += 0.5 * t.coeff.re;
        }
    }
    QuadraticCone::from_real_matrix(&g)
}

/// Diagonal cone `Re(Σ s_k z_k²) + Σ h_k |z_k|²`.
pub fn diagonal(s: &[C64], h: &[f64]) -> QuadraticCone {
    let n = s.len();
    let sm = CMat::from_fn(n, n, |i, j| if i == j { s[i] } else { ZERO });
    let hm = CMat::from_fn(n, n, |i, j| if i == j { r(h[i]) } else { ZERO });
    QuadraticCone::new(sm, hm).expect("diagonal matrices are symmetric")
}

/// Random cone with iid gaussian entries (symmetrized), for tests.
pub fn random_cone<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuadraticCone {
    let s = linalg::random_cmat(rng, n, n);
    let h = linalg::random_cmat(rng, n, n);
    QuadraticCone::symmetrized(s, h).expect("square").0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn example_m() -> QuadraticCone {
        diagonal(&[r(0.5), r(1.0 / 3.0)], &[1.0, -1.0])
    }

    fn z2(a: C64, b: C64) -> CVec {
        CVec::from_vec(vec![a, b])
    }

    #[test]
    fn decompose_example_m() {
        // Re(½z1² + ⅓z2²) + |z1|² − |z2|²
        use RealVar::*;
        let terms = vec![
            Term::new(&[X(1), X(1)], 0.5 + 1.0),
            Term::new(&[Y(1), Y(1)], -0.5 + 1.0),
            Term::new(&[X(2), X(2)], 1.0 / 3.0 - 1.0),
            Term::new(&[Y(2), Y(2)], -1.0 / 3.0 - 1.0),
        ];
        let cone = decompose(&terms, None).unwrap();
        let m = example_m();
        assert!(linalg::max_abs(&(cone.s() - m.s())) < 1e-15);
        assert!(linalg::max_abs(&(cone.h() - m.h())) < 1e-15);
    }

    #[test]
    fn decompose_zero_and_hermitian() {
        let z = decompose(&[], Some(2)).unwrap();
        assert!(z.is_zero());
        use RealVar::*;
        let t = vec![Term::new(&[X(1), X(1)], 1.0), Term::new(&[Y(1), Y(1)], 1.0)];
        let cone = decompose(&t, Some(3)).unwrap();
        assert_eq!(cone.n(), 3);
        assert!(linalg::max_abs(cone.s()) < 1e-15);
        assert!((cone.h()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(linalg::fro(cone.h()) - 1.0 < 1e-15);
    }

    #[test]
    fn decompose_errors() {
        use RealVar::*;
        let bad = vec![Term::new(&[X(1)], 1.0)];
        assert!(matches!(
            decompose(&bad, None),
            Err(Error::NonHomogeneous { degree: 1, .. })
        ));
        let bad = vec![Term {
            vars: vec![X(1), Y(1)],
            coeff: c(1.0, 1.0),
        }];
        assert!(matches!(decompose(&bad, None), Err(Error::NonReal { .. })));
    }

    #[test]
    fn mixed_term_maps_to_imaginary_parts() {
        // x1 y2 − y1 x2 = Im(conj(z1) z2), so H = [[0, i/2], [−i/2, 0]] up to sign.
        use RealVar::*;
        let t = vec![Term::new(&[X(1), Y(2)], -1.0), Term::new(&[Y(1), X(2)], 1.0)];
        let cone = decompose(&t, None).unwrap();
        let z = z2(c(0.3, -0.7), c(1.1, 0.4));
        let want = (z[0] * z[1].conj()).im;
        assert!((cone.evaluate(&z) - want).abs() < 1e-14);
        assert!((cone.h()[(0, 1)] - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_example_m() {
        let m = example_m();
        assert!((m.evaluate(&z2(ONE, ZERO)) - 1.5).abs() < 1e-15);
        assert!((m.evaluate(&z2(ZERO, ONE)) + 2.0 / 3.0).abs() < 1e-15);
        let z = z2(c(0.2, 0.9), c(-0.4, 0.1));
        let t = 2.5;
        assert!((m.evaluate(&(&z * r(t))) - t * t * m.evaluate(&z)).abs() < 1e-13);
    }

    #[test]
    fn signatures() {
        let m = example_m();
        assert_eq!(m.hermitian_signature(1e-9), HermitianSignature { pi: 1, nu: 1 });
        // brute-force oracle: count sign changes of the 4x4 real matrix eigenvalues
        let g = m.real_matrix();
        let eig = nalgebra::SymmetricEigen::new(g.clone());
        let p = eig.eigenvalues.iter().filter(|&&v| v > 1e-9).count();
        let q = eig.eigenvalues.iter().filter(|&&v| v < -1e-9).count();
        assert_eq!(m.real_signature(1e-9), RealSignature { p, q });
        assert_eq!((p, q), (2, 2));

        let re2 = diagonal(&[ONE, ONE], &[0.0, 0.0]);
        assert_eq!(re2.real_signature(1e-9), RealSignature { p: 2, q: 2 });
        let pos = diagonal(&[ZERO, ZERO], &[1.0, 1.0]);
        assert_eq!(pos.real_signature(1e-9), RealSignature { p: 4, q: 0 });

        let he = CMat::from_row_slice(2, 2, &[ZERO, c(0.0, 0.5), c(0.0, -0.5), ZERO]);
        let e = QuadraticCone::new(CMat::zeros(2, 2), he).unwrap();
        assert_eq!(e.hermitian_signature(1e-9), HermitianSignature { pi: 1, nu: 1 });
        assert_eq!(
            QuadraticCone::zero(2).hermitian_signature(1e-9),
            HermitianSignature { pi: 0, nu: 0 }
        );
    }

    #[test]
    fn canonical_sign_cases() {
        let neg = diagonal(&[ONE, ZERO], &[-1.0, -1.0]);
        let (c1, s1) = neg.canonical_sign();
        assert_eq!(s1, -1);
        assert_eq!(c1.hermitian_signature(1e-9).pi, 2);
        let (_, s2) = example_m().canonical_sign();
        assert_eq!(s2, 1);
        let (_, s3) = diagonal(&[ONE, ZERO], &[0.0, 0.0]).canonical_sign();
        assert_eq!(s3, 1);
    }

    #[test]
    fn samples_lie_on_cone() {
        let m = example_m();
        let pts = m.sample_cone(42, 1000, 1.0).unwrap();
        assert_eq!(pts.len(), 1000);
        for p in &pts {
            let nz = vnorm(&p.point);
            assert!(nz <= 1.0 + 1e-12);
            assert!(p.residual <= 1e-10 * nz * nz);
        }
        let again = m.sample_cone(42, 1000, 1.0).unwrap();
        assert_eq!(pts, again);

        let re2 = diagonal(&[ONE, ONE], &[0.0, 0.0]);
        for p in re2.sample_cone(7, 200, 1.0).unwrap() {
            let z = &p.point;
            let v = z[0].re.powi(2) - z[0].im.powi(2) + z[1].re.powi(2) - z[1].im.powi(2);
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn point_cone_has_no_samples() {
        let pos = diagonal(&[ZERO, ZERO], &[1.0, 1.0]);
        assert!(matches!(
            pos.sample_cone(1, 10, 1.0),
            Err(Error::InsufficientSamples { found: 0, .. })
        ));
    }

    #[test]
    fn rejects_asymmetric() {
        let s = CMat::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(
            QuadraticCone::new(s, CMat::zeros(2, 2)),
            Err(Error::NotSymmetric { .. })
        ));
        let h = CMat::from_row_slice(2, 2, &[ONE, I, I, ONE]);
        assert!(matches!(
            QuadraticCone::new(CMat::zeros(2, 2), h),
            Err(Error::NotHermitian { .. })
        ));
    }

    use crate::linalg::I;

    #[test]
    fn var_parsing() {
        assert_eq!("x3".parse::<RealVar>().unwrap(), RealVar::X(3));
        assert_eq!("y12".parse::<RealVar>().unwrap(), RealVar::Y(12));
        assert!("z1".parse::<RealVar>().is_err());
        assert!("x0".parse::<RealVar>().is_err());
        assert!("x".parse::<RealVar>().is_err());
    }
}
