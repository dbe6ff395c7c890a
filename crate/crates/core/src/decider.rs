//! One-sided vs two-sided verdicts for n = 2 cones, with checkable witnesses.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, r, vnorm, CMat, CMat2, CVec, C64, I, ONE, ZERO};
use crate::normalform2::{DegeneracyReport, NormalFormResult, NormalFormType};
use crate::quadform::{diagonal, QuadraticCone};
use crate::tol;

/// Which side `Ω^± = {±ρ > 0}` a disc family lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn from_sign(s: f64) -> Self {
        if s >= 0.0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

/// Shape of the discs `D_ε`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscKind {
    /// `{zᵀ C z = ε}`.
    LevelSet { c: CMat2 },
    /// `{ℓ(z) = shift · ε}`.
    AffineLine { ell: CVec, shift: C64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscFamily {
    pub kind: DiscKind,
    pub side: Side,
    /// Sampled disc points satisfy `|z| ≤ radius`.
    pub radius: f64,
}

/// A complex hyperplane `{ℓ(z) = 0}` through the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub ell: CVec,
}

impl Hyperplane {
    pub fn new(ell: &[C64]) -> Self {
        Self {
            ell: CVec::from_column_slice(ell),
        }
    }

    pub fn eval(&self, z: &CVec) -> C64 {
        linalg::bdot(&self.ell, z)
    }

    /// Orthonormal basis of the hyperplane.
    pub fn basis(&self) -> CMat {
        let row = CMat::from_row_slice(1, self.ell.len(), self.ell.as_slice());
        linalg::null_space(&row, 1e-12)
    }

    /// `{ℓ(T⁻¹ z) = 0}`.
    fn pushed(&self, tinv: &CMat) -> Self {
        Self {
            ell: (self.ell.transpose() * tinv).transpose(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportKind {
    TwoSidedProper,
    /// Both hypersurfaces lie inside the cone.
    NonMinimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportWitness {
    pub aplus: Hyperplane,
    pub aminus: Hyperplane,
    pub kind: SupportKind,
    /// `(λ₁, λ₂)` for the lines `z₂ = e^{iλ}z₁` of `M11_2`.
    pub angles: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    OneSided { side: Side, family: DiscFamily },
    TwoSided { witness: SupportWitness },
    Degenerate { report: DegeneracyReport },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::OneSided { .. } => "OneSided",
            Verdict::TwoSided { .. } => "TwoSided",
            Verdict::Degenerate { .. } => "Degenerate",
        }
    }
}

/// Outcome of the decision table, before witnesses are attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableOutcome {
    OneSided(Side),
    TwoSided(SupportKind),
}

/// The decision table as a pure function of the type and parameters.
pub fn table_outcome(nt: &NormalFormType) -> TableOutcome {
    let bnd = tol::BOUNDARY;
    match *nt {
        NormalFormType::M20 { .. } | NormalFormType::M10_1 { .. } => TableOutcome::OneSided(Side::Plus),
        NormalFormType::M11_1 { a, b } => {
            if (a - b).abs() <= bnd * (1.0 + a) {
                TableOutcome::TwoSided(SupportKind::NonMinimal)
            } else if a <= 1.0 + bnd {
                TableOutcome::TwoSided(SupportKind::TwoSidedProper)
            } else {
                TableOutcome::OneSided(Side::Minus)
            }
        }
        NormalFormType::M11_2 { .. } => TableOutcome::TwoSided(SupportKind::TwoSidedProper),
        NormalFormType::M11_3 | NormalFormType::M10_2 | NormalFormType::M00_1 => {
            TableOutcome::TwoSided(SupportKind::NonMinimal)
        }
    }
}

/// Disc family in normal-form coordinates.
pub fn build_disc_family(nt: &NormalFormType) -> Result<DiscFamily> {
    let d = |a: f64, b: f64| CMat2::new(r(a), ZERO, ZERO, r(b));
    let fam = |kind, side| DiscFamily {
        kind,
        side,
        radius: 1.0,
    };
    match (*nt, table_outcome(nt)) {
        (NormalFormType::M20 { a, b }, _) => Ok(fam(DiscKind::LevelSet { c: d(a, b) }, Side::Plus)),
        (NormalFormType::M10_1 { a }, _) => Ok(fam(DiscKind::LevelSet { c: d(a, 1.0) }, Side::Plus)),
        (NormalFormType::M11_1 { a, b }, TableOutcome::OneSided(_)) => {
            if b < 1.0 - tol::BOUNDARY {
                // ρ(iε, z₂) = (1 − A)ε² + Re(B z₂²) − |z₂|² < 0
                Ok(fam(
                    DiscKind::AffineLine {
                        ell: CVec::from_vec(vec![ONE, ZERO]),
                        shift: I,
                    },
                    Side::Minus,
                ))
            } else {
                // A z₁² + B z₂² = −ε gives ρ ≤ −ε(1 − 1/A) − (1 − B/A)|z₂|²
                Ok(fam(DiscKind::LevelSet { c: d(-a, -b) }, Side::Minus))
            }
        }
        _ => Err(Error::NotOneSided(nt.to_string())),
    }
}

fn support_witness(nt: &NormalFormType) -> SupportWitness {
    let line = |a: C64, b: C64| Hyperplane::new(&[a, b]);
    let nonmin = |h: Hyperplane| SupportWitness {
        aplus: h.clone(),
        aminus: h,
        kind: SupportKind::NonMinimal,
        angles: None,
    };
    match *nt {
        NormalFormType::M11_1 { .. } if table_outcome(nt) == TableOutcome::TwoSided(SupportKind::NonMinimal) => {
            nonmin(line(-I, ONE))
        }
        NormalFormType::M11_1 { .. } => SupportWitness {
            aplus: line(ZERO, ONE),
            aminus: line(ONE, ZERO),
            kind: SupportKind::TwoSidedProper,
            angles: None,
        },
        NormalFormType::M11_2 { a } => {
            // e^{2iλ} = −A/Ā; on z₂ = e^{iλ}z₁, ρ = −|z₁|² sin λ
            let l1 = FRAC_PI_2 + a.arg();
            let l2 = l1 + std::f64::consts::PI;
            SupportWitness {
                aplus: line(C64::from_polar(1.0, l2), -ONE),
                aminus: line(C64::from_polar(1.0, l1), -ONE),
                kind: SupportKind::TwoSidedProper,
                angles: Some((l1, l2)),
            }
        }
        NormalFormType::M11_3 | NormalFormType::M10_2 => nonmin(line(ONE, ZERO)),
        _ => nonmin(line(-I, ONE)),
    }
}

/// Verdict for a classified cone; witnesses are expressed in the input coordinates.
pub fn decide2(res: &NormalFormResult) -> Verdict {
    let t = linalg::to_dmat(&res.t);
    let tinv = t.clone().try_inverse().unwrap_or_else(|| CMat::identity(2, 2));
    match table_outcome(&res.ntype) {
        TableOutcome::OneSided(_) => {
            let fam = build_disc_family(&res.ntype).expect("one-sided by table");
            let fam = pull_family(&fam, &tinv, res.sign);
            Verdict::OneSided {
                side: fam.side,
                family: fam,
            }
        }
        TableOutcome::TwoSided(_) => {
            let w = support_witness(&res.ntype);
            let (p, m) = (w.aplus.pushed(&tinv), w.aminus.pushed(&tinv));
            let (aplus, aminus) = if res.sign < 0 { (m, p) } else { (p, m) };
            Verdict::TwoSided {
                witness: SupportWitness {
                    aplus,
                    aminus,
                    kind: w.kind,
                    angles: w.angles,
                },
            }
        }
    }
}

pub fn degenerate_verdict(report: DegeneracyReport) -> Verdict {
    Verdict::Degenerate { report }
}

/// Re-expresses a normal-form family in coordinates `z = T w`.
pub fn pull_family(fam: &DiscFamily, tinv: &CMat, sign: i8) -> DiscFamily {
    let kind = match &fam.kind {
        DiscKind::LevelSet { c } => {
            let ti = linalg::to_mat2(tinv);
            DiscKind::LevelSet {
                c: ti.transpose() * c * ti,
            }
        }
        DiscKind::AffineLine { ell, shift } => DiscKind::AffineLine {
            ell: (ell.transpose() * tinv).transpose(),
            shift: *shift,
        },
    };
    DiscFamily {
        kind,
        side: if sign < 0 { fam.side.flipped() } else { fam.side },
        radius: fam.radius,
    }
}

/// Margins from [`verify_discs`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscReport {
    /// `min side·ρ` over sampled points of `D_ε`, ε in the grid.
    pub min_margin: f64,
    /// `min side·ρ / |z|²` over sampled points of `D₀` with `|z| ≥ 10⁻³`.
    pub touch_residual: f64,
    pub rho_at_origin: f64,
    pub samples: usize,
}

/// One sampled disc point, for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscPoint {
    pub eps: f64,
    pub z: CVec,
    pub rho: f64,
}

/// Points on `D_ε` (level set or affine line), within `|z| ≤ radius`.
pub fn sample_disc<R: Rng>(fam: &DiscFamily, eps: f64, count: usize, rng: &mut R) -> Vec<CVec> {
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 50 * count + 100 {
        tries += 1;
        let rad = fam.radius * rng.random::<f64>().sqrt();
        let ang = rng.random::<f64>() * std::f64::consts::TAU;
        let param = C64::from_polar(rad, ang);
        let pts: Vec<CVec> = match &fam.kind {
            DiscKind::LevelSet { c } => level_set_points(c, eps, param),
            DiscKind::AffineLine { ell, shift } => {
                let n2 = ell.norm_squared();
                let base = ell.map(|z| z.conj()) * (shift * eps / n2);
                let h = Hyperplane { ell: ell.clone() };
                let k = h.basis();
                let mut z = base;
                for j in 0..k.ncols() {
                    let coef = if j == 0 {
                        param
                    } else {
                        C64::from_polar(fam.radius * rng.random::<f64>(), rng.random::<f64>() * std::f64::consts::TAU)
                    };
                    z += k.column(j) * coef;
                }
                vec![z]
            }
        };
        for z in pts {
            if vnorm(&z) <= fam.radius && out.len() < count {
                out.push(z);
            }
        }
    }
    out
}

fn level_set_points(cm: &CMat2, eps: f64, param: C64) -> Vec<CVec> {
    let (c11, c12, c22) = (cm[(0, 0)], cm[(0, 1)], cm[(1, 1)]);
    let scale = linalg::max_abs2(cm).max(f64::MIN_POSITIVE);
    let mk = |a: C64, b: C64| CVec::from_vec(vec![a, b]);
    if c11.norm().max(c22.norm()) <= 1e-12 * scale {
        // 2 c₁₂ z₁ z₂ = ε
        if param.norm() == 0.0 {
            return vec![];
        }
        return vec![mk(r(eps) / (c12 * param * 2.0), param)];
    }
    // solve for the coordinate with the larger diagonal coefficient
    let (ckk, coo, swap) = if c11.norm() >= c22.norm() {
        (c11, c22, false)
    } else {
        (c22, c11, true)
    };
    let zo = param;
    let b = c12 * zo;
    let disc = (b * b - ckk * (coo * zo * zo - eps)).sqrt();
    let mut out = Vec::with_capacity(2);
    for s in [1.0, -1.0] {
        let zk = (-b + disc * s) / ckk;
        out.push(if swap { mk(zo, zk) } else { mk(zk, zo) });
    }
    out
}

/// Checks `side·ρ > 0` on sampled discs `D_ε` for each ε in the grid and on
/// `D₀ \ {|z| < 10⁻³}`.
pub fn verify_discs(
    cone: &QuadraticCone,
    fam: &DiscFamily,
    eps_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<DiscReport> {
    verify_discs_points(cone, fam, eps_grid, samples, seed, false).map(|(r, _)| r)
}

/// [`verify_discs`] that can also return the sampled points.
pub fn verify_discs_points(
    cone: &QuadraticCone,
    fam: &DiscFamily,
    eps_grid: &[f64],
    samples: usize,
    seed: u64,
    keep: bool,
) -> Result<(DiscReport, Vec<DiscPoint>)> {
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument("eps grid must be nonempty and positive".into()));
    }
    if cone.n() != 2 {
        if let DiscKind::LevelSet { .. } = fam.kind {
            return Err(Error::Dimension("level-set discs live in ℂ²".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sgn = fam.side.sign();
    let mut points = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut worst: Option<(f64, CVec)> = None;
    let mut total = 0;
    for &eps in eps_grid {
        for z in sample_disc(fam, eps, samples, &mut rng) {
            let rho = cone.evaluate(&z);
            total += 1;
            if sgn * rho < min_margin {
                min_margin = sgn * rho;
                worst = Some((eps, z.clone()));
            }
            if keep {
                points.push(DiscPoint { eps, z, rho });
            }
        }
    }
    let mut touch = f64::INFINITY;
    let mut touch_worst = None;
    for z in sample_disc(fam, 0.0, samples, &mut rng) {
        let nz = vnorm(&z);
        if nz < tol::TOUCH_MIN_RADIUS {
            continue;
        }
        let rho = cone.evaluate(&z);
        let m = sgn * rho / (nz * nz);
        if m < touch {
            touch = m;
            touch_worst = Some(z.clone());
        }
        if keep {
            points.push(DiscPoint { eps: 0.0, z, rho });
        }
    }
    let origin = cone.evaluate(&CVec::zeros(cone.n()));
    let report = DiscReport {
        min_margin,
        touch_residual: touch,
        rho_at_origin: origin,
        samples: total,
    };
    if total == 0 {
        return Err(Error::InvalidArgument("no disc points could be sampled".into()));
    }
    if !(min_margin > 0.0) {
        let (eps, z) = worst.expect("at least one sample");
        return Err(Error::VerificationFailed {
            eps,
            margin: min_margin,
            point: z.iter().copied().collect(),
        });
    }
    if !(touch > 0.0) || origin != 0.0 {
        return Err(Error::VerificationFailed {
            eps: 0.0,
            margin: touch,
            point: touch_worst.map(|z| z.iter().copied().collect()).unwrap_or_default(),
        });
    }
    Ok((report, points))
}

/// Margins from [`verify_support`], each normalized by `|z|²‖ρ‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    /// `min ρ` on `A⁺` (should be ≥ −tol).
    pub plus_min: f64,
    /// `max ρ` on `A⁺` (NonMinimal: should be ≤ tol).
    pub plus_max: f64,
    /// `min ρ` on `A⁻` (NonMinimal: should be ≥ −tol).
    pub minus_min: f64,
    /// `max ρ` on `A⁻` (should be ≤ tol).
    pub minus_max: f64,
    pub tolerance: f64,
    pub samples: usize,
}

/// Random points on a hyperplane with `|z| ≤ 1`.
pub fn sample_hyperplane<R: Rng>(h: &Hyperplane, count: usize, rng: &mut R) -> Vec<CVec> {
    let k = h.basis();
    (0..count)
        .map(|_| {
            let coef = linalg::random_cvec(rng, k.ncols());
            let z = &k * coef;
            let nz = vnorm(&z).max(f64::MIN_POSITIVE);
            let rad = 1.0 - rng.random::<f64>();
            z * r(rad / nz)
        })
        .collect()
}

fn range_on<R: Rng>(cone: &QuadraticCone, h: &Hyperplane, count: usize, rng: &mut R) -> (f64, f64, CVec, CVec) {
    let norm = cone.norm().max(f64::MIN_POSITIVE);
    let mut lo = (f64::INFINITY, CVec::zeros(cone.n()));
    let mut hi = (f64::NEG_INFINITY, CVec::zeros(cone.n()));
    for z in sample_hyperplane(h, count, rng) {
        let nz = vnorm(&z);
        let v = cone.evaluate(&z) / (nz * nz * norm);
        if v < lo.0 {
            lo = (v, z.clone());
        }
        if v > hi.0 {
            hi = (v, z);
        }
    }
    (lo.0, hi.0, lo.1, hi.1)
}

/// Sampled ranges of ρ on both witness hyperplanes, without a verdict.
pub fn support_margins(cone: &QuadraticCone, w: &SupportWitness, samples: usize, seed: u64) -> SupportReport {
    support_margins_at(cone, w, samples, seed).0
}

type Extremes = [CVec; 4];

fn support_margins_at(cone: &QuadraticCone, w: &SupportWitness, samples: usize, seed: u64) -> (SupportReport, Extremes) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pmin, pmax, pz_lo, pz_hi) = range_on(cone, &w.aplus, samples, &mut rng);
    let (mmin, mmax, mz_lo, mz_hi) = range_on(cone, &w.aminus, samples, &mut rng);
    let report = SupportReport {
        plus_min: pmin,
        plus_max: pmax,
        minus_min: mmin,
        minus_max: mmax,
        tolerance: tol::WITNESS_REL,
        samples: 2 * samples,
    };
    (report, [pz_lo, pz_hi, mz_lo, mz_hi])
}

impl SupportReport {
    /// Worst violation of the witness conditions (≤ tolerance means pass).
    pub fn violation(&self, kind: SupportKind) -> f64 {
        let mut v = (-self.plus_min).max(self.minus_max);
        if kind == SupportKind::NonMinimal {
            v = v.max(self.plus_max).max(-self.minus_min);
        }
        v
    }
}

/// Checks `A⁺ ⊂ {ρ ≥ 0}` and `A⁻ ⊂ {ρ ≤ 0}` (both `⊂ {ρ = 0}` for NonMinimal).
pub fn verify_support(
    cone: &QuadraticCone,
    w: &SupportWitness,
    samples: usize,
    seed: u64,
) -> Result<SupportReport> {
    verify_support_with(cone, w, samples, seed, tol::WITNESS_REL)
}

pub fn verify_support_with(
    cone: &QuadraticCone,
    w: &SupportWitness,
    samples: usize,
    seed: u64,
    tolr: f64,
) -> Result<SupportReport> {
    let (mut report, [pz_lo, pz_hi, mz_lo, mz_hi]) = support_margins_at(cone, w, samples, seed);
    report.tolerance = tolr;
    let fail = |margin: f64, z: &CVec| Error::VerificationFailed {
        eps: 0.0,
        margin,
        point: z.iter().copied().collect(),
    };
    if report.plus_min < -tolr {
        return Err(fail(report.plus_min, &pz_lo));
    }
    if report.minus_max > tolr {
        return Err(fail(-report.minus_max, &mz_hi));
    }
    if w.kind == SupportKind::NonMinimal {
        if report.plus_max > tolr {
            return Err(fail(-report.plus_max, &pz_hi));
        }
        if report.minus_min < -tolr {
            return Err(fail(report.minus_min, &mz_lo));
        }
    }
    Ok(report)
}

/// Report of the jump-formula demonstration on the example cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    pub identity_residual: f64,
    pub continuity_ratio: f64,
    pub samples: usize,
    pub identity_samples: usize,
}

/// Upper bound frozen for the demonstration's continuity ratio; see tests.
pub const JUMP_CONTINUITY_BOUND: f64 = 1.75;

/// The example cone `Re(½z₁² + ⅓z₂²) + |z₁|² − |z₂|²`.
pub fn example_cone() -> QuadraticCone {
    diagonal(&[r(0.5), r(1.0 / 3.0)], &[1.0, -1.0])
}

/// `f = (z₂³ − z₁³)/(z₁z₂)` versus `F⁺ − F⁻ = z₂²/z₁ − z₁²/z₂` on the example cone.
pub fn jump_demo(seed: u64, samples: usize) -> Result<JumpReport> {
    let cone = example_cone();
    let pts = cone.sample_cone(seed, samples.max(1), 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut ident: f64 = 0.0;
    let mut ratio: f64 = 0.0;
    let mut nid = 0;
    for s in &pts {
        // spread |z| over [1e-4, 1]; the cone is homogeneous
        let z = &s.point * r(10f64.powf(-4.0 * rng.random::<f64>()) / vnorm(&s.point));
        let (z1, z2) = (z[0], z[1]);
        if z1.norm() == 0.0 || z2.norm() == 0.0 {
            continue;
        }
        let f = (z2 * z2 * z2 - z1 * z1 * z1) / (z1 * z2);
        let fp = z2 * z2 / z1;
        let fm = z1 * z1 / z2;
        ratio = ratio.max(f.norm() / vnorm(&z));
        if z1.norm().min(z2.norm()) >= 1e-2 {
            ident = ident.max((fp - fm - f).norm());
            nid += 1;
        }
    }
    Ok(JumpReport {
        identity_residual: ident,
        continuity_ratio: ratio,
        samples: pts.len(),
        identity_samples: nid,
    })
}

/// `1/ℓ⁻` is finite on sampled points of `Ω⁺`; returns the largest `|1/ℓ⁻(z)|·|z|`.
pub fn reciprocal_check(cone: &QuadraticCone, w: &SupportWitness, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z = linalg::random_cvec(&mut rng, cone.n());
        if cone.evaluate(&z) > 0.0 {
            let v = w.aminus.eval(&z);
            worst = worst.max(vnorm(&z) / v.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::normalform2::{classify2, Classification};

    fn nf(nt: NormalFormType) -> NormalFormResult {
        match classify2(&nt.render()) {
            Classification::Normal(r) => r,
            Classification::Degenerate(d) => panic!("{d:?}"),
        }
    }

    #[test]
    fn example_m_two_sided() {
        let cone = example_cone();
        let res = nf(NormalFormType::M11_1 { a: 0.5, b: 1.0 / 3.0 });
        match decide2(&res) {
            Verdict::TwoSided { witness } => {
                assert_eq!(witness.kind, SupportKind::TwoSidedProper);
                // A⁺ = {z₂ = 0}, A⁻ = {z₁ = 0}
                assert!(witness.aplus.ell[0].norm() < 1e-12);
                assert!(witness.aminus.ell[1].norm() < 1e-12);
                let rep = verify_support(&cone, &witness, 2000, 1).unwrap();
                assert!(rep.plus_min >= 0.0 && rep.minus_max <= 0.0);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn families() {
        let f = build_disc_family(&NormalFormType::M20 { a: 2.0, b: 0.0 }).unwrap();
        assert_eq!(f.side, Side::Plus);
        assert!(matches!(f.kind, DiscKind::LevelSet { c } if (c[(0,0)] - r(2.0)).norm() < 1e-15));
        let f = build_disc_family(&NormalFormType::M11_1 { a: 2.0, b: 0.0 }).unwrap();
        assert_eq!(f.side, Side::Minus);
        assert!(matches!(f.kind, DiscKind::AffineLine { .. }));
        let f = build_disc_family(&NormalFormType::M10_1 { a: 0.0 }).unwrap();
        assert!(matches!(f.kind, DiscKind::LevelSet { c } if (c[(1,1)] - ONE).norm() < 1e-15));
        assert!(matches!(
            build_disc_family(&NormalFormType::M11_3),
            Err(Error::NotOneSided(_))
        ));
    }

    #[test]
    fn m20_margin_at_least_eps() {
        let nt = NormalFormType::M20 { a: 2.0, b: 0.0 };
        let fam = build_disc_family(&nt).unwrap();
        let rep = verify_discs(&nt.render(), &fam, &[1e-3, 1e-2, 1e-1], 2000, 3).unwrap();
        assert!(rep.min_margin >= 1e-3 * (1.0 - 1e-9));
        assert!(rep.touch_residual > 0.0);
    }

    #[test]
    fn wrong_side_fails() {
        let nt = NormalFormType::M11_1 { a: 2.0, b: 1.5 };
        let mut fam = build_disc_family(&nt).unwrap();
        verify_discs(&nt.render(), &fam, &[1e-2], 500, 4).unwrap();
        fam.side = fam.side.flipped();
        assert!(matches!(
            verify_discs(&nt.render(), &fam, &[1e-2], 500, 4),
            Err(Error::VerificationFailed { .. })
        ));
    }

    #[test]
    fn m11_2_lines() {
        for a in [r(1.0), c(1.0, 1.0)] {
            let nt = NormalFormType::M11_2 { a };
            let w = support_witness(&nt);
            let (l1, l2) = w.angles.unwrap();
            let cone = nt.render();
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            for _ in 0..100 {
                let z1 = linalg::random_cvec(&mut rng, 1)[0];
                for (l, h) in [(l1, &w.aminus), (l2, &w.aplus)] {
                    let z = CVec::from_vec(vec![z1, z1 * C64::from_polar(1.0, l)]);
                    assert!(h.eval(&z).norm() < 1e-12);
                    let want = -z1.norm_sqr() * l.sin();
                    assert!((cone.evaluate(&z) - want).abs() < 1e-12 * (1.0 + want.abs()));
                }
            }
            verify_support(&cone, &w, 1000, 2).unwrap();
            let swapped = SupportWitness {
                aplus: w.aminus.clone(),
                aminus: w.aplus.clone(),
                ..w
            };
            assert!(verify_support(&cone, &swapped, 1000, 2).is_err());
        }
    }

    #[test]
    fn m00_1_line_in_cone() {
        let res = nf(NormalFormType::M00_1);
        match decide2(&res) {
            Verdict::TwoSided { witness } => {
                assert_eq!(witness.kind, SupportKind::NonMinimal);
                verify_support(&NormalFormType::M00_1.render(), &witness, 1000, 5).unwrap();
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn jump_identity() {
        let rep = jump_demo(42, 2000).unwrap();
        assert!(rep.identity_residual <= 1e-12);
        assert!(rep.continuity_ratio.is_finite() && rep.continuity_ratio <= JUMP_CONTINUITY_BOUND);
    }
}
