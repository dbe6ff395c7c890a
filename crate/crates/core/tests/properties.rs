use proptest::prelude::*;

use quadcone::decider::{self, Verdict};
use quadcone::linalg::{self, c, CMat, CMat2};
use quadcone::normalform2::{self, apply_change, Classification};
use quadcone::reduction2::h_e;
use quadcone::slicer::check_det_test;
use quadcone::QuadraticCone;

fn cmat(entries: &[(f64, f64)], n: usize) -> CMat {
    CMat::from_iterator(n, n, entries.iter().map(|&(a, b)| c(a, b)))
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The normal form of a generic cone in ℂ² does not depend on the
    /// coordinates or on a positive scale; a negative scale keeps the tag.
    #[test]
    fn classification_is_invariant(s in coeffs(4), h in coeffs(4), t in coeffs(4), lambda in 0.2..5.0f64, flip: bool) {
        let (cone, _, _) = QuadraticCone::symmetrized(cmat(&s, 2), cmat(&h, 2)).unwrap();
        let t = cmat(&t, 2);
        let sv = t.clone().svd(false, false).singular_values;
        prop_assume!(sv.min() > 0.2 * sv.max());
        let sign = if flip { -1 } else { 1 };
        let moved = apply_change(&cone, &t, lambda, sign).unwrap();
        match (normalform2::classify2(&cone), normalform2::classify2(&moved)) {
            (Classification::Normal(a), Classification::Normal(b)) => {
                prop_assume!(a.boundary_margin > 1e-4 && b.boundary_margin > 1e-4);
                prop_assert_eq!(a.ntype.tag(), b.ntype.tag());
                for (x, y) in a.ntype.params().iter().zip(b.ntype.params()) {
                    prop_assert!((x - y).norm() <= 1e-6 * (1.0 + x.norm()), "{} vs {}", a.ntype, b.ntype);
                }
                prop_assert!(a.residual <= 1e-8 && b.residual <= 1e-8);
                prop_assert!(normalform2::uniqueness_certificate(&a, &b));
            }
            (Classification::Degenerate(a), Classification::Degenerate(b)) => {
                prop_assert_eq!(a.reason, b.reason);
            }
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    /// Cones `Re(zᵀSz) + Im(z₁z̄₂)` passing the determinant test for a
    /// one-sided slice are one-sided as cones in ℂ².
    #[test]
    fn determinant_test_implies_one_sided(s in coeffs(3)) {
        let m = CMat2::new(c(s[0].0, s[0].1), c(s[1].0, s[1].1), c(s[1].0, s[1].1), c(s[2].0, s[2].1));
        let det = m.determinant();
        let rot = linalg::c(0.0, -0.5 * det.arg()).exp();
        let p = (m * rot).map(|z| z.re);
        prop_assume!(det.norm() > 0.26 && p.determinant() < -1e-3);
        prop_assert!(check_det_test(&m));

        let cone = QuadraticCone::new(linalg::to_dmat(&m), linalg::to_dmat(&h_e())).unwrap();
        let Classification::Normal(res) = normalform2::classify2(&cone) else {
            return Err(TestCaseError::fail("degenerate"));
        };
        prop_assume!(res.boundary_margin > 1e-4);
        let verdict = decider::decide2(&res);
        prop_assert!(matches!(verdict, Verdict::OneSided { .. }), "{} -> {}", res.ntype, verdict.label());
    }
}
