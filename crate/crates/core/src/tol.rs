//! Numerical thresholds.
//!
//! Every threshold used by the classifier and the verifiers lives here so a
//! report can echo the exact values it ran with. `Tolerances` carries the
//! subset that may be overridden from the command line.

use serde::{Deserialize, Serialize};

/// Relative symmetry/hermiticity slack on input matrices.
pub const SYMMETRY_REL: f64 = 1e-12;

/// An eigenvalue with `|λ| <= ZERO_EIGEN_REL * ||M||_2` counts as zero.
pub const ZERO_EIGEN_REL: f64 = 1e-9;

/// Cone samples must satisfy `|ρ(z)| <= SAMPLE_RESIDUAL_REL * |z|^2 * ||ρ||`.
pub const SAMPLE_RESIDUAL_REL: f64 = 1e-10;

/// `|det S| <= DET_ZERO_REL * ||S||^2` routes to the singular sub-analysis.
pub const DET_ZERO_REL: f64 = 1e-9;

/// Normal-form residual bound, relative to `λ (||S|| + ||H||) ||T||^2`.
pub const NORMAL_FORM_RESIDUAL_REL: f64 = 1e-8;

/// Table boundary slack, e.g. `A <= 1 + BOUNDARY` is DimensionDeficient for M20.
pub const BOUNDARY: f64 = 1e-9;

/// Results whose distance to a case boundary is below this are flagged.
pub const LOW_CONFIDENCE_MARGIN: f64 = 1e-6;

/// Witness side tolerance, relative to `|z|^2 ||ρ||`.
pub const WITNESS_REL: f64 = 1e-12;

/// Radius below which D₀ samples are ignored by the touch check.
pub const TOUCH_MIN_RADIUS: f64 = 1e-3;

/// Gram determinant floor for slice bases.
pub const GRAM_MIN_DET: f64 = 1e-10;

/// Determinant test slack on `det S >= 1/4`.
pub const DET_TEST_DET_SLACK: f64 = 1e-9;

/// Determinant test threshold on `det P < 0`.
pub const DET_TEST_DET_P: f64 = 1e-12;

/// Minimum margin an α-scan candidate must clear.
pub const SCAN_MARGIN: f64 = 1e-3;

/// Product-form kernel threshold on singular values of `[S; H]`.
pub const PRODUCT_KERNEL_REL: f64 = 1e-9;

/// Pointwise re-verification bound for n ≥ 3 two-sided forms.
pub const FORM_VERIFY_REL: f64 = 1e-10;

/// Overridable thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero_eigen: f64,
    pub det_zero: f64,
    pub boundary: f64,
    pub witness: f64,
    pub sample_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_eigen: ZERO_EIGEN_REL,
            det_zero: DET_ZERO_REL,
            boundary: BOUNDARY,
            witness: WITNESS_REL,
            sample_residual: SAMPLE_RESIDUAL_REL,
        }
    }
}

impl Tolerances {
    /// Applies a `key=value` override. Returns false for an unknown key.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "zero_eigen" => &mut self.zero_eigen,
            "det_zero" => &mut self.det_zero,
            "boundary" => &mut self.boundary,
            "witness" => &mut self.witness,
            "sample_residual" => &mut self.sample_residual,
            _ => return false,
        };
        *slot = value;
        true
    }
}
