//! Helicoidal symmetry: at every point `p` of a two-sided hypersurface `Σ`
//! an ambient isometry fixes `p`, maps `Σ` to itself and exchanges the two
//! sides. Such an isometry reverses the mean curvature vector at `p` while
//! also preserving it, so `H = 0` there.
//!
//! Only linear orthogonal maps of `R^N` are represented; they restrict to
//! isometries of the unit sphere.

mod constructors;
mod crosscheck;
mod handles;

pub use constructors::{
    block_aligner, clifford_helicoidal_at, conjugation_isometry, det_helicoidal_at, det_reflection_at, eta_conjugator,
    left_multiplication_isometry, pf_canonical_swap, pf_helicoidal_at, pf_helicoidal_canonical_at, pf_kernel_swap, xi_swap,
};
pub use crosscheck::{helicoidal_crosscheck, CrosscheckPoint, CrosscheckReport, CrosscheckScenario};
pub use handles::{SurfaceHandle, TorusHandle, VarietyHandle};

use rand_chacha::ChaCha8Rng;

use crate::matlib::{determinant, distance, DenseMatrix};
use crate::rng::gaussian_vec;
use crate::tolerances::{FIXED_POINT_TOL, ORTHO_TOL};
use crate::{Error, Result};

/// Orthogonal linear map of `R^N` with its determinant sign.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientIsometry {
    matrix: DenseMatrix,
    parity: i8,
}

impl AmbientIsometry {
    /// Checks `‖MᵀM − I‖_max ≤ 1e-10` and records the sign of `det M`.
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("isometry must be square, got {}x{}", matrix.rows(), matrix.cols())));
        }
        let defect = matrix.orthogonality_defect();
        if defect > ORTHO_TOL {
            return Err(Error::Contract(format!("matrix is not orthogonal (defect {defect:e})")));
        }
        let parity = if determinant(&matrix)? > 0.0 { 1 } else { -1 };
        Ok(Self { matrix, parity })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DenseMatrix::identity(n), parity: 1 }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn parity(&self) -> i8 {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.matvec(x)
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.transpose(), parity: self.parity }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.matmul(&inner.matrix)?, parity: self.parity * inner.parity })
    }

    /// `η⁻¹ ∘ self ∘ η`
    pub fn conjugate_by(&self, eta: &Self) -> Result<Self> {
        eta.inverse().compose(&self.compose(eta)?)
    }
}

/// Evidence for the three helicoidal conditions at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HelicoidalReport {
    pub fixes_point: bool,
    pub fixed_distance: f64,
    /// Fraction of on-surface samples whose images stay on the surface.
    pub preserves_surface: f64,
    /// Fraction of off-surface samples whose side sign flips.
    pub swaps_sides: f64,
    pub samples: usize,
    pub verdict: bool,
}

/// Checks `φ(p) = p`, `φ(Σ) = Σ` and `φ(D₁) = D₂` on `n_samples` on-surface
/// and `n_samples` Gaussian off-surface points.
pub fn helicoidal_check(
    handle: &dyn SurfaceHandle,
    iso: &AmbientIsometry,
    p: &[f64],
    n_samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<HelicoidalReport> {
    let dim = handle.ambient_dim();
    if iso.dim() != dim || p.len() != dim {
        return Err(Error::Dimension(format!("isometry of R^{} and point in R^{} for a surface in R^{dim}", iso.dim(), p.len())));
    }
    let tol = handle.on_tol();
    let membership = handle.membership(p);
    if membership > tol {
        return Err(Error::Contract(format!("point is off the surface (membership {membership:e})")));
    }
    let fixed_distance = distance(&iso.apply(p), p);
    let fixes_point = fixed_distance <= FIXED_POINT_TOL;

    let mut preserved = 0;
    for _ in 0..n_samples {
        let x = handle.sample_on(rng)?;
        if handle.membership(&iso.apply(&x)) <= tol {
            preserved += 1;
        }
    }
    let mut swapped = 0;
    let mut drawn = 0;
    while drawn < n_samples {
        let x = gaussian_vec(rng, dim);
        if handle.membership(&x) <= 10.0 * tol {
            continue;
        }
        drawn += 1;
        if handle.side(&iso.apply(&x)) == -handle.side(&x) {
            swapped += 1;
        }
    }
    let fraction = |k: usize| if n_samples == 0 { 1.0 } else { k as f64 / n_samples as f64 };
    let preserves_surface = fraction(preserved);
    let swaps_sides = fraction(swapped);
    Ok(HelicoidalReport {
        fixes_point,
        fixed_distance,
        preserves_surface,
        swaps_sides,
        samples: n_samples,
        verdict: fixes_point && preserved == n_samples && swapped == n_samples,
    })
}
