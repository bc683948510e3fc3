//! Hypersurfaces given as zero sets `{f = 0}`.
//!
//! The level set of `f` has vanishing mean curvature at a regular point `x`
//! iff `Δf ‖∇f‖² − ∇fᵀ (Hess f) ∇f = 0`. Dividing by `‖∇f‖³` gives the
//! dimensionless residual used throughout.

mod fields;
mod sample;

pub use fields::{det_variety, mu_embed, mu_inverse, pf_variety, skew_from_upper, sphere_field, upper_pairs, DetField, PfField, SphereField};
pub use sample::{sample_det_variety, sample_pf_variety};

use crate::matlib::{dot, norm, DenseMatrix};
use crate::tolerances::{FD_STEP, FD_STEP_SECOND, GRADIENT_MIN};
use crate::{Error, Result};

/// Smooth function on `R^N` whose zero set is the hypersurface under test.
pub trait ScalarField: Send + Sync {
    fn name(&self) -> String;
    fn ambient_dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn hessian(&self, x: &[f64]) -> DenseMatrix;
    /// Homogeneity degree, if the field is homogeneous.
    fn degree(&self) -> Option<u32>;

    /// Value, gradient and Hessian together; fields override this when one
    /// pass produces all three.
    fn jet(&self, x: &[f64]) -> (f64, Vec<f64>, DenseMatrix) {
        (self.value(x), self.gradient(x), self.hessian(x))
    }
}

/// A unit-norm point of `{f = 0}` at which `∇f ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietyPoint {
    pub x: Vec<f64>,
    /// Relative spectral gap that certified regularity when sampled.
    pub regularity: f64,
    /// Draws the sampler needed (1 when the first draw was accepted).
    pub attempts: usize,
}

impl VarietyPoint {
    /// Validates `|f(x)| ≤ 1e-10`, `‖x‖ = 1` and `‖∇f(x)‖ ≥ 1e-6`.
    pub fn new(field: &dyn ScalarField, x: Vec<f64>, regularity: f64) -> Result<Self> {
        if x.len() != field.ambient_dim() {
            return Err(Error::Dimension(format!("point in R^{} for a field on R^{}", x.len(), field.ambient_dim())));
        }
        let len = norm(&x);
        if (len - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("variety point must have unit norm, got {len}")));
        }
        let f = field.value(&x);
        if f.abs() > 1e-10 {
            return Err(Error::Contract(format!("|f(x)| = {:e} exceeds 1e-10", f.abs())));
        }
        let g = norm(&field.gradient(&x));
        if g < GRADIENT_MIN {
            return Err(Error::SingularPoint(g));
        }
        Ok(Self { x, regularity, attempts: 1 })
    }
}

/// Signed level-set mean curvature `(Δf‖∇f‖² − ∇fᵀH∇f)/‖∇f‖³` at any point
/// with nonvanishing gradient, on the zero set or not.
pub fn level_mean_curvature(field: &dyn ScalarField, x: &[f64]) -> Result<f64> {
    if x.len() != field.ambient_dim() {
        return Err(Error::Dimension(format!("point in R^{} for a field on R^{}", x.len(), field.ambient_dim())));
    }
    let (_, g, h) = field.jet(x);
    let gn = norm(&g);
    if gn < GRADIENT_MIN {
        return Err(Error::SingularPoint(gn));
    }
    let laplacian = h.trace();
    let hg = h.matvec(&g);
    Ok((laplacian * gn * gn - dot(&g, &hg)) / (gn * gn * gn))
}

/// Minimality residual `|Δf‖∇f‖² − ∇fᵀH∇f| / ‖∇f‖³` at a variety point.
pub fn level_residual(field: &dyn ScalarField, point: &VarietyPoint) -> Result<f64> {
    level_mean_curvature(field, &point.x).map(f64::abs)
}

/// Finite-difference self-consistency of a field at one point.
#[derive(Debug, Clone, Copy)]
pub struct FieldCheck {
    /// `‖∇f − D_h f‖ / ‖∇f‖`, step `1e-5`.
    pub gradient_error: f64,
    /// `max |H − Hᵀ|`.
    pub hessian_asymmetry: f64,
    /// `‖H − D_h ∇f‖_F / ‖H‖_F`, step `1e-4`.
    pub hessian_error: f64,
    /// `|x·∇f − d f| / (‖x‖ ‖∇f‖)` for homogeneous fields.
    pub euler_error: Option<f64>,
}

impl FieldCheck {
    pub fn passes(&self) -> bool {
        self.gradient_error <= 1e-5
            && self.hessian_asymmetry <= 1e-10
            && self.hessian_error <= 1e-4
            && self.euler_error.is_none_or(|e| e <= 1e-9)
    }
}

pub fn check_field(field: &dyn ScalarField, x: &[f64]) -> FieldCheck {
    let n = field.ambient_dim();
    let (f, g, h) = field.jet(x);
    let mut fd_grad = vec![0.0; n];
    let mut fd_hess = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let (mut p, mut m) = (x.to_vec(), x.to_vec());
        p[i] += FD_STEP;
        m[i] -= FD_STEP;
        fd_grad[i] = (field.value(&p) - field.value(&m)) / (p[i] - m[i]);
        let (mut p, mut m) = (x.to_vec(), x.to_vec());
        p[i] += FD_STEP_SECOND;
        m[i] -= FD_STEP_SECOND;
        let step = p[i] - m[i];
        let (gp, gm) = (field.gradient(&p), field.gradient(&m));
        for j in 0..n {
            fd_hess[(j, i)] = (gp[j] - gm[j]) / step;
        }
    }
    let diff: Vec<f64> = g.iter().zip(&fd_grad).map(|(a, b)| a - b).collect();
    let gradient_error = norm(&diff) / norm(&g).max(f64::MIN_POSITIVE);
    let hessian_asymmetry = (h.clone() - h.transpose()).max_abs();
    let hessian_error = (h.clone() - fd_hess).frobenius_norm() / h.frobenius_norm().max(f64::MIN_POSITIVE);
    let euler_error = field.degree().map(|d| {
        let scale = (norm(x) * norm(&g)).max(f64::MIN_POSITIVE);
        (dot(x, &g) - d as f64 * f).abs() / scale
    });
    FieldCheck { gradient_error, hessian_asymmetry, hessian_error, euler_error }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_vec, stream, unit_vec};

    #[test]
    fn two_by_two_determinant_residual_vanishes_identically() {
        let f = det_variety(2).unwrap();
        let mut rng = stream(31, 0);
        for _ in 0..200 {
            let p = sample_det_variety(2, &mut rng).unwrap();
            assert!(level_residual(&f, &p).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn sphere_control_is_far_from_minimal() {
        for n in [3usize, 4, 9] {
            let f = sphere_field(n);
            let x = unit_vec(&mut stream(32, n as u64), n);
            let p = VarietyPoint::new(&f, x, 1.0).unwrap();
            let r = level_residual(&f, &p).unwrap();
            assert!((r - (n as f64 - 1.0)).abs() < 1e-12);
            assert!(r > 1.0);
        }
    }

    #[test]
    fn three_by_three_determinant_cone_is_minimal() {
        let f = det_variety(3).unwrap();
        let mut rng = stream(33, 0);
        for _ in 0..200 {
            let p = sample_det_variety(3, &mut rng).unwrap();
            assert!(level_residual(&f, &p).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn pfaffian_cone_is_minimal() {
        let f = pf_variety(2).unwrap();
        let mut rng = stream(34, 0);
        for _ in 0..100 {
            let p = sample_pf_variety(2, &mut rng).unwrap();
            assert!(level_residual(&f, &p).unwrap() <= 1e-7);
        }
    }

    #[test]
    fn curvature_scales_inversely_with_distance_for_cones() {
        let mut rng = stream(35, 0);
        let fields: Vec<Box<dyn ScalarField>> = vec![Box::new(det_variety(3).unwrap()), Box::new(pf_variety(3).unwrap())];
        for f in &fields {
            for _ in 0..5 {
                let x = gaussian_vec(&mut rng, f.ambient_dim());
                let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
                let k1 = level_mean_curvature(f.as_ref(), &x).unwrap();
                let k2 = level_mean_curvature(f.as_ref(), &x2).unwrap();
                assert!((k2 - k1 / 2.0).abs() <= 1e-6 * k1.abs().max(1.0), "{k1} {k2}");
            }
        }
    }

    #[test]
    fn variety_point_validation() {
        let f = det_variety(2).unwrap();
        assert!(VarietyPoint::new(&f, vec![1.0, 0.0, 0.0, 0.0], 1.0).is_ok());
        assert!(matches!(VarietyPoint::new(&f, vec![2.0, 0.0, 0.0, 0.0], 1.0), Err(Error::Contract(_))));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(matches!(VarietyPoint::new(&f, vec![s, 0.0, 0.0, s], 1.0), Err(Error::Contract(_))));
        // corank 2 in a 3x3: gradient (cofactors) vanishes
        let g = det_variety(3).unwrap();
        let mut x = vec![0.0; 9];
        x[0] = 1.0;
        assert!(matches!(VarietyPoint::new(&g, x.clone(), 1.0), Err(Error::SingularPoint(_))));
        assert!(matches!(level_mean_curvature(&g, &x), Err(Error::SingularPoint(_))));
        assert!(matches!(level_mean_curvature(&g, &[1.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn fields_are_self_consistent() {
        let mut rng = stream(36, 0);
        let fields: Vec<Box<dyn ScalarField>> = vec![
            Box::new(det_variety(2).unwrap()),
            Box::new(det_variety(3).unwrap()),
            Box::new(det_variety(4).unwrap()),
            Box::new(pf_variety(2).unwrap()),
            Box::new(pf_variety(3).unwrap()),
            Box::new(sphere_field(5)),
        ];
        for f in &fields {
            for _ in 0..5 {
                let x = gaussian_vec(&mut rng, f.ambient_dim());
                let c = check_field(f.as_ref(), &x);
                assert!(c.passes(), "{}: {c:?}", f.name());
            }
        }
    }
}
