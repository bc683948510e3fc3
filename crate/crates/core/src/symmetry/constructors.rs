//! Explicit helicoidal isometries for the Clifford tori and the determinant
//! and Pfaffian cones.

use std::f64::consts::FRAC_1_SQRT_2;

use super::AmbientIsometry;
use crate::implicit::{mu_embed, mu_inverse};
use crate::matlib::{householder_reflection, left_null_vector, norm, relative_delta, rotation_taking, skew_canonical_form, svd, DenseMatrix};
use crate::tolerances::{FIXED_POINT_TOL, ON_SURFACE_TOL, RANK_RTOL};
use crate::{Error, Result};

/// Block swap `(x₁, x₂) ↦ (x₂, x₁)` on `R^{2p+2}`, blocks of length `p + 1`.
pub fn xi_swap(p: usize) -> AmbientIsometry {
    let half = p + 1;
    let m = DenseMatrix::from_fn(2 * half, 2 * half, |i, j| f64::from(u8::from(j == (i + half) % (2 * half))));
    AmbientIsometry::new(m).expect("permutation matrices are orthogonal")
}

/// `blockdiag(I, R)` with `R ∈ SO(k)` taking the direction of the second
/// block of `q` to that of the first, where `k = q.len() / 2`.
pub fn block_aligner(q: &[f64]) -> Result<AmbientIsometry> {
    if q.len() < 4 || q.len() % 2 == 1 {
        return Err(Error::Dimension(format!("expected a point of R^(2p+2) with p >= 1, got length {}", q.len())));
    }
    let half = q.len() / 2;
    let (a, b) = q.split_at(half);
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Contract("both blocks of the point must be nonzero".into()));
    }
    let ua: Vec<f64> = a.iter().map(|v| v / na).collect();
    let ub: Vec<f64> = b.iter().map(|v| v / nb).collect();
    let r = rotation_taking(&ub, &ua)?;
    AmbientIsometry::new(DenseMatrix::block_diag(&DenseMatrix::identity(half), &r))
}

/// Rotation `η` preserving `S^p(1/√2) × S^p(1/√2)` and each of its sides with
/// `η(q) = (a, a)`.
pub fn eta_conjugator(q: &[f64]) -> Result<AmbientIsometry> {
    let half = q.len() / 2;
    if q.len() >= 4 && q.len().is_multiple_of(2) {
        let (a, b) = q.split_at(half);
        let off = (norm(a) - FRAC_1_SQRT_2).abs().max((norm(b) - FRAC_1_SQRT_2).abs());
        if off > ON_SURFACE_TOL {
            return Err(Error::Contract(format!("point is off the Clifford torus (block norm error {off:e})")));
        }
    }
    block_aligner(q)
}

/// `η⁻¹ ∘ ξ ∘ η`, which fixes `q` and exchanges the sides of the torus.
pub fn clifford_helicoidal_at(q: &[f64]) -> Result<AmbientIsometry> {
    let eta = eta_conjugator(q)?;
    xi_swap(q.len() / 2 - 1).conjugate_by(&eta)
}

/// `Y ↦ AY` on row-major coordinates of `n × n` matrices, i.e. `A ⊗ I`.
pub fn left_multiplication_isometry(a: &DenseMatrix) -> Result<AmbientIsometry> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    AmbientIsometry::new(a.kron(&DenseMatrix::identity(a.rows())))
}

/// `Y ↦ BᵀYB` on the isometric coordinates of skew `2n × 2n` matrices.
pub fn conjugation_isometry(b: &DenseMatrix) -> Result<AmbientIsometry> {
    if !b.is_square() || b.rows() % 2 == 1 {
        return Err(Error::Dimension(format!("expected an even square matrix, got {}x{}", b.rows(), b.cols())));
    }
    let n = b.rows() / 2;
    let dim = n * (2 * n - 1);
    let bt = b.transpose();
    let mut columns = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        let y = mu_embed(&e, n)?;
        let image = (&(&bt * &y) * b).antisymmetrize();
        columns.push(mu_inverse(&image)?);
    }
    AmbientIsometry::new(DenseMatrix::from_columns(&columns))
}

fn fixes(image: &DenseMatrix, x: &DenseMatrix) -> Result<()> {
    let err = (image.clone() - x.clone()).max_abs();
    if err > FIXED_POINT_TOL * x.max_abs().max(1.0) {
        return Err(Error::Numerical(format!("constructed map moves the base point by {err:e}")));
    }
    Ok(())
}

/// Householder reflection `A` through the left kernel of a corank-one `X`;
/// `AX = X` and `det A = −1`.
pub fn det_reflection_at(x: &DenseMatrix) -> Result<DenseMatrix> {
    let v = left_null_vector(x, relative_delta(x)?)?;
    let a = householder_reflection(&v)?;
    fixes(&(&a * x), x)?;
    Ok(a)
}

/// `Y ↦ AY` with `A` from [`det_reflection_at`]: fixes `X` and reverses the
/// sign of `det` everywhere.
pub fn det_helicoidal_at(x: &DenseMatrix) -> Result<AmbientIsometry> {
    left_multiplication_isometry(&det_reflection_at(x)?)
}

fn check_skew(x: &DenseMatrix) -> Result<()> {
    if !x.is_square() || x.rows() % 2 == 1 || x.rows() < 2 {
        return Err(Error::Dimension(format!("expected an even square matrix, got {}x{}", x.rows(), x.cols())));
    }
    if !x.is_skew(1e-10 * x.max_abs().max(1.0)) {
        return Err(Error::Contract("matrix is not skew-symmetric".into()));
    }
    Ok(())
}

/// `B = I − uuᵀ − wwᵀ + uwᵀ + wuᵀ` for an orthonormal basis `{u, w}` of the
/// two-dimensional kernel of `X`. `B` swaps `u` and `w`, so `BᵀXB = X` and
/// `det B = −1`.
pub fn pf_kernel_swap(x: &DenseMatrix) -> Result<DenseMatrix> {
    check_skew(x)?;
    let m = x.rows();
    let s = svd(x)?;
    let delta = RANK_RTOL * s.sigma[0];
    let kernel = s.sigma.iter().filter(|&&v| v <= delta).count();
    if kernel != 2 {
        return Err(Error::NonRegular(format!("kernel of the skew matrix has dimension {kernel}, expected 2")));
    }
    let (u, w) = (s.v.column(m - 2), s.v.column(m - 1));
    Ok(DenseMatrix::from_fn(m, m, |i, j| {
        f64::from(u8::from(i == j)) - u[i] * u[j] - w[i] * w[j] + u[i] * w[j] + w[i] * u[j]
    }))
}

/// `QJQᵀ` from the canonical form `X = QΛQᵀ`, with `J` swapping the last two
/// coordinates; `Λ` has its zero block last, so `JΛJ = Λ`.
pub fn pf_canonical_swap(x: &DenseMatrix) -> Result<DenseMatrix> {
    check_skew(x)?;
    let form = skew_canonical_form(x)?;
    let n = form.lambdas.len();
    let delta = RANK_RTOL * form.lambdas[0];
    let zero_blocks = form.lambdas.iter().filter(|&&l| l <= delta).count();
    if zero_blocks != 1 {
        return Err(Error::NonRegular(format!("skew matrix has {zero_blocks} zero canonical blocks, expected 1")));
    }
    let mut j = DenseMatrix::identity(2 * n);
    j.swap_columns(2 * n - 2, 2 * n - 1);
    Ok(&(&form.q * &j) * &form.q.transpose())
}

fn pf_isometry(x: &DenseMatrix, b: DenseMatrix) -> Result<AmbientIsometry> {
    fixes(&(&(&b.transpose() * x) * &b), x)?;
    conjugation_isometry(&b)
}

/// `Y ↦ BᵀYB` with `B` from [`pf_kernel_swap`]: fixes `X` and reverses the sign
/// of `pf` everywhere.
pub fn pf_helicoidal_at(x: &DenseMatrix) -> Result<AmbientIsometry> {
    pf_isometry(x, pf_kernel_swap(x)?)
}

/// Same map built from the canonical form.
pub fn pf_helicoidal_canonical_at(x: &DenseMatrix) -> Result<AmbientIsometry> {
    pf_isometry(x, pf_canonical_swap(x)?)
}

#[cfg(test)]
mod tests {
    use super::super::{helicoidal_check, SurfaceHandle, TorusHandle, VarietyHandle};
    use super::*;
    use crate::implicit::{sample_det_variety, sample_pf_variety, skew_from_upper};
    use crate::matlib::{canonical_lambda, determinant, distance, dot, pfaffian_fast};
    use crate::parametric::generalized_clifford;
    use crate::rng::{gaussian_vec, stream};

    #[test]
    fn xi_is_the_block_swap() {
        let xi = xi_swap(1);
        assert_eq!(xi.apply(&[1.0, 2.0, 3.0, 4.0]), vec![3.0, 4.0, 1.0, 2.0]);
        for p in 1..5 {
            let xi = xi_swap(p);
            assert_eq!(xi.compose(&xi).unwrap().matrix(), &DenseMatrix::identity(2 * p + 2));
            assert_eq!(xi.parity(), if (p + 1) % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn xi_preserves_equal_radius_products() {
        let mut rng = stream(71, 0);
        for p in 1..4 {
            let imm = generalized_clifford(p, p).unwrap();
            let handle = TorusHandle::clifford(p);
            for _ in 0..20 {
                let x = imm.value(&imm.sample_point(&mut rng));
                assert!(handle.membership(&x) < 1e-14);
                assert!(handle.membership(&xi_swap(p).apply(&x)) < 1e-14);
            }
        }
    }

    #[test]
    fn eta_is_identity_at_fixed_form_points() {
        let eta = eta_conjugator(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!((eta.matrix().clone() - DenseMatrix::identity(4)).max_abs() < 1e-15);
    }

    #[test]
    fn conjugated_xi_at_axis_point() {
        let q = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        let iso = clifford_helicoidal_at(&q).unwrap();
        let report = helicoidal_check(&TorusHandle::clifford(1), &iso, &q, 50, &mut stream(72, 0)).unwrap();
        assert!(report.verdict, "{report:?}");
        assert!(matches!(eta_conjugator(&[1.0, 0.0, 0.0, 0.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn conjugated_xi_on_random_torus_points() {
        let mut rng = stream(73, 0);
        for p in [1usize, 2] {
            let imm = generalized_clifford(p, p).unwrap();
            let handle = TorusHandle::clifford(p);
            for _ in 0..20 {
                let q = imm.value(&imm.sample_point(&mut rng));
                let iso = clifford_helicoidal_at(&q).unwrap();
                let report = helicoidal_check(&handle, &iso, &q, 20, &mut rng).unwrap();
                assert!(report.verdict, "{report:?}");
                assert!(report.fixed_distance <= 1e-10);
            }
        }
    }

    #[test]
    fn det_reflection_examples() {
        let a = det_reflection_at(&DenseMatrix::from_diagonal(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(a, DenseMatrix::from_diagonal(&[1.0, 1.0, -1.0]));

        let mut rng = stream(74, 0);
        let p = sample_det_variety(4, &mut rng).unwrap();
        let x = DenseMatrix::new(4, 4, p.x).unwrap();
        let a = det_reflection_at(&x).unwrap();
        assert!((&a * &x - x.clone()).max_abs() <= 1e-10);
        let iso = det_helicoidal_at(&x).unwrap();
        assert_eq!(iso.parity(), 1);
        for _ in 0..100 {
            let y = DenseMatrix::new(4, 4, gaussian_vec(&mut rng, 16)).unwrap();
            let d = determinant(&y).unwrap();
            let image = DenseMatrix::new(4, 4, iso.apply(y.as_slice())).unwrap();
            let di = determinant(&image).unwrap();
            assert_eq!(di.signum(), -d.signum());
            assert!((di + d).abs() <= 1e-12 * d.abs().max(1.0));
        }
    }

    #[test]
    fn det_reflection_rejects_nonregular_points() {
        assert!(matches!(det_reflection_at(&DenseMatrix::identity(3)), Err(Error::NotSingular { .. })));
        assert!(matches!(det_reflection_at(&DenseMatrix::from_diagonal(&[1.0, 0.0, 0.0])), Err(Error::NonRegular(_))));
    }

    #[test]
    fn flattened_actions_preserve_the_frobenius_product() {
        let mut rng = stream(75, 0);
        let a = rotation_taking(&[1.0, 0.0, 0.0], &crate::rng::unit_vec(&mut rng, 3)).unwrap();
        let left = left_multiplication_isometry(&a).unwrap();
        let (y, z) = (gaussian_vec(&mut rng, 9), gaussian_vec(&mut rng, 9));
        assert!((dot(&left.apply(&y), &left.apply(&z)) - dot(&y, &z)).abs() < 1e-12);

        let b = householder_reflection(&crate::rng::unit_vec(&mut rng, 6)).unwrap();
        let conj = conjugation_isometry(&b).unwrap();
        let (y, z) = (gaussian_vec(&mut rng, 15), gaussian_vec(&mut rng, 15));
        assert!((dot(&conj.apply(&y), &conj.apply(&z)) - dot(&y, &z)).abs() < 1e-12);
        // the induced map agrees with BᵀYB on matrices
        let ym = mu_embed(&y, 3).unwrap();
        let direct = &(&b.transpose() * &ym) * &b;
        assert!((mu_embed(&conj.apply(&y), 3).unwrap() - direct).max_abs() < 1e-14);
    }

    #[test]
    fn kernel_swap_on_canonical_lambda_is_the_last_swap() {
        let x = canonical_lambda(&[2.0, 1.0, 0.0]);
        let b = pf_kernel_swap(&x).unwrap();
        let mut j = DenseMatrix::identity(6);
        j.swap_columns(4, 5);
        assert!((b - j.clone()).max_abs() < 1e-12);
        assert!((pf_canonical_swap(&x).unwrap() - j).max_abs() < 1e-12);
    }

    #[test]
    fn kernel_swap_fixes_x_and_flips_pf() {
        let mut rng = stream(76, 0);
        let p = sample_pf_variety(2, &mut rng).unwrap();
        let x = DenseMatrix::new(4, 4, skew_from_upper(&p.x, 4)).unwrap();
        let b = pf_kernel_swap(&x).unwrap();
        assert!(b.orthogonality_defect() <= 1e-12);
        assert!((determinant(&b).unwrap() + 1.0).abs() < 1e-12);
        assert!((&(&b.transpose() * &x) * &b - x.clone()).max_abs() <= 1e-10);
        for _ in 0..100 {
            let y = DenseMatrix::new(4, 4, gaussian_vec(&mut rng, 16)).unwrap().antisymmetrize();
            let image = (&(&b.transpose() * &y) * &b).antisymmetrize();
            let (before, after) = (pfaffian_fast(&y).unwrap(), pfaffian_fast(&image).unwrap());
            assert!((before + after).abs() <= 1e-12 * before.abs().max(1.0));
        }
    }

    #[test]
    fn both_pf_constructions_fix_x_and_pass() {
        let mut rng = stream(77, 0);
        for n in [2usize, 3] {
            let handle = VarietyHandle::pf(n).unwrap();
            for _ in 0..5 {
                let p = sample_pf_variety(n, &mut rng).unwrap();
                let x = mu_embed(&p.x, n).unwrap();
                let kernel = pf_kernel_swap(&x).unwrap();
                let canonical = pf_canonical_swap(&x).unwrap();
                // both are the identity off the kernel plane and differ only within it
                let s = svd(&x).unwrap();
                let m = 2 * n;
                let (u, w) = (s.v.column(m - 2), s.v.column(m - 1));
                let complement = DenseMatrix::from_fn(m, m, |i, j| f64::from(u8::from(i == j)) - u[i] * u[j] - w[i] * w[j]);
                assert!((&(kernel.clone() - canonical.clone()) * &complement).max_abs() <= 1e-9);
                assert!((&canonical * &complement - complement.clone()).max_abs() <= 1e-9);
                for iso in [pf_helicoidal_at(&x).unwrap(), pf_helicoidal_canonical_at(&x).unwrap()] {
                    // a reflection of R^{2n} induces determinant (−1)^{2n−1} on skew matrices
                    assert_eq!(iso.parity(), -1);
                    let report = helicoidal_check(&handle, &iso, &p.x, 20, &mut rng).unwrap();
                    assert!(report.verdict, "{report:?}");
                    assert!(distance(&iso.apply(&p.x), &p.x) <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn pf_constructions_reject_nonregular_points() {
        assert!(matches!(pf_kernel_swap(&canonical_lambda(&[1.0, 1.0])), Err(Error::NonRegular(_))));
        assert!(matches!(pf_kernel_swap(&canonical_lambda(&[1.0, 0.0, 0.0])), Err(Error::NonRegular(_))));
        assert!(matches!(pf_canonical_swap(&canonical_lambda(&[1.0, 0.0, 0.0])), Err(Error::NonRegular(_))));
        assert!(matches!(pf_kernel_swap(&DenseMatrix::identity(4)), Err(Error::Contract(_))));
    }
}
