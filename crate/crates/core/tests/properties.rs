use minlab_core::implicit::{det_variety, level_residual, mu_embed, mu_inverse, pf_variety, sample_det_variety, sample_pf_variety, ScalarField};
use minlab_core::matlib::{
    determinant, householder_reflection, norm, pfaffian_combinatorial, pfaffian_fast, rotation_taking,
    skew_canonical_form, svd,
};
use minlab_core::rng::stream;
use minlab_core::symmetry::{det_helicoidal_at, pf_helicoidal_at};
use minlab_core::DenseMatrix;
use proptest::prelude::*;

fn entries(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, len)
}

/// Skew matrix of even size `2k`, `k ∈ 1..=4`.
fn skew() -> impl Strategy<Value = DenseMatrix> {
    (1usize..=4).prop_flat_map(|k| entries(4 * k * k).prop_map(move |v| DenseMatrix::new(2 * k, 2 * k, v).unwrap().antisymmetrize()))
}

fn skew_and_square() -> impl Strategy<Value = (DenseMatrix, DenseMatrix)> {
    (1usize..=4).prop_flat_map(|k| {
        let m = 2 * k;
        (entries(m * m), entries(m * m))
            .prop_map(move |(a, b)| (DenseMatrix::new(m, m, a).unwrap().antisymmetrize(), DenseMatrix::new(m, m, b).unwrap()))
    })
}

fn rectangular() -> impl Strategy<Value = DenseMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| entries(r * c).prop_map(move |v| DenseMatrix::new(r, c, v).unwrap()))
}

fn unit(v: &[f64]) -> Vec<f64> {
    let len = norm(v);
    v.iter().map(|x| x / len).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pfaffian_squares_to_determinant(a in skew()) {
        let pf = pfaffian_fast(&a).unwrap();
        let scale = a.frobenius_norm().powi(a.rows() as i32).max(1e-300);
        prop_assert!((pf * pf - determinant(&a).unwrap()).abs() <= 1e-10 * scale);
    }

    #[test]
    fn pfaffian_congruence_law((a, b) in skew_and_square()) {
        let congruent = (&(&b.transpose() * &a) * &b).antisymmetrize();
        let lhs = pfaffian_fast(&congruent).unwrap();
        let rhs = determinant(&b).unwrap() * pfaffian_fast(&a).unwrap();
        let scale = (a.frobenius_norm() * b.frobenius_norm().powi(2)).powi(a.rows() as i32 / 2).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale, "lhs {lhs}, rhs {rhs}");
    }

    #[test]
    fn pfaffian_algorithms_agree(a in skew()) {
        let fast = pfaffian_fast(&a).unwrap();
        let combinatorial = pfaffian_combinatorial(&a).unwrap();
        let scale = a.frobenius_norm().powi(a.rows() as i32 / 2).max(1e-300);
        prop_assert!((fast - combinatorial).abs() <= 1e-12 * scale);
    }

    #[test]
    fn canonical_form_round_trip(a in skew()) {
        let form = skew_canonical_form(&a).unwrap();
        prop_assert!((form.reconstruct() - a.clone()).frobenius_norm() <= 1e-10 * a.frobenius_norm().max(1e-300));
        prop_assert!(form.q.orthogonality_defect() <= 1e-12);
        prop_assert!(form.lambdas.iter().all(|&l| l >= 0.0));
        prop_assert!(form.lambdas.windows(2).all(|w| w[0] >= w[1]));
        let product: f64 = form.lambdas.iter().product();
        // pf(QΛQᵀ) = det(Q)·Πλ
        let pf = pfaffian_fast(&a).unwrap();
        prop_assert!((pf.abs() - product).abs() <= 1e-10 * a.frobenius_norm().powi(a.rows() as i32 / 2).max(1e-300));
    }

    #[test]
    fn svd_reconstructs(m in rectangular()) {
        let d = svd(&m).unwrap();
        prop_assert!((d.reconstruct() - m.clone()).frobenius_norm() <= 1e-12 * m.frobenius_norm().max(1.0));
        prop_assert!(d.u.orthogonality_defect() <= 1e-12);
        prop_assert!(d.v.orthogonality_defect() <= 1e-12);
        prop_assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(d.sigma.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn householder_is_an_involutive_reflection(v in entries(5)) {
        prop_assume!(norm(&v) > 1e-3);
        let v = unit(&v);
        let h = householder_reflection(&v).unwrap();
        prop_assert!(h.orthogonality_defect() <= 1e-12);
        prop_assert!((&h * &h - DenseMatrix::identity(5)).max_abs() <= 1e-12);
        let image = h.matvec(&v);
        prop_assert!(image.iter().zip(&v).all(|(a, b)| (a + b).abs() <= 1e-12));
        prop_assert!((determinant(&h).unwrap() + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rotation_taking_maps_direction(u in entries(4), w in entries(4), antipodal in any::<bool>()) {
        prop_assume!(norm(&u) > 1e-3 && norm(&w) > 1e-3);
        let u = unit(&u);
        let w = if antipodal { u.iter().map(|x| -x).collect() } else { unit(&w) };
        let r = rotation_taking(&u, &w).unwrap();
        prop_assert!(r.orthogonality_defect() <= 1e-12);
        prop_assert!((determinant(&r).unwrap() - 1.0).abs() <= 1e-12);
        let image = r.matvec(&u);
        prop_assert!(image.iter().zip(&w).all(|(a, b)| (a - b).abs() <= 1e-10));
    }

    #[test]
    fn mu_is_an_isometry(x in entries(6)) {
        let embedded = mu_embed(&x, 2).unwrap();
        prop_assert!(embedded.is_skew(0.0));
        prop_assert!((embedded.frobenius_norm() - norm(&x)).abs() <= 1e-14 * norm(&x).max(1.0));
        let back = mu_inverse(&embedded).unwrap();
        prop_assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-14 * b.abs().max(1.0)));
    }

    #[test]
    fn sampled_cone_points_are_minimal(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = stream(seed, 0);
        let field = det_variety(n).unwrap();
        let point = sample_det_variety(n, &mut rng).unwrap();
        prop_assert!((norm(&point.x) - 1.0).abs() <= 1e-12);
        prop_assert!(field.value(&point.x).abs() <= 1e-12);
        prop_assert!(level_residual(&field, &point).unwrap() <= 1e-8);
    }

    #[test]
    fn helicoidal_constructions_fix_their_point(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = stream(seed, 1);
        let det_point = sample_det_variety(n + 1, &mut rng).unwrap();
        let iso = det_helicoidal_at(&DenseMatrix::new(n + 1, n + 1, det_point.x.clone()).unwrap()).unwrap();
        let image = iso.apply(&det_point.x);
        prop_assert!(image.iter().zip(&det_point.x).all(|(a, b)| (a - b).abs() <= 1e-10));
        // A ⊗ I on R^{m²} with det A = −1
        let m = n + 1;
        prop_assert_eq!(iso.parity(), if m % 2 == 1 { -1 } else { 1 });

        let pf_point = sample_pf_variety(n, &mut rng).unwrap();
        let field = pf_variety(n).unwrap();
        let iso = pf_helicoidal_at(&mu_embed(&pf_point.x, n).unwrap()).unwrap();
        let image = iso.apply(&pf_point.x);
        prop_assert!(image.iter().zip(&pf_point.x).all(|(a, b)| (a - b).abs() <= 1e-10));
        // f ∘ A = −f off the surface as well
        let y: Vec<f64> = pf_point.x.iter().enumerate().map(|(i, v)| v + 0.1 * ((i as f64) - 1.5)).collect();
        let (fy, fay) = (field.value(&y), field.value(&iso.apply(&y)));
        prop_assert!((fy + fay).abs() <= 1e-12 * fy.abs().max(1.0));
    }
}
