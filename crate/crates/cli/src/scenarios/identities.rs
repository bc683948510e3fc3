use minlab_core::implicit::{det_variety, pf_variety, ScalarField};
use minlab_core::matlib::{determinant, pfaffian_combinatorial, pfaffian_fast, skew_canonical_form};
use minlab_core::parametric::generalized_clifford;
use minlab_core::rng::gaussian_vec;
use minlab_core::DenseMatrix;

use super::{Aborted, Sampler};
use crate::congruence::{clifford_det_witness, product_pf_witness};
use crate::report::{CheckStats, Criterion};

const PF_SQUARED_TOL: f64 = 1e-10;
const PF_CONGRUENCE_TOL: f64 = 1e-8;
const PF_AGREEMENT_TOL: f64 = 1e-9;
const RECONSTRUCTION_TOL: f64 = 1e-10;
const Q_ORTHO_TOL: f64 = 1e-12;
const WITNESS_ORTHO_TOL: f64 = 1e-12;

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Random pairs `(A, B)` of sizes `2, 4, 6, 8` in turn, `A` skew and `B`
/// Gaussian.
pub(crate) fn pfaffian_identities(sampler: &Sampler, samples: usize) -> Result<Vec<CheckStats>, Aborted> {
    let cols = sampler.columns(0, samples, 5, |i, rng| {
        let m = 2 * (1 + i % 4);
        let a = DenseMatrix::new(m, m, gaussian_vec(rng, m * m))?.antisymmetrize();
        let b = DenseMatrix::new(m, m, gaussian_vec(rng, m * m))?;
        let pf = pfaffian_fast(&a)?;
        let squared = relative(pf * pf, determinant(&a)?);
        let congruent = (&(&b.transpose() * &a) * &b).antisymmetrize();
        let law = relative(pfaffian_fast(&congruent)?, determinant(&b)? * pf);
        let agreement = relative(pfaffian_combinatorial(&a)?, pf);
        let form = skew_canonical_form(&a)?;
        let reconstruction = (form.reconstruct() - a.clone()).frobenius_norm() / a.frobenius_norm();
        Ok(vec![squared, law, agreement, reconstruction, form.q.orthogonality_defect()])
    })?;
    let [squared, law, agreement, reconstruction, ortho]: [Vec<f64>; 5] = cols.try_into().expect("five columns");
    Ok(vec![
        CheckStats::new("pf-squared-equals-det", Criterion::AtMost(PF_SQUARED_TOL), false, squared),
        CheckStats::new("pf-congruence-law", Criterion::AtMost(PF_CONGRUENCE_TOL), false, law),
        CheckStats::new("combinatorial-vs-fast", Criterion::AtMost(PF_AGREEMENT_TOL), false, agreement),
        CheckStats::new("canonical-reconstruction", Criterion::AtMost(RECONSTRUCTION_TOL), false, reconstruction),
        CheckStats::new("canonical-orthogonality", Criterion::AtMost(Q_ORTHO_TOL), false, ortho),
    ])
}

/// Images of sampled product-torus points under the orthogonal witnesses
/// must lie on the determinant and Pfaffian cones.
pub(crate) fn congruence(sampler: &Sampler, samples: usize, tol: f64) -> Result<Vec<CheckStats>, Aborted> {
    let (w_det, w_pf) = (clifford_det_witness(), product_pf_witness());
    let (det2, pf4) = (det_variety(2).expect("n = 2"), pf_variety(2).expect("n = 2"));
    let (torus, product) = (generalized_clifford(1, 1).expect("p = 1"), generalized_clifford(2, 2).expect("p = 2"));
    let det_values = sampler.column(0, samples, |_, rng| {
        let u = torus.value(&torus.sample_point(rng));
        Ok(det2.value(&w_det.matvec(&u)).abs())
    })?;
    let pf_values = sampler.column(1, samples, |_, rng| {
        let u = product.value(&product.sample_point(rng));
        Ok(pf4.value(&w_pf.matvec(&u)).abs())
    })?;
    Ok(vec![
        CheckStats::new(
            "witness-orthogonality",
            Criterion::AtMost(WITNESS_ORTHO_TOL),
            false,
            vec![w_det.orthogonality_defect(), w_pf.orthogonality_defect()],
        ),
        CheckStats::new("clifford-torus-into-det2", Criterion::AtMost(tol), true, det_values),
        CheckStats::new("s2xs2-into-pf4", Criterion::AtMost(tol), true, pf_values),
    ])
}
