use minlab_core::implicit::{check_field, det_variety, level_residual, pf_variety, sample_det_variety, sample_pf_variety, ScalarField, VarietyPoint};
use minlab_core::rng::{gaussian_vec, SampleRng};

use super::{bool_value, mean, Aborted, Sampler};
use crate::report::{CheckStats, Criterion};

/// Fraction of samples accepted on the first draw.
const ACCEPTANCE_FLOOR: f64 = 0.99;
/// Points used for the derivative self-consistency check.
const FIELD_CHECK_POINTS: usize = 50;

fn cone<F>(sampler: &Sampler, samples: usize, tol: f64, field: &dyn ScalarField, draw: F) -> Result<Vec<CheckStats>, Aborted>
where
    F: Fn(&mut SampleRng) -> minlab_core::Result<VarietyPoint> + Sync,
{
    let cols = sampler.columns(0, samples, 2, |_, rng| {
        let point = draw(rng)?;
        Ok(vec![level_residual(field, &point)?, bool_value(point.attempts == 1)])
    })?;
    let [residual, first_draw]: [Vec<f64>; 2] = cols.try_into().expect("two columns");
    let consistency = sampler.column(1, samples.min(FIELD_CHECK_POINTS), |_, rng| {
        Ok(bool_value(check_field(field, &gaussian_vec(rng, field.ambient_dim())).passes()))
    })?;
    Ok(vec![
        CheckStats::new("residual", Criterion::AtMost(tol), true, residual),
        CheckStats::new("first-draw-acceptance", Criterion::AtLeast(ACCEPTANCE_FLOOR), false, vec![mean(&first_draw)]),
        CheckStats::new("field-self-consistency", Criterion::AtLeast(1.0), false, consistency),
    ])
}

pub(crate) fn det_cone(sampler: &Sampler, samples: usize, tol: f64, n: usize) -> Result<Vec<CheckStats>, Aborted> {
    let field = det_variety(n).expect("validated n");
    cone(sampler, samples, tol, &field, |rng| sample_det_variety(n, rng))
}

pub(crate) fn pf_cone(sampler: &Sampler, samples: usize, tol: f64, n: usize) -> Result<Vec<CheckStats>, Aborted> {
    let field = pf_variety(n).expect("validated n");
    cone(sampler, samples, tol, &field, |rng| sample_pf_variety(n, rng))
}
