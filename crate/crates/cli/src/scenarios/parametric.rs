use std::f64::consts::FRAC_1_SQRT_2;

use minlab_core::implicit::{level_residual, sphere_field, VarietyPoint};
use minlab_core::matlib::norm;
use minlab_core::parametric::{
    generalized_clifford, great_sphere, mean_curvature_sphere_at, product_metric_laws, scaled_product, small_sphere,
    sphere_minimality_residual, torus_with_radii, DerivativeMode, Immersion,
};
use minlab_core::rng::unit_vec;

use super::{Aborted, Sampler};
use crate::report::{CheckStats, Criterion};

/// Metric identities of scaled products hold to this relative accuracy.
const METRIC_LAW_TOL: f64 = 1e-9;
/// Controls must stay at least this far from minimal.
const CONTROL_BOUND: f64 = 0.1;

fn residuals(sampler: &Sampler, group: u64, samples: usize, imm: &Immersion) -> Result<Vec<f64>, Aborted> {
    sampler.column(group, samples, |_, rng| sphere_minimality_residual(imm, &imm.sample_point(rng)))
}

pub(crate) fn product(sampler: &Sampler, samples: usize, mode: DerivativeMode, tol: f64) -> Result<Vec<CheckStats>, Aborted> {
    let sphere = |k| great_sphere(k).expect("k >= 1");
    let pairs = [
        ("S1xS1", sphere(1), sphere(1)),
        ("S1xS2", sphere(1), sphere(2)),
        ("S2xS3", sphere(2), sphere(3)),
        ("CliffordxS1", generalized_clifford(1, 1).expect("p, q >= 1"), sphere(1)),
    ];
    let mut checks = Vec::new();
    for (group, (label, first, second)) in pairs.iter().enumerate() {
        let exact = scaled_product(first, second).expect("unit-sphere factors");
        let product = exact.clone().with_mode(mode);
        let cols = sampler.columns(group as u64, samples, 3, |_, rng| {
            let phi = exact.sample_point(rng);
            let laws = product_metric_laws(first, second, &exact, &phi)?;
            Ok(vec![sphere_minimality_residual(&product, &phi)?, laws.block_defect, laws.det_relative_error])
        })?;
        let mut cols = cols.into_iter();
        let mut next = || cols.next().expect("three columns");
        checks.push(CheckStats::new(format!("{label}/residual"), Criterion::AtMost(tol), true, next()));
        checks.push(CheckStats::new(format!("{label}/metric-blocks"), Criterion::AtMost(METRIC_LAW_TOL), false, next()));
        checks.push(CheckStats::new(format!("{label}/metric-determinant"), Criterion::AtMost(METRIC_LAW_TOL), false, next()));
    }
    Ok(checks)
}

pub(crate) fn clifford(sampler: &Sampler, samples: usize, mode: DerivativeMode, tol: f64) -> Result<Vec<CheckStats>, Aborted> {
    let torus = torus_with_radii(FRAC_1_SQRT_2).expect("radius in (0, 1)").with_mode(mode);
    let cols = sampler.columns(0, samples, 2, |_, rng| {
        let phi = torus.sample_point(rng);
        Ok(vec![sphere_minimality_residual(&torus, &phi)?, norm(&mean_curvature_sphere_at(&torus, &phi)?)])
    })?;
    let [residual, h]: [Vec<f64>; 2] = cols.try_into().expect("two columns");
    Ok(vec![
        CheckStats::new("residual", Criterion::AtMost(tol), true, residual),
        CheckStats::new("mean-curvature-norm", Criterion::AtMost(tol), true, h),
    ])
}

pub(crate) fn generalized(
    sampler: &Sampler,
    samples: usize,
    mode: DerivativeMode,
    tol: f64,
    p: usize,
    q: usize,
) -> Result<Vec<CheckStats>, Aborted> {
    let imm = generalized_clifford(p, q).expect("validated p, q").with_mode(mode);
    let values = residuals(sampler, 0, samples, &imm)?;
    Ok(vec![CheckStats::new(format!("S{p}xS{q}/residual"), Criterion::AtMost(tol), true, values)])
}

pub(crate) fn nonminimal_control(sampler: &Sampler, samples: usize, mode: DerivativeMode) -> Result<Vec<CheckStats>, Aborted> {
    let torus = torus_with_radii(0.6).expect("radius in (0, 1)").with_mode(mode);
    let latitude = small_sphere(0.6).expect("radius in (0, 1)").with_mode(mode);
    let bound = Criterion::AtLeast(CONTROL_BOUND);
    let mut checks = vec![
        CheckStats::new("torus-0.6/residual", bound, true, residuals(sampler, 0, samples, &torus)?),
        CheckStats::new("small-sphere-0.6/residual", bound, true, residuals(sampler, 1, samples, &latitude)?),
    ];
    // the round sphere {‖x‖² = 1} in R^N has level residual N − 1
    let dims = [3usize, 4, 9];
    let values = sampler.column(2, samples, |i, rng| {
        let dim = dims[i % dims.len()];
        let field = sphere_field(dim);
        let point = VarietyPoint::new(&field, unit_vec(rng, dim), 1.0)?;
        level_residual(&field, &point)
    })?;
    checks.push(CheckStats::new("unit-sphere-field/level-residual", Criterion::Above(1.0), true, values));
    Ok(checks)
}
