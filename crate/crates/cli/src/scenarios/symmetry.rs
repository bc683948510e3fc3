use std::f64::consts::FRAC_1_SQRT_2;

use minlab_core::implicit::{mu_embed, sample_det_variety, sample_pf_variety};
use minlab_core::parametric::generalized_clifford;
use minlab_core::rng::{unit_vec, SampleRng};
use minlab_core::symmetry::{
    clifford_helicoidal_at, det_helicoidal_at, helicoidal_check, helicoidal_crosscheck, pf_helicoidal_at,
    pf_helicoidal_canonical_at, xi_swap, AmbientIsometry, CrosscheckScenario, SurfaceHandle, TorusHandle, VarietyHandle,
};
use minlab_core::{DenseMatrix, Error};
use rayon::prelude::*;

use super::{bool_value, Aborted, Sampler};
use crate::report::{CheckStats, Criterion};

/// On-surface and off-surface samples per helicoidal check.
const CHECK_SAMPLES: usize = 20;
const FIXED_POINT_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-10;

/// `[fixed distance, surface preservation, side swap, orthogonality defect]`
fn evaluate(
    handle: &dyn SurfaceHandle,
    iso: &AmbientIsometry,
    p: &[f64],
    rng: &mut SampleRng,
) -> minlab_core::Result<Vec<f64>> {
    let report = helicoidal_check(handle, iso, p, CHECK_SAMPLES, rng)?;
    Ok(vec![report.fixed_distance, report.preserves_surface, report.swaps_sides, iso.matrix().orthogonality_defect()])
}

fn helicoidal_stats(prefix: &str, cols: Vec<Vec<f64>>) -> Vec<CheckStats> {
    let [fixed, preserved, swapped, ortho]: [Vec<f64>; 4] = cols.try_into().expect("four columns");
    vec![
        CheckStats::new(format!("{prefix}fixed-distance"), Criterion::AtMost(FIXED_POINT_TOL), false, fixed),
        CheckStats::new(format!("{prefix}surface-preservation"), Criterion::AtLeast(1.0), false, preserved),
        CheckStats::new(format!("{prefix}side-swap"), Criterion::AtLeast(1.0), false, swapped),
        CheckStats::new(format!("{prefix}orthogonality"), Criterion::AtMost(ORTHO_TOL), false, ortho),
    ]
}

pub(crate) fn helicoidal_clifford(sampler: &Sampler, samples: usize, ps: &[usize]) -> Result<Vec<CheckStats>, Aborted> {
    let mut checks = Vec::new();
    for (k, &p) in ps.iter().enumerate() {
        let handle = TorusHandle::clifford(p);
        let xi = xi_swap(p);
        let fixed_form = sampler.columns(2 * k as u64, samples, 4, |_, rng| {
            let a: Vec<f64> = unit_vec(rng, p + 1).into_iter().map(|v| v * FRAC_1_SQRT_2).collect();
            let q: Vec<f64> = a.iter().chain(&a).copied().collect();
            evaluate(&handle, &xi, &q, rng)
        })?;
        checks.extend(helicoidal_stats(&format!("p{p}/xi-at-fixed-form/"), fixed_form));
        let torus = generalized_clifford(p, p).expect("p >= 1");
        let conjugated = sampler.columns(2 * k as u64 + 1, samples, 4, |_, rng| {
            let q = torus.value(&torus.sample_point(rng));
            evaluate(&handle, &clifford_helicoidal_at(&q)?, &q, rng)
        })?;
        checks.extend(helicoidal_stats(&format!("p{p}/conjugated-xi/"), conjugated));
    }
    Ok(checks)
}

pub(crate) fn helicoidal_det(sampler: &Sampler, samples: usize, n: usize) -> Result<Vec<CheckStats>, Aborted> {
    let handle = VarietyHandle::det(n).expect("validated n");
    let cols = sampler.columns(0, samples, 4, |_, rng| {
        let point = sample_det_variety(n, rng)?;
        let iso = det_helicoidal_at(&DenseMatrix::new(n, n, point.x.clone())?)?;
        evaluate(&handle, &iso, &point.x, rng)
    })?;
    Ok(helicoidal_stats("", cols))
}

pub(crate) fn helicoidal_pf(sampler: &Sampler, samples: usize, n: usize) -> Result<Vec<CheckStats>, Aborted> {
    let handle = VarietyHandle::pf(n).expect("validated n");
    let cols = sampler.columns(0, samples, 5, |_, rng| {
        let point = sample_pf_variety(n, rng)?;
        let x = mu_embed(&point.x, n)?;
        let mut values = evaluate(&handle, &pf_helicoidal_at(&x)?, &point.x, rng)?;
        let canonical = helicoidal_check(&handle, &pf_helicoidal_canonical_at(&x)?, &point.x, CHECK_SAMPLES, rng)?;
        values.push(bool_value(canonical.verdict));
        Ok(values)
    })?;
    let mut cols = cols;
    let canonical = cols.pop().expect("five columns");
    let mut checks = helicoidal_stats("", cols);
    checks.push(CheckStats::new("canonical-construction-passes", Criterion::AtLeast(1.0), false, canonical));
    Ok(checks)
}

/// Joint helicoidal/residual runs on the Clifford torus, the 3 × 3 determinant
/// cone, the 4 × 4 Pfaffian cone and the non-minimal 0.6 torus.
pub(crate) fn crosscheck(seed: u64, points: usize, tol: Option<f64>) -> Result<Vec<CheckStats>, Aborted> {
    let scenarios = [
        CrosscheckScenario::Clifford { p: 1 },
        CrosscheckScenario::Det { n: 3 },
        CrosscheckScenario::Pf { n: 2 },
        CrosscheckScenario::ControlTorus { r: 0.6 },
    ];
    let reports: Vec<_> = scenarios.par_iter().map(|s| helicoidal_crosscheck(*s, points, CHECK_SAMPLES, seed)).collect();
    let mut checks = Vec::new();
    for (scenario, report) in scenarios.iter().zip(reports) {
        let report = match report {
            Ok(r) => r,
            Err(e @ Error::SamplingExhausted { .. }) => return Err(Aborted(e.to_string())),
            Err(_) => {
                checks.push(CheckStats::new(format!("{}/completed", scenario.label()), Criterion::AtLeast(1.0), false, vec![0.0]));
                continue;
            }
        };
        let label = report.scenario.label();
        let helicoidal: Vec<f64> = report.points.iter().map(|p| bool_value(p.helicoidal)).collect();
        if report.scenario.expects_minimal() {
            let at_helicoidal: Vec<f64> = report.points.iter().filter(|p| p.helicoidal).map(|p| p.residual).collect();
            let limit = tol.unwrap_or(report.tol);
            checks.push(CheckStats::new(format!("{label}/helicoidal"), Criterion::AtLeast(1.0), false, helicoidal));
            checks.push(CheckStats::new(format!("{label}/residual-at-helicoidal"), Criterion::AtMost(limit), true, at_helicoidal));
        } else {
            let residuals: Vec<f64> = report.points.iter().map(|p| p.residual).collect();
            checks.push(CheckStats::new(format!("{label}/helicoidal"), Criterion::AtMost(0.0), false, helicoidal));
            checks.push(CheckStats::new(format!("{label}/residual"), Criterion::AtLeast(0.1), true, residuals));
        }
    }
    Ok(checks)
}
