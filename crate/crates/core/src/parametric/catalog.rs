//! Concrete immersions: great spheres, product tori, latitude spheres, scaled
//! products and generalized Clifford tori, plus the checks that relate them.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use super::{metric_at, DerivativeMode, Immersion};
use crate::autodiff::{first_order_jet, HyperDual};
use crate::matlib::{distance, DenseMatrix};
use crate::tolerances::{CHART_MARGIN, FD_STEP};
use crate::{Error, Result};

/// Angular chart of the unit sphere `S^k ⊂ R^{k+1}`:
/// `x_1 = cos θ_1, …, x_k = sin θ_1⋯sin θ_{k−1} cos θ_k, x_{k+1} = sin θ_1⋯sin θ_k`.
fn sphere_coords(theta: &[HyperDual]) -> Vec<HyperDual> {
    let mut out = Vec::with_capacity(theta.len() + 1);
    let mut prefix = HyperDual::constant(1.0);
    for t in theta {
        out.push(prefix * t.cos());
        prefix *= t.sin();
    }
    out.push(prefix);
    out
}

fn sphere_domain(k: usize) -> Vec<(f64, f64)> {
    let mut d = vec![(CHART_MARGIN, PI - CHART_MARGIN); k - 1];
    d.push((0.0, 2.0 * PI));
    d
}

/// The great sphere `S^k` through its standard angular chart.
pub fn great_sphere(k: usize) -> Result<Immersion> {
    if k == 0 {
        return Err(Error::Contract("great sphere needs k >= 1".into()));
    }
    Immersion::from_fn(format!("S^{k}"), k, k + 1, Some(1.0), sphere_domain(k), sphere_coords)
}

/// `S¹(r) × S¹(√(1−r²)) ⊂ S³`; minimal only for `r = 1/√2`.
pub fn torus_with_radii(r: f64) -> Result<Immersion> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Contract(format!("torus radius {r} outside (0, 1)")));
    }
    let s = (1.0 - r * r).sqrt();
    Immersion::from_fn(
        format!("S^1({r})xS^1({s})"),
        2,
        4,
        Some(1.0),
        vec![(0.0, 2.0 * PI); 2],
        move |x: &[HyperDual]| vec![x[0].cos() * r, x[0].sin() * r, x[1].cos() * s, x[1].sin() * s],
    )
}

/// Latitude sphere `S²(r) × {√(1−r²)} ⊂ S³`, umbilic and not minimal for `r < 1`.
pub fn small_sphere(r: f64) -> Result<Immersion> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Contract(format!("small sphere radius {r} outside (0, 1)")));
    }
    let height = (1.0 - r * r).sqrt();
    Immersion::from_fn(format!("S^2({r})"), 2, 4, Some(1.0), sphere_domain(2), move |x: &[HyperDual]| {
        let mut v: Vec<HyperDual> = sphere_coords(x).into_iter().map(|c| c * r).collect();
        v.push(HyperDual::constant(height));
        v
    })
}

fn require_unit_sphere(imm: &Immersion) -> Result<()> {
    match imm.sphere_radius() {
        Some(r) if (r - 1.0).abs() <= 1e-12 => Ok(()),
        other => Err(Error::Contract(format!("factor {} must lie in a unit sphere (radius {other:?})", imm.name()))),
    }
}

/// `√(n₁/(n₁+n₂)) Σ₁ × √(n₂/(n₁+n₂)) Σ₂ ⊂ S^{p+q+1}` for `Σ₁ ⊂ S^p`, `Σ₂ ⊂ S^q`.
pub fn scaled_product(first: &Immersion, second: &Immersion) -> Result<Immersion> {
    require_unit_sphere(first)?;
    require_unit_sphere(second)?;
    let (n1, n2) = (first.chart_dim(), second.chart_dim());
    let total = (n1 + n2) as f64;
    let (w1, w2) = ((n1 as f64 / total).sqrt(), (n2 as f64 / total).sqrt());
    let (m1, m2) = (Arc::clone(first.map()), Arc::clone(second.map()));
    let mut domain = first.domain().to_vec();
    domain.extend_from_slice(second.domain());
    let imm = Immersion::new(
        format!("{}x{}", first.name(), second.name()),
        n1 + n2,
        first.ambient_dim() + second.ambient_dim(),
        Arc::new(move |x: &[HyperDual]| {
            let mut v: Vec<HyperDual> = m1.eval(&x[..n1]).into_iter().map(|c| c * w1).collect();
            v.extend(m2.eval(&x[n1..]).into_iter().map(|c| c * w2));
            v
        }),
        Some(1.0),
        domain,
    )?;
    Ok(imm.with_mode(first.mode()))
}

/// `S^p(√(p/(p+q))) × S^q(√(q/(p+q))) ⊂ S^{p+q+1}` with its own chart: each
/// factor uses the angular chart with coordinates listed in reverse order.
pub fn generalized_clifford(p: usize, q: usize) -> Result<Immersion> {
    if p == 0 || q == 0 {
        return Err(Error::Contract("generalized Clifford torus needs p, q >= 1".into()));
    }
    let total = (p + q) as f64;
    let (r1, r2) = ((p as f64 / total).sqrt(), (q as f64 / total).sqrt());
    let mut domain = sphere_domain(p);
    domain.extend(sphere_domain(q));
    Immersion::from_fn(
        format!("S^{p}({r1:.6})xS^{q}({r2:.6})"),
        p + q,
        p + q + 2,
        Some(1.0),
        domain,
        move |x: &[HyperDual]| {
            let mut v: Vec<HyperDual> = sphere_coords(&x[..p]).into_iter().rev().map(|c| c * r1).collect();
            v.extend(sphere_coords(&x[p..]).into_iter().rev().map(|c| c * r2));
            v
        },
    )
}

/// Deviations from the product metric identities at one chart point.
#[derive(Debug, Clone, Copy)]
pub struct ProductMetricLaws {
    /// Max entrywise `|ĝ − blockdiag(n₁/n g, n₂/n g′)|`.
    pub block_defect: f64,
    /// Relative error of `det ĝ = n₁^{n₁} n₂^{n₂} / n^n · g g′`.
    pub det_relative_error: f64,
}

/// Measures the block-metric and determinant laws of `product =
/// scaled_product(first, second)` at `phi`.
pub fn product_metric_laws(first: &Immersion, second: &Immersion, product: &Immersion, phi: &[f64]) -> Result<ProductMetricLaws> {
    let (n1, n2) = (first.chart_dim(), second.chart_dim());
    if product.chart_dim() != n1 + n2 || phi.len() != n1 + n2 {
        return Err(Error::Dimension("product chart does not split into the factor charts".into()));
    }
    let total = (n1 + n2) as f64;
    let g_hat = metric_at(product, phi)?;
    let g1 = metric_at(first, &phi[..n1])?;
    let g2 = metric_at(second, &phi[n1..])?;
    let expected = DenseMatrix::block_diag(&g1.g.scale(n1 as f64 / total), &g2.g.scale(n2 as f64 / total));
    let block_defect = (g_hat.g.clone() - expected).max_abs();
    let coefficient = (n1 as f64).powi(n1 as i32) * (n2 as f64).powi(n2 as i32) / total.powi((n1 + n2) as i32);
    let predicted = coefficient * g1.det_g * g2.det_g;
    let det_relative_error = (g_hat.det_g - predicted).abs() / predicted.abs();
    Ok(ProductMetricLaws { block_defect, det_relative_error })
}

/// Largest relative disagreement between exact jets and central differences
/// (step `1e-5`): first partials against differences of values, second
/// partials against differences of exact first partials.
pub fn jet_consistency(imm: &Immersion, phi: &[f64]) -> Result<f64> {
    let exact = imm.clone().with_mode(DerivativeMode::Ad).jet(phi)?;
    let k = imm.chart_dim();
    let first_at = |x: &[f64]| first_order_jet(|y| imm.map().eval(y), x).1;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
    let mut worst = 0.0f64;
    for a in 0..k {
        let (mut plus, mut minus) = (phi.to_vec(), phi.to_vec());
        plus[a] += FD_STEP;
        minus[a] -= FD_STEP;
        let step = plus[a] - minus[a];
        let (vp, vm) = (imm.value(&plus), imm.value(&minus));
        for (i, d) in exact.first[a].iter().enumerate() {
            worst = worst.max(rel(*d, (vp[i] - vm[i]) / step));
        }
        let (fp, fm) = (first_at(&plus), first_at(&minus));
        for b in 0..k {
            for (i, d) in exact.second[a][b].iter().enumerate() {
                worst = worst.max(rel(*d, (fp[b][i] - fm[b][i]) / step));
            }
        }
    }
    Ok(worst)
}

/// Nearest point of the immersion's image to `y`: damped Gauss–Newton from
/// `starts` random chart points (unconstrained by the sample box). Returns the
/// chart point and the distance.
pub fn closest_point<R: Rng + ?Sized>(imm: &Immersion, y: &[f64], starts: usize, rng: &mut R) -> Result<(Vec<f64>, f64)> {
    if y.len() != imm.ambient_dim() {
        return Err(Error::Dimension(format!("point in R^{} for an immersion into R^{}", y.len(), imm.ambient_dim())));
    }
    let exact = imm.clone().with_mode(DerivativeMode::Ad);
    let k = imm.chart_dim();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..starts.max(1) {
        let mut phi = imm.sample_point(rng);
        let mut dist = distance(&imm.value(&phi), y);
        let mut damping = 1e-3;
        for _ in 0..200 {
            let (value, first) = first_order_jet(|x| exact.map().eval(x), &phi);
            let residual: Vec<f64> = value.iter().zip(y).map(|(m, t)| m - t).collect();
            let gradient: Vec<f64> = first.iter().map(|d| crate::matlib::dot(d, &residual)).collect();
            let gram = DenseMatrix::from_fn(k, k, |a, b| crate::matlib::dot(&first[a], &first[b]));
            let mut improved = false;
            while damping < 1e12 {
                let mut system = gram.to_nalgebra();
                for a in 0..k {
                    system[(a, a)] += damping * (1.0 + gram[(a, a)]);
                }
                let rhs = nalgebra::DVector::from_iterator(k, gradient.iter().map(|g| -g));
                let Some(step) = system.lu().solve(&rhs) else {
                    damping *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = phi.iter().zip(step.iter()).map(|(p, s)| p + s).collect();
                let trial_dist = distance(&imm.value(&trial), y);
                if trial_dist < dist {
                    phi = trial;
                    dist = trial_dist;
                    damping = (damping * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
                damping *= 10.0;
            }
            if !improved || dist < 1e-15 {
                break;
            }
        }
        if best.as_ref().is_none_or(|(_, d)| dist < *d) {
            best = Some((phi, dist));
        }
    }
    Ok(best.expect("at least one start"))
}
