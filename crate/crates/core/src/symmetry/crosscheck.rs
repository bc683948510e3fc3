//! Joint run of the helicoidal check and the minimality residual: wherever a
//! helicoidal isometry is verified, the residual must vanish.

use super::{
    block_aligner, clifford_helicoidal_at, det_helicoidal_at, helicoidal_check, pf_helicoidal_at, xi_swap, AmbientIsometry,
    TorusHandle, VarietyHandle,
};
use crate::implicit::{level_residual, mu_embed, sample_det_variety, sample_pf_variety};
use crate::matlib::{norm, DenseMatrix};
use crate::parametric::{generalized_clifford, sphere_minimality_residual, torus_with_radii};
use crate::rng::stream;
use crate::{Error, Result};

/// Residual tolerances for the two engines.
const PARAMETRIC_TOL: f64 = 1e-6;
const IMPLICIT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrosscheckScenario {
    /// `S^p(1/√2) × S^p(1/√2)` with `η⁻¹ξη`.
    Clifford { p: usize },
    /// `{det = 0}` in `n × n` matrices with `Y ↦ AY`.
    Det { n: usize },
    /// `{pf = 0}` in skew `2n × 2n` matrices with `Y ↦ BᵀYB`.
    Pf { n: usize },
    /// `S¹(r) × S¹(√(1−r²))`, `r ≠ 1/√2`: not minimal, and no candidate may pass.
    ControlTorus { r: f64 },
}

impl CrosscheckScenario {
    pub fn label(&self) -> String {
        match self {
            Self::Clifford { p } => format!("clifford-p{p}"),
            Self::Det { n } => format!("det-n{n}"),
            Self::Pf { n } => format!("pf-n{n}"),
            Self::ControlTorus { r } => format!("control-torus-r{r}"),
        }
    }

    pub fn expects_minimal(&self) -> bool {
        !matches!(self, Self::ControlTorus { .. })
    }

    pub fn tol(&self) -> f64 {
        match self {
            Self::Clifford { .. } | Self::ControlTorus { .. } => PARAMETRIC_TOL,
            Self::Det { .. } | Self::Pf { .. } => IMPLICIT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckPoint {
    /// Some tried isometry passed the helicoidal check.
    pub helicoidal: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub scenario: CrosscheckScenario,
    pub tol: f64,
    pub points: Vec<CrosscheckPoint>,
}

impl CrosscheckReport {
    pub fn helicoidal_passes(&self) -> usize {
        self.points.iter().filter(|p| p.helicoidal).count()
    }

    /// Points with a verified helicoidal isometry but residual above `tol`.
    pub fn exceptions(&self) -> usize {
        self.points.iter().filter(|p| p.helicoidal && p.residual > self.tol).count()
    }

    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn min_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(f64::INFINITY, f64::min)
    }

    /// No exceptions; minimal scenarios are helicoidal everywhere, the control
    /// nowhere.
    pub fn consistent(&self) -> bool {
        let expected = if self.scenario.expects_minimal() { self.points.len() } else { 0 };
        self.exceptions() == 0 && self.helicoidal_passes() == expected
    }
}

/// Candidate isometries tried at a point of a non-minimal torus: the
/// identity, the block swap, the aligned block swap and the reflection in
/// the normal direction. Each fixes the point or swaps sides, never both
/// while preserving the surface.
fn control_candidates(q: &[f64], r1: f64) -> Result<Vec<AmbientIsometry>> {
    let r2 = (1.0 - r1 * r1).sqrt();
    let (a, b) = q.split_at(2);
    let (na, nb) = (norm(a), norm(b));
    let mut normal: Vec<f64> = a.iter().map(|v| r2 * v / na).collect();
    normal.extend(b.iter().map(|v| -r1 * v / nb));
    let reflection = DenseMatrix::from_fn(4, 4, |i, j| f64::from(u8::from(i == j)) - 2.0 * normal[i] * normal[j]);
    let xi = xi_swap(1);
    Ok(vec![
        AmbientIsometry::identity(4),
        xi.clone(),
        xi.conjugate_by(&block_aligner(q)?)?,
        AmbientIsometry::new(reflection)?,
    ])
}

/// Samples `points` points (point `i` on stream `i` of `seed`), constructs the
/// scenario's helicoidal isometry at each, checks it on `samples` on- and
/// off-surface points and evaluates the minimality residual there.
pub fn helicoidal_crosscheck(scenario: CrosscheckScenario, points: usize, samples: usize, seed: u64) -> Result<CrosscheckReport> {
    let mut out = Vec::with_capacity(points);
    match scenario {
        CrosscheckScenario::Clifford { p } => {
            let imm = generalized_clifford(p, p)?;
            let handle = TorusHandle::clifford(p);
            for i in 0..points {
                let mut rng = stream(seed, i as u64);
                let phi = imm.sample_point(&mut rng);
                let q = imm.value(&phi);
                let iso = clifford_helicoidal_at(&q)?;
                let helicoidal = helicoidal_check(&handle, &iso, &q, samples, &mut rng)?.verdict;
                out.push(CrosscheckPoint { helicoidal, residual: sphere_minimality_residual(&imm, &phi)? });
            }
        }
        CrosscheckScenario::Det { n } => {
            let handle = VarietyHandle::det(n)?;
            for i in 0..points {
                let mut rng = stream(seed, i as u64);
                let point = sample_det_variety(n, &mut rng)?;
                let iso = det_helicoidal_at(&DenseMatrix::new(n, n, point.x.clone())?)?;
                let helicoidal = helicoidal_check(&handle, &iso, &point.x, samples, &mut rng)?.verdict;
                out.push(CrosscheckPoint { helicoidal, residual: level_residual(handle.field(), &point)? });
            }
        }
        CrosscheckScenario::Pf { n } => {
            let handle = VarietyHandle::pf(n)?;
            for i in 0..points {
                let mut rng = stream(seed, i as u64);
                let point = sample_pf_variety(n, &mut rng)?;
                let iso = pf_helicoidal_at(&mu_embed(&point.x, n)?)?;
                let helicoidal = helicoidal_check(&handle, &iso, &point.x, samples, &mut rng)?.verdict;
                out.push(CrosscheckPoint { helicoidal, residual: level_residual(handle.field(), &point)? });
            }
        }
        CrosscheckScenario::ControlTorus { r } => {
            if (r - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 {
                return Err(Error::Contract("the control torus must have unequal radii".into()));
            }
            let imm = torus_with_radii(r)?;
            let handle = TorusHandle::new(1, 1, r);
            for i in 0..points {
                let mut rng = stream(seed, i as u64);
                let phi = imm.sample_point(&mut rng);
                let q = imm.value(&phi);
                let mut helicoidal = false;
                for iso in control_candidates(&q, r)? {
                    helicoidal |= helicoidal_check(&handle, &iso, &q, samples, &mut rng)?.verdict;
                }
                out.push(CrosscheckPoint { helicoidal, residual: sphere_minimality_residual(&imm, &phi)? });
            }
        }
    }
    Ok(CrosscheckReport { scenario, tol: scenario.tol(), points: out })
}
