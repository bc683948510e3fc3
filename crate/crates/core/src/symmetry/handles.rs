use rand_chacha::ChaCha8Rng;

use crate::implicit::{det_variety, pf_variety, sample_det_variety, sample_pf_variety, ScalarField};
use crate::matlib::norm;
use crate::rng::unit_vec;
use crate::tolerances::ON_SURFACE_TOL;
use crate::Result;

/// A two-sided hypersurface of `R^N` as seen by the helicoidal check: a
/// membership measure, a side indicator and an on-surface sampler.
pub trait SurfaceHandle: Send + Sync {
    fn ambient_dim(&self) -> usize;
    /// Zero exactly on the surface.
    fn membership(&self, x: &[f64]) -> f64;
    /// `±1` on the two sides, `0` on the surface.
    fn side(&self, x: &[f64]) -> f64;
    fn on_tol(&self) -> f64 {
        ON_SURFACE_TOL
    }
    /// Unit-norm point of the surface.
    fn sample_on(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>>;
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Cone over `S^p(r₁) × S^q(r₂) ⊂ S^{p+q+1}`, split by `r₂‖x₁‖ − r₁‖x₂‖`
/// where `x₁` holds the first `p+1` coordinates.
#[derive(Debug, Clone, Copy)]
pub struct TorusHandle {
    p: usize,
    q: usize,
    r1: f64,
    r2: f64,
}

impl TorusHandle {
    pub fn new(p: usize, q: usize, r1: f64) -> Self {
        assert!(r1 > 0.0 && r1 < 1.0, "radius in (0, 1)");
        Self { p, q, r1, r2: (1.0 - r1 * r1).sqrt() }
    }

    /// `S^p(1/√2) × S^p(1/√2)`.
    pub fn clifford(p: usize) -> Self {
        Self::new(p, p, std::f64::consts::FRAC_1_SQRT_2)
    }

    fn level(&self, x: &[f64]) -> f64 {
        let split = self.p + 1;
        self.r2 * norm(&x[..split]) - self.r1 * norm(&x[split..])
    }
}

impl SurfaceHandle for TorusHandle {
    fn ambient_dim(&self) -> usize {
        self.p + self.q + 2
    }

    fn membership(&self, x: &[f64]) -> f64 {
        self.level(x).abs()
    }

    fn side(&self, x: &[f64]) -> f64 {
        sign(self.level(x))
    }

    fn sample_on(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let mut x: Vec<f64> = unit_vec(rng, self.p + 1).into_iter().map(|v| v * self.r1).collect();
        x.extend(unit_vec(rng, self.q + 1).into_iter().map(|v| v * self.r2));
        Ok(x)
    }
}

#[derive(Debug, Clone, Copy)]
enum Variety {
    Det(usize),
    Pf(usize),
}

/// Determinant or Pfaffian cone, split by the sign of the polynomial.
pub struct VarietyHandle {
    kind: Variety,
    field: Box<dyn ScalarField>,
}

impl VarietyHandle {
    pub fn det(n: usize) -> Result<Self> {
        Ok(Self { kind: Variety::Det(n), field: Box::new(det_variety(n)?) })
    }

    pub fn pf(n: usize) -> Result<Self> {
        Ok(Self { kind: Variety::Pf(n), field: Box::new(pf_variety(n)?) })
    }

    pub fn field(&self) -> &dyn ScalarField {
        self.field.as_ref()
    }
}

impl SurfaceHandle for VarietyHandle {
    fn ambient_dim(&self) -> usize {
        self.field.ambient_dim()
    }

    fn membership(&self, x: &[f64]) -> f64 {
        self.field.value(x).abs()
    }

    fn side(&self, x: &[f64]) -> f64 {
        sign(self.field.value(x))
    }

    fn sample_on(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let point = match self.kind {
            Variety::Det(n) => sample_det_variety(n, rng)?,
            Variety::Pf(n) => sample_pf_variety(n, rng)?,
        };
        Ok(point.x)
    }
}
