//! Immersions into Euclidean space and round spheres.
//!
//! An [`Immersion`] evaluates a chart `φ ∈ R^k ↦ m(φ) ∈ R^N` on hyper-dual
//! numbers, so first and second partials come out exact. From the jets the
//! engine builds the induced metric, the divergence-form Laplace–Beltrami
//! operator `Δm = (1/√g) ∂_a(√g g^{ab} ∂_b m)` and the mean curvature vector.
//! A `k`-dimensional submanifold of the unit sphere is minimal exactly when
//! `Δm = −k m`.

mod catalog;

pub use catalog::{
    closest_point, generalized_clifford, great_sphere, jet_consistency, product_metric_laws, scaled_product,
    small_sphere, torus_with_radii, ProductMetricLaws,
};

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::autodiff::{first_order_jet, second_order_jet, HyperDual};
use crate::matlib::{determinant, dot, norm, orthogonalize, DenseMatrix};
use crate::tolerances::{FD_STEP, FD_STEP_SECOND, GRAM_MIN};
use crate::{Error, Result};

/// How chart derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Hyper-dual forward mode: exact first and second partials.
    #[default]
    Ad,
    /// Central finite differences of chart values only.
    Fd,
}

/// Chart map evaluated on hyper-dual numbers.
pub trait ChartMap: Send + Sync {
    fn eval(&self, phi: &[HyperDual]) -> Vec<HyperDual>;
}

impl<F> ChartMap for F
where
    F: Fn(&[HyperDual]) -> Vec<HyperDual> + Send + Sync,
{
    fn eval(&self, phi: &[HyperDual]) -> Vec<HyperDual> {
        self(phi)
    }
}

#[derive(Clone)]
pub struct Immersion {
    name: String,
    chart_dim: usize,
    ambient_dim: usize,
    map: Arc<dyn ChartMap>,
    sphere_radius: Option<f64>,
    domain: Vec<(f64, f64)>,
    mode: DerivativeMode,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("name", &self.name)
            .field("chart_dim", &self.chart_dim)
            .field("ambient_dim", &self.ambient_dim)
            .field("sphere_radius", &self.sphere_radius)
            .field("mode", &self.mode)
            .finish()
    }
}

/// Value and partials of an immersion at one chart point.
#[derive(Debug, Clone)]
pub struct Jet {
    pub value: Vec<f64>,
    /// `first[a]` = `∂m/∂φ_a`
    pub first: Vec<Vec<f64>>,
    /// `second[a][b]` = `∂²m/∂φ_a∂φ_b`
    pub second: Vec<Vec<Vec<f64>>>,
}

/// Induced metric `g_ab = ∂_a m · ∂_b m` with inverse and determinant.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: DenseMatrix,
    pub g_inv: DenseMatrix,
    pub det_g: f64,
}

impl Immersion {
    pub fn new(
        name: impl Into<String>,
        chart_dim: usize,
        ambient_dim: usize,
        map: Arc<dyn ChartMap>,
        sphere_radius: Option<f64>,
        domain: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if chart_dim == 0 || ambient_dim <= chart_dim {
            return Err(Error::Dimension(format!("chart dimension {chart_dim} in R^{ambient_dim}")));
        }
        if domain.len() != chart_dim || domain.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Contract("sample domain must be a nonempty box of the chart dimension".into()));
        }
        if let Some(r) = sphere_radius {
            if !(r > 0.0) {
                return Err(Error::Contract(format!("sphere radius {r} must be positive")));
            }
        }
        Ok(Self { name: name.into(), chart_dim, ambient_dim, map, sphere_radius, domain, mode: DerivativeMode::Ad })
    }

    pub fn from_fn<F>(
        name: impl Into<String>,
        chart_dim: usize,
        ambient_dim: usize,
        sphere_radius: Option<f64>,
        domain: Vec<(f64, f64)>,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[HyperDual]) -> Vec<HyperDual> + Send + Sync + 'static,
    {
        Self::new(name, chart_dim, ambient_dim, Arc::new(f), sphere_radius, domain)
    }

    /// Same immersion with a different derivative strategy.
    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn sphere_radius(&self) -> Option<f64> {
        self.sphere_radius
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub(crate) fn map(&self) -> &Arc<dyn ChartMap> {
        &self.map
    }

    fn check_point(&self, phi: &[f64]) -> Result<()> {
        if phi.len() != self.chart_dim {
            return Err(Error::Dimension(format!("chart point of length {} for chart dimension {}", phi.len(), self.chart_dim)));
        }
        Ok(())
    }

    pub fn value(&self, phi: &[f64]) -> Vec<f64> {
        let args: Vec<HyperDual> = phi.iter().map(|&x| HyperDual::constant(x)).collect();
        self.map.eval(&args).iter().map(|h| h.re).collect()
    }

    /// Uniform chart point in the sample domain.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.domain.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect()
    }

    /// Value, first and second partials in the immersion's derivative mode.
    pub fn jet(&self, phi: &[f64]) -> Result<Jet> {
        self.check_point(phi)?;
        match self.mode {
            DerivativeMode::Ad => {
                let (value, first, second) = second_order_jet(|x| self.map.eval(x), phi);
                Ok(Jet { value, first, second })
            }
            DerivativeMode::Fd => Ok(self.fd_jet(phi)),
        }
    }

    fn first_partials(&self, phi: &[f64]) -> Vec<Vec<f64>> {
        match self.mode {
            DerivativeMode::Ad => first_order_jet(|x| self.map.eval(x), phi).1,
            DerivativeMode::Fd => (0..self.chart_dim).map(|a| self.fd_first(phi, a)).collect(),
        }
    }

    fn fd_first(&self, phi: &[f64], a: usize) -> Vec<f64> {
        let (plus, minus, step) = shifted(phi, a, FD_STEP);
        let (fp, fm) = (self.value(&plus), self.value(&minus));
        fp.iter().zip(&fm).map(|(p, m)| (p - m) / step).collect()
    }

    fn fd_jet(&self, phi: &[f64]) -> Jet {
        let k = self.chart_dim;
        let value = self.value(phi);
        let first: Vec<Vec<f64>> = (0..k).map(|a| self.fd_first(phi, a)).collect();
        let h = FD_STEP_SECOND;
        let mut second = vec![vec![Vec::new(); k]; k];
        for a in 0..k {
            let (plus, minus, step) = shifted(phi, a, h);
            let half = 0.5 * step;
            let (fp, fm) = (self.value(&plus), self.value(&minus));
            second[a][a] = fp.iter().zip(&fm).zip(&value).map(|((p, m), c)| (p - 2.0 * c + m) / (half * half)).collect();
            for b in (a + 1)..k {
                let mut corners = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].map(|(sa, sb)| {
                    let mut x = phi.to_vec();
                    x[a] += sa * h;
                    x[b] += sb * h;
                    (sa * sb, self.value(&x))
                });
                let mut d = vec![0.0; self.ambient_dim];
                for (sign, v) in corners.iter_mut() {
                    d.iter_mut().zip(v.iter()).for_each(|(acc, x)| *acc += *sign * x);
                }
                let d: Vec<f64> = d.into_iter().map(|x| x / (4.0 * h * h)).collect();
                second[a][b] = d.clone();
                second[b][a] = d;
            }
        }
        Jet { value, first, second }
    }
}

/// `phi ± h e_a` and the exactly representable distance between them.
fn shifted(phi: &[f64], a: usize, h: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let mut plus = phi.to_vec();
    let mut minus = phi.to_vec();
    plus[a] += h;
    minus[a] -= h;
    let step = plus[a] - minus[a];
    (plus, minus, step)
}

fn gram(first: &[Vec<f64>]) -> DenseMatrix {
    let k = first.len();
    DenseMatrix::from_fn(k, k, |a, b| dot(&first[a], &first[b]))
}

fn metric_from_partials(first: &[Vec<f64>]) -> Result<MetricJet> {
    let g = gram(first);
    let det_g = determinant(&g)?;
    if !(det_g > GRAM_MIN) {
        return Err(Error::NotImmersion(det_g));
    }
    let g_inv = DenseMatrix::from_nalgebra(
        &g.to_nalgebra().try_inverse().ok_or_else(|| Error::Numerical("metric inversion failed".into()))?,
    );
    Ok(MetricJet { g, g_inv, det_g })
}

/// Induced metric at `phi`.
pub fn metric_at(imm: &Immersion, phi: &[f64]) -> Result<MetricJet> {
    imm.check_point(phi)?;
    metric_from_partials(&imm.first_partials(phi))
}

/// `√g g^{ab}` at `phi`.
fn density_weighted_inverse(imm: &Immersion, phi: &[f64]) -> Result<DenseMatrix> {
    let m = metric_at(imm, phi)?;
    Ok(m.g_inv.scale(m.det_g.sqrt()))
}

/// `g^{ab} ∂_a∂_b m`
fn trace_of_hessian(jet: &Jet, g_inv: &DenseMatrix) -> Vec<f64> {
    let k = jet.first.len();
    let mut out = vec![0.0; jet.value.len()];
    for a in 0..k {
        for b in 0..k {
            let w = g_inv[(a, b)];
            out.iter_mut().zip(&jet.second[a][b]).for_each(|(o, x)| *o += w * x);
        }
    }
    out
}

/// Laplace–Beltrami operator applied to the coordinate functions, in
/// divergence form.
///
/// The derivative of `√g g^{ab}` is a central difference of the metric built
/// from exact first partials.
pub fn laplace_beltrami_at(imm: &Immersion, phi: &[f64]) -> Result<Vec<f64>> {
    let jet = imm.jet(phi)?;
    let metric = metric_from_partials(&jet.first)?;
    let k = imm.chart_dim();
    let sqrt_g = metric.det_g.sqrt();
    let h = match imm.mode() {
        DerivativeMode::Ad => FD_STEP,
        DerivativeMode::Fd => FD_STEP_SECOND,
    };

    // Σ_a ∂_a(√g g^{ab}) for each b
    let mut divergence = vec![0.0; k];
    for a in 0..k {
        let (plus, minus, step) = shifted(phi, a, h);
        let wp = density_weighted_inverse(imm, &plus)?;
        let wm = density_weighted_inverse(imm, &minus)?;
        for (b, d) in divergence.iter_mut().enumerate() {
            *d += (wp[(a, b)] - wm[(a, b)]) / step;
        }
    }

    let mut lap = trace_of_hessian(&jet, &metric.g_inv);
    for (b, d) in divergence.iter().enumerate() {
        let coeff = d / sqrt_g;
        lap.iter_mut().zip(&jet.first[b]).for_each(|(o, x)| *o += coeff * x);
    }
    Ok(lap)
}

/// Component of `v` orthogonal to the span of `spanning`.
fn normal_part(v: &[f64], spanning: &[Vec<f64>]) -> Vec<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(spanning.len());
    for s in spanning {
        let w = orthogonalize(s, &basis);
        let len = norm(&w);
        if len > 1e-12 * norm(s).max(1.0) {
            basis.push(w.into_iter().map(|x| x / len).collect());
        }
    }
    orthogonalize(v, &basis)
}

/// Mean curvature vector of the immersion inside its round sphere: the part
/// of `g^{ab} ∂_a∂_b m` orthogonal to the tangent space and to the position.
pub fn mean_curvature_sphere_at(imm: &Immersion, phi: &[f64]) -> Result<Vec<f64>> {
    if imm.sphere_radius().is_none() {
        return Err(Error::Contract(format!("{} is not an immersion into a sphere", imm.name())));
    }
    let jet = imm.jet(phi)?;
    let metric = metric_from_partials(&jet.first)?;
    let trace = trace_of_hessian(&jet, &metric.g_inv);
    let mut spanning = jet.first.clone();
    spanning.push(jet.value.clone());
    Ok(normal_part(&trace, &spanning))
}

/// Mean curvature vector in the ambient Euclidean space.
pub fn mean_curvature_euclidean_at(imm: &Immersion, phi: &[f64]) -> Result<Vec<f64>> {
    let jet = imm.jet(phi)?;
    let metric = metric_from_partials(&jet.first)?;
    let trace = trace_of_hessian(&jet, &metric.g_inv);
    Ok(normal_part(&trace, &jet.first))
}

/// `‖Δm + k m‖` for an immersion into the unit sphere; zero exactly where the
/// coordinate functions are eigenfunctions with eigenvalue `−k`.
pub fn sphere_minimality_residual(imm: &Immersion, phi: &[f64]) -> Result<f64> {
    match imm.sphere_radius() {
        Some(r) if (r - 1.0).abs() <= 1e-12 => {}
        other => {
            return Err(Error::Contract(format!("{} must lie in the unit sphere (radius {other:?})", imm.name())));
        }
    }
    let lap = laplace_beltrami_at(imm, phi)?;
    let m = imm.value(phi);
    let k = imm.chart_dim() as f64;
    Ok(norm(&lap.iter().zip(&m).map(|(l, x)| l + k * x).collect::<Vec<_>>()))
}

/// Checks the immersion invariants at `phi`: symmetric second partials,
/// correct sphere radius and a nondegenerate Gram matrix.
pub fn check_immersion_at(imm: &Immersion, phi: &[f64]) -> Result<()> {
    let jet = imm.jet(phi)?;
    let k = imm.chart_dim();
    for a in 0..k {
        for b in 0..a {
            let asym = jet.second[a][b].iter().zip(&jet.second[b][a]).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            if asym > 1e-10 {
                return Err(Error::Contract(format!("second partials not symmetric ({asym:e})")));
            }
        }
    }
    if let Some(r) = imm.sphere_radius() {
        let off = (norm(&jet.value) - r).abs();
        if off > 1e-10 {
            return Err(Error::Contract(format!("point off the sphere of radius {r} by {off:e}")));
        }
    }
    metric_from_partials(&jet.first).map(|_| ())
}
