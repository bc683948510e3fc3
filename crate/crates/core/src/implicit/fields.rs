use std::f64::consts::SQRT_2;

use super::ScalarField;
use crate::autodiff::{first_order_jet, second_order_jet, HyperDual, Scalar};
use crate::matlib::{cofactor_matrix, determinant, pfaffian_permutation_sum, DenseMatrix, COMBINATORIAL_MAX_DIM};
use crate::tolerances::FD_STEP;
use crate::{Error, Result};

/// `det X` on `R^{n²}`, entries of `X` flattened row-major.
#[derive(Debug, Clone, Copy)]
pub struct DetField {
    n: usize,
}

pub fn det_variety(n: usize) -> Result<DetField> {
    if n < 2 {
        return Err(Error::Contract(format!("determinant variety needs n >= 2, got {n}")));
    }
    Ok(DetField { n })
}

impl DetField {
    pub fn n(&self) -> usize {
        self.n
    }

    fn matrix(&self, x: &[f64]) -> DenseMatrix {
        DenseMatrix::new(self.n, self.n, x.to_vec()).expect("point of R^{n^2}")
    }
}

impl ScalarField for DetField {
    fn name(&self) -> String {
        format!("det{}", self.n)
    }

    fn ambient_dim(&self) -> usize {
        self.n * self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        determinant(&self.matrix(x)).expect("square")
    }

    /// Cofactor matrix (Jacobi's formula).
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        cofactor_matrix(&self.matrix(x)).expect("square").into_vec()
    }

    /// Central differences of the cofactor gradient, symmetrized.
    fn hessian(&self, x: &[f64]) -> DenseMatrix {
        let dim = self.ambient_dim();
        let mut h = DenseMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (mut p, mut m) = (x.to_vec(), x.to_vec());
            p[j] += FD_STEP;
            m[j] -= FD_STEP;
            let step = p[j] - m[j];
            let (gp, gm) = (self.gradient(&p), self.gradient(&m));
            for i in 0..dim {
                h[(i, j)] = (gp[i] - gm[i]) / step;
            }
        }
        let ht = h.transpose();
        (h + ht).scale(0.5)
    }

    fn degree(&self) -> Option<u32> {
        Some(self.n as u32)
    }
}

/// Index pairs `(i, j)`, `i < j`, of the strict upper triangle of an `m × m`
/// matrix, row by row: `x₁ = a₁₂, x₂ = a₁₃, …, x_{m−1} = a₁ₘ, x_m = a₂₃, …`.
pub fn upper_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).collect()
}

/// Row-major entries of the skew matrix with strict upper triangle `x`.
pub fn skew_from_upper<S: Scalar>(x: &[S], m: usize) -> Vec<S> {
    let mut a = vec![S::zero(); m * m];
    for (k, (i, j)) in upper_pairs(m).into_iter().enumerate() {
        a[i * m + j] = x[k];
        a[j * m + i] = -x[k];
    }
    a
}

fn check_upper_len(len: usize, n: usize) -> Result<()> {
    let expected = n * (2 * n - 1);
    if len != expected {
        return Err(Error::Dimension(format!("{len} coordinates for {}x{} skew matrices (expected {expected})", 2 * n, 2 * n)));
    }
    Ok(())
}

/// Isometric embedding of `R^{2n²−n}` onto the skew `2n × 2n` matrices with
/// the trace inner product: the coordinates fill the strict upper triangle
/// scaled by `1/√2`, so that `tr(XᵀY) = x·y`.
pub fn mu_embed(x: &[f64], n: usize) -> Result<DenseMatrix> {
    check_upper_len(x.len(), n)?;
    let scaled: Vec<f64> = x.iter().map(|v| v / SQRT_2).collect();
    DenseMatrix::new(2 * n, 2 * n, skew_from_upper(&scaled, 2 * n))
}

/// Inverse of [`mu_embed`]; reads the strict upper triangle scaled by `√2`.
pub fn mu_inverse(x: &DenseMatrix) -> Result<Vec<f64>> {
    if !x.is_square() || x.rows() % 2 == 1 {
        return Err(Error::Dimension(format!("expected an even square matrix, got {}x{}", x.rows(), x.cols())));
    }
    if !x.is_skew(1e-12 * x.max_abs().max(1.0)) {
        return Err(Error::Contract("mu_inverse needs a skew-symmetric matrix".into()));
    }
    Ok(upper_pairs(x.rows()).into_iter().map(|(i, j)| x[(i, j)] * SQRT_2).collect())
}

/// `pf` of the skew `2n × 2n` matrix with strict upper triangle `x`.
/// Derivatives come from hyper-dual evaluation of the permutation sum.
#[derive(Debug, Clone, Copy)]
pub struct PfField {
    n: usize,
}

pub fn pf_variety(n: usize) -> Result<PfField> {
    if n < 2 {
        return Err(Error::Contract(format!("Pfaffian variety needs n >= 2, got {n}")));
    }
    if 2 * n > COMBINATORIAL_MAX_DIM {
        return Err(Error::SizeUnsupported(format!("{}x{} Pfaffian derivatives", 2 * n, 2 * n)));
    }
    Ok(PfField { n })
}

impl PfField {
    pub fn n(&self) -> usize {
        self.n
    }

    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let m = 2 * self.n;
        pfaffian_permutation_sum(&skew_from_upper(x, m), m).expect("size checked at construction")
    }

    fn eval_hd(&self, x: &[HyperDual]) -> Vec<HyperDual> {
        vec![self.eval(x)]
    }
}

impl ScalarField for PfField {
    fn name(&self) -> String {
        format!("pf{}", 2 * self.n)
    }

    fn ambient_dim(&self) -> usize {
        self.n * (2 * self.n - 1)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        first_order_jet(|y| self.eval_hd(y), x).1.into_iter().map(|d| d[0]).collect()
    }

    fn hessian(&self, x: &[f64]) -> DenseMatrix {
        self.jet(x).2
    }

    fn degree(&self) -> Option<u32> {
        Some(self.n as u32)
    }

    fn jet(&self, x: &[f64]) -> (f64, Vec<f64>, DenseMatrix) {
        let (value, first, second) = second_order_jet(|y| self.eval_hd(y), x);
        let dim = x.len();
        let h = DenseMatrix::from_fn(dim, dim, |a, b| second[a][b][0]);
        (value[0], first.into_iter().map(|d| d[0]).collect(), h)
    }
}

/// `‖x‖² − 1`: the round unit sphere, a non-minimal control.
#[derive(Debug, Clone, Copy)]
pub struct SphereField {
    dim: usize,
}

pub fn sphere_field(dim: usize) -> SphereField {
    SphereField { dim }
}

impl ScalarField for SphereField {
    fn name(&self) -> String {
        format!("sphere{}", self.dim)
    }

    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>() - 1.0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| 2.0 * v).collect()
    }

    fn hessian(&self, _x: &[f64]) -> DenseMatrix {
        DenseMatrix::identity(self.dim).scale(2.0)
    }

    fn degree(&self) -> Option<u32> {
        None
    }
}
