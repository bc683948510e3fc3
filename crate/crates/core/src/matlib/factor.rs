use super::DenseMatrix;
use crate::tolerances::RANK_RTOL;
use crate::{Error, Result};

fn require_square(m: &DenseMatrix, op: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{op} needs a square matrix, got {}x{}", m.rows(), m.cols())))
    }
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &DenseMatrix) -> Result<f64> {
    require_square(m, "determinant")?;
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .expect("non-empty pivot range");
        if a[pivot * n + k] == 0.0 {
            return Ok(0.0);
        }
        if pivot != k {
            for j in 0..n {
                a.swap(k * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[k * n + k];
        det *= p;
        for i in (k + 1)..n {
            let factor = a[i * n + k] / p;
            if factor == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                a[i * n + j] -= factor * a[k * n + j];
            }
        }
    }
    Ok(det)
}

/// Matrix of cofactors: entry `(i, j)` is `∂det/∂x_ij`.
///
/// Built from minors, so it is well defined at singular matrices, where the
/// adjugate formula `det(X)·X⁻ᵀ` is not available.
pub fn cofactor_matrix(x: &DenseMatrix) -> Result<DenseMatrix> {
    require_square(x, "cofactor_matrix")?;
    let n = x.rows();
    if n == 1 {
        return Ok(DenseMatrix::identity(1));
    }
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, c| {
                x[(if r < i { r } else { r + 1 }, if c < j { c } else { c + 1 })]
            });
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out[(i, j)] = sign * determinant(&minor)?;
        }
    }
    Ok(out)
}

/// Thin singular value decomposition `M = U diag(sigma) Vᵀ`, singular values
/// sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> DenseMatrix {
        let us = DenseMatrix::from_fn(self.u.rows(), self.sigma.len(), |i, j| self.u[(i, j)] * self.sigma[j]);
        &us * &self.v.transpose()
    }
}

/// One-sided Jacobi SVD. Rotations are applied until every column pair of
/// `MV` is orthogonal to working precision relative to the column norms, so
/// left singular vectors stay orthonormal even for zero singular values.
pub fn svd(m: &DenseMatrix) -> Result<Svd> {
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("SVD of a matrix with non-finite entries".into()));
    }
    if m.rows() < m.cols() {
        let t = svd(&m.transpose())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut v = DenseMatrix::identity(cols);
    // rounding in a dot product of length `rows` is about `rows · ε`
    let threshold = rows as f64 * f64::EPSILON;
    let mut converged = false;
    for _ in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    gamma += w[(i, p)] * w[(i, q)];
                }
                if gamma == 0.0 || gamma.abs() <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.rows() {
                        let (a, b) = (mat[(i, p)], mat[(i, q)]);
                        mat[(i, p)] = c * a - s * b;
                        mat[(i, q)] = s * a + c * b;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("SVD failed to converge".into()));
    }
    let norms: Vec<f64> = (0..cols).map(|j| super::norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let mut u = DenseMatrix::zeros(rows, cols);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols);
    for (j, &k) in order.iter().enumerate() {
        let column = if norms[k] > 0.0 {
            w.column(k).into_iter().map(|x| x / norms[k]).collect()
        } else {
            complete_basis(&basis, rows)
        };
        u.set_column(j, &column);
        basis.push(column);
    }
    Ok(Svd {
        u,
        sigma: order.iter().map(|&k| norms[k]).collect(),
        v: DenseMatrix::from_fn(cols, cols, |i, j| v[(i, order[j])]),
    })
}

const SVD_MAX_SWEEPS: usize = 80;

/// Unit vector orthogonal to `basis`: the standard basis vector with the
/// largest residual after projection.
fn complete_basis(basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let best = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            super::orthogonalize(&e, basis)
        })
        .max_by(|a, b| super::norm(a).total_cmp(&super::norm(b)))
        .expect("nonempty dimension");
    let len = super::norm(&best);
    best.into_iter().map(|x| x / len).collect()
}

/// Default corank threshold: `RANK_RTOL` times the largest singular value.
pub fn relative_delta(m: &DenseMatrix) -> Result<f64> {
    let s = svd(m)?;
    Ok(RANK_RTOL * s.sigma[0])
}

/// Unit `v` with `vᵀM ≈ 0`, for `M` of corank exactly one.
///
/// The sign is fixed so that the first component of magnitude above `1e-12`
/// is positive.
pub fn left_null_vector(m: &DenseMatrix, delta: f64) -> Result<Vec<f64>> {
    require_square(m, "left_null_vector")?;
    let n = m.rows();
    let s = svd(m)?;
    let smallest = s.sigma[n - 1];
    if smallest > delta {
        return Err(Error::NotSingular { smallest, delta });
    }
    if n >= 2 && s.sigma[n - 2] <= delta {
        let corank = s.sigma.iter().filter(|&&x| x <= delta).count();
        return Err(Error::NonRegular(format!("corank {corank} exceeds 1")));
    }
    let mut v = s.u.column(n - 1);
    let len = super::norm(&v);
    v.iter_mut().for_each(|x| *x /= len);
    if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-12) {
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlib::norm;
    use crate::rng::{gaussian_vec, stream};

    /// Laplace expansion along the first row.
    fn cofactor_expansion(m: &DenseMatrix) -> f64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })]);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * cofactor_expansion(&minor)
            })
            .sum()
    }

    fn random(n: usize, seed: u64) -> DenseMatrix {
        DenseMatrix::new(n, n, gaussian_vec(&mut stream(seed, 0), n * n)).unwrap()
    }

    #[test]
    fn svd_of_exactly_singular_matrices() {
        let mut rng = stream(9, 0);
        for i in 0..500 {
            let n = 2 + i % 4;
            let g = DenseMatrix::new(n, n, gaussian_vec(&mut rng, n * n)).unwrap();
            let mut s = svd(&g).unwrap();
            s.sigma[n - 1] = 0.0;
            let x = s.reconstruct();
            let t = svd(&x).unwrap();
            assert!((t.reconstruct() - x.clone()).max_abs() <= 1e-13);
            assert!(t.u.orthogonality_defect() <= 1e-13 && t.v.orthogonality_defect() <= 1e-13);
            let residual = x.tr_matvec(&t.u.column(n - 1));
            assert!(norm(&residual) <= 1e-13);
        }
        let z = svd(&DenseMatrix::zeros(3, 2)).unwrap();
        assert_eq!(z.sigma, vec![0.0, 0.0]);
        assert!(z.u.orthogonality_defect() <= 1e-15);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&DenseMatrix::identity(3)).unwrap(), 1.0);
        // [[x1, x3], [x2, x4]] at (1, 2, 3, 4)
        let m = DenseMatrix::from_rows(&[&[1.0, 3.0], &[2.0, 4.0]]);
        assert_eq!(determinant(&m).unwrap(), -2.0);
        assert!(matches!(determinant(&DenseMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        for seed in 0..20 {
            let m = random(5, seed);
            let lu = determinant(&m).unwrap();
            let oracle = cofactor_expansion(&m);
            assert!((lu - oracle).abs() <= 1e-10 * oracle.abs().max(1e-300), "{lu} vs {oracle}");
        }
    }

    #[test]
    fn permutation_determinant_sign_is_exact() {
        let perm = [2usize, 0, 3, 1];
        let p = DenseMatrix::from_fn(4, 4, |i, j| if perm[i] == j { 1.0 } else { 0.0 });
        // 0→2→3→1→0 is a 4-cycle: odd
        assert_eq!(determinant(&p).unwrap(), -1.0);
    }

    #[test]
    fn svd_examples() {
        let s = svd(&DenseMatrix::from_diagonal(&[2.0, 3.0, 0.0])).unwrap();
        assert!((s.sigma[0] - 3.0).abs() < 1e-15 && (s.sigma[1] - 2.0).abs() < 1e-15 && s.sigma[2].abs() < 1e-15);

        let u = [1.0, -2.0, 0.5];
        let v = [3.0, 1.0, -1.0];
        let rank1 = DenseMatrix::from_fn(3, 3, |i, j| u[i] * v[j]);
        let s = svd(&rank1).unwrap();
        assert!((s.sigma[0] - norm(&u) * norm(&v)).abs() < 1e-12);
        assert!(s.sigma[1].abs() < 1e-12 && s.sigma[2].abs() < 1e-12);

        let m = random(4, 99);
        let s = svd(&m).unwrap();
        assert!((s.reconstruct() - m.clone()).frobenius_norm() <= 1e-10 * m.frobenius_norm());
        assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn left_null_vector_examples() {
        let v = left_null_vector(&DenseMatrix::from_diagonal(&[1.0, 1.0, 0.0]), 1e-8).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 1.0]);
        assert!(matches!(
            left_null_vector(&DenseMatrix::from_diagonal(&[1.0, 0.0, 0.0]), 1e-8),
            Err(Error::NonRegular(_))
        ));
        assert!(matches!(
            left_null_vector(&DenseMatrix::identity(3), 1e-8),
            Err(Error::NotSingular { .. })
        ));
    }

    #[test]
    fn left_null_vector_of_rank_two_sum() {
        let mut rng = stream(5, 0);
        for _ in 0..10 {
            let (a, b, c, d) = (gaussian_vec(&mut rng, 3), gaussian_vec(&mut rng, 3), gaussian_vec(&mut rng, 3), gaussian_vec(&mut rng, 3));
            let m = DenseMatrix::from_fn(3, 3, |i, j| a[i] * b[j] + c[i] * d[j]);
            let delta = relative_delta(&m).unwrap();
            let v = left_null_vector(&m, delta).unwrap();
            assert!((norm(&v) - 1.0).abs() < 1e-14);
            assert!(norm(&m.tr_matvec(&v)) <= 1e-10);
            // known left kernel: a × c
            let cross = [a[1] * c[2] - a[2] * c[1], a[2] * c[0] - a[0] * c[2], a[0] * c[1] - a[1] * c[0]];
            let cos = super::super::dot(&v, &cross).abs() / norm(&cross);
            assert!((cos - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cofactor_examples() {
        let c = cofactor_matrix(&DenseMatrix::from_diagonal(&[1.0, 0.0])).unwrap();
        assert_eq!(c, DenseMatrix::from_rows(&[&[0.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(cofactor_matrix(&DenseMatrix::identity(4)).unwrap(), DenseMatrix::identity(4));
    }

    #[test]
    fn cofactors_match_finite_differences() {
        let x = random(4, 17);
        let c = cofactor_matrix(&x).unwrap();
        let h = 1e-5;
        for i in 0..4 {
            for j in 0..4 {
                let (mut p, mut m) = (x.clone(), x.clone());
                p[(i, j)] += h;
                m[(i, j)] -= h;
                let fd = (determinant(&p).unwrap() - determinant(&m).unwrap()) / (2.0 * h);
                assert!((fd - c[(i, j)]).abs() <= 1e-6 * c[(i, j)].abs().max(1.0), "({i},{j}) {fd} vs {}", c[(i, j)]);
            }
        }
    }

    #[test]
    fn cofactors_equal_adjugate_transpose_when_invertible() {
        let x = random(3, 23);
        let c = cofactor_matrix(&x).unwrap();
        // X Cᵀ = det(X) I
        let prod = &x * &c.transpose();
        let det = determinant(&x).unwrap();
        assert!((prod - DenseMatrix::identity(3).scale(det)).max_abs() < 1e-12);
    }
}
