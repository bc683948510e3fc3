use super::DenseMatrix;
use crate::{Error, Result};

/// Orthogonal block diagonalization `X = Q Λ Qᵀ` of a skew-symmetric matrix,
/// `Λ` block diagonal with 2×2 blocks `[[0, λ_k], [−λ_k, 0]]`.
///
/// `lambdas` are nonnegative and sorted descending, so a rank-deficient
/// matrix ends with zero blocks.
#[derive(Debug, Clone)]
pub struct SkewCanonicalForm {
    pub q: DenseMatrix,
    pub lambdas: Vec<f64>,
}

impl SkewCanonicalForm {
    pub fn lambda_matrix(&self) -> DenseMatrix {
        canonical_lambda(&self.lambdas)
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        &(&self.q * &self.lambda_matrix()) * &self.q.transpose()
    }
}

/// Block-diagonal `Λ` with blocks `[[0, λ_k], [−λ_k, 0]]`.
pub fn canonical_lambda(lambdas: &[f64]) -> DenseMatrix {
    let m = 2 * lambdas.len();
    let mut out = DenseMatrix::zeros(m.max(1), m.max(1));
    for (k, &l) in lambdas.iter().enumerate() {
        out[(2 * k, 2 * k + 1)] = l;
        out[(2 * k + 1, 2 * k)] = -l;
    }
    out
}

/// Canonical form from the real Schur decomposition. For a skew matrix the
/// Schur factor `T = QᵀXQ` is itself skew, hence block diagonal: 2×2 blocks
/// carry the nonzero `λ_k`, 1×1 blocks are zero eigenvalues and are paired in
/// order of appearance.
pub fn skew_canonical_form(x: &DenseMatrix) -> Result<SkewCanonicalForm> {
    if !x.is_square() || x.rows() % 2 == 1 {
        return Err(Error::Dimension(format!("canonical form needs an even square matrix, got {}x{}", x.rows(), x.cols())));
    }
    let scale = x.max_abs();
    if !x.is_skew(1e-12 * scale.max(1.0)) {
        return Err(Error::Contract("canonical form needs a skew-symmetric matrix".into()));
    }
    let m = x.rows();
    if scale == 0.0 {
        return Ok(SkewCanonicalForm { q: DenseMatrix::identity(m), lambdas: vec![0.0; m / 2] });
    }
    let x = x.antisymmetrize();
    let schur = nalgebra::linalg::Schur::try_new(x.to_nalgebra(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Schur iteration failed to converge".into()))?;
    let (q, t) = schur.unpack();

    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m / 2);
    let mut singles = Vec::new();
    let mut i = 0;
    while i < m {
        if i + 1 < m && t[(i + 1, i)] != 0.0 {
            pairs.push((i, i + 1));
            i += 2;
        } else {
            singles.push(i);
            i += 1;
        }
    }
    pairs.extend(singles.chunks_exact(2).map(|c| (c[0], c[1])));
    debug_assert_eq!(pairs.len(), m / 2);

    let q = DenseMatrix::from_nalgebra(&q);
    let mut blocks: Vec<(Vec<f64>, Vec<f64>, f64)> = pairs
        .into_iter()
        .map(|(a, b)| {
            let (qa, qb) = (q.column(a), q.column(b));
            let lambda = super::dot(&qa, &x.matvec(&qb));
            if lambda < 0.0 {
                (qb, qa, -lambda)
            } else {
                (qa, qb, lambda)
            }
        })
        .collect();
    blocks.sort_by(|a, b| b.2.total_cmp(&a.2));

    let mut columns = Vec::with_capacity(m);
    let mut lambdas = Vec::with_capacity(m / 2);
    for (qa, qb, l) in blocks {
        columns.push(qa);
        columns.push(qb);
        lambdas.push(l);
    }
    Ok(SkewCanonicalForm { q: DenseMatrix::from_columns(&columns), lambdas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_vec, stream};

    /// Cyclic Jacobi eigenvalues of a symmetric matrix.
    fn jacobi_eigenvalues(s: &DenseMatrix) -> Vec<f64> {
        let n = s.rows();
        let mut a = s.clone();
        for _sweep in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
            if off < 1e-30 * a.frobenius_norm().powi(2) {
                break;
            }
            for p in 0..n {
                for r in (p + 1)..n {
                    if a[(p, r)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(r, r)] - a[(p, p)]) / (2.0 * a[(p, r)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let sn = t * c;
                    for k in 0..n {
                        let (akp, akr) = (a[(k, p)], a[(k, r)]);
                        a[(k, p)] = c * akp - sn * akr;
                        a[(k, r)] = sn * akp + c * akr;
                    }
                    for k in 0..n {
                        let (apk, ark) = (a[(p, k)], a[(r, k)]);
                        a[(p, k)] = c * apk - sn * ark;
                        a[(r, k)] = sn * apk + c * ark;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    fn random_skew(m: usize, seed: u64) -> DenseMatrix {
        DenseMatrix::new(m, m, gaussian_vec(&mut stream(seed, 2), m * m)).unwrap().antisymmetrize()
    }

    fn check_invariants(x: &DenseMatrix, f: &SkewCanonicalForm) {
        assert!(f.q.orthogonality_defect() <= 1e-12, "Q defect {}", f.q.orthogonality_defect());
        let err = (f.reconstruct() - x.clone()).frobenius_norm();
        assert!(err <= 1e-10 * x.frobenius_norm().max(f64::MIN_POSITIVE), "reconstruction {err}");
        assert!(f.lambdas.windows(2).all(|w| w[0] >= w[1]));
        assert!(f.lambdas.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn zero_matrix() {
        let f = skew_canonical_form(&DenseMatrix::zeros(4, 4)).unwrap();
        assert_eq!(f.q, DenseMatrix::identity(4));
        assert_eq!(f.lambdas, vec![0.0, 0.0]);
    }

    #[test]
    fn canonical_matrix_is_a_fixed_point() {
        let lambda = canonical_lambda(&[3.0, 2.0, 0.5]);
        let f = skew_canonical_form(&lambda).unwrap();
        check_invariants(&lambda, &f);
        for (a, b) in f.lambdas.iter().zip([3.0, 2.0, 0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn random_matches_symmetric_eigen_oracle() {
        for seed in 0..20 {
            let x = random_skew(6, seed);
            let f = skew_canonical_form(&x).unwrap();
            check_invariants(&x, &f);
            let ev = jacobi_eigenvalues(&(&x.transpose() * &x));
            for (k, l) in f.lambdas.iter().enumerate() {
                // each λ² appears twice among the eigenvalues of XᵀX
                assert!((l - ev[2 * k].max(0.0).sqrt()).abs() < 1e-10 * f.lambdas[0]);
                assert!((l - ev[2 * k + 1].max(0.0).sqrt()).abs() < 1e-10 * f.lambdas[0]);
            }
        }
    }

    #[test]
    fn rank_deficient_inputs_end_with_zero_blocks() {
        let f0 = skew_canonical_form(&random_skew(6, 40)).unwrap();
        let mut lambdas = f0.lambdas.clone();
        *lambdas.last_mut().unwrap() = 0.0;
        let x = (&(&f0.q * &canonical_lambda(&lambdas)) * &f0.q.transpose()).antisymmetrize();
        let f = skew_canonical_form(&x).unwrap();
        check_invariants(&x, &f);
        assert!(f.lambdas[2].abs() < 1e-14);
    }

    #[test]
    fn repeated_lambdas() {
        let f0 = skew_canonical_form(&random_skew(8, 41)).unwrap();
        let x = (&(&f0.q * &canonical_lambda(&[1.0, 1.0, 1.0, 0.0])) * &f0.q.transpose()).antisymmetrize();
        let f = skew_canonical_form(&x).unwrap();
        check_invariants(&x, &f);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(skew_canonical_form(&DenseMatrix::zeros(3, 3)), Err(Error::Dimension(_))));
        assert!(matches!(skew_canonical_form(&DenseMatrix::identity(2)), Err(Error::Contract(_))));
    }
}
