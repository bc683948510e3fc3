use std::sync::OnceLock;

use super::DenseMatrix;
use crate::autodiff::Scalar;
use crate::{Error, Result};

/// Largest size evaluated by the permutation sum (8! = 40320 terms).
pub const COMBINATORIAL_MAX_DIM: usize = 8;

/// All permutations of `0..m` with their signs, flattened.
struct PermutationTable {
    m: usize,
    perms: Vec<u8>,
    signs: Vec<i8>,
}

fn permutation_table(m: usize) -> &'static PermutationTable {
    static TABLES: [OnceLock<PermutationTable>; COMBINATORIAL_MAX_DIM / 2] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[m / 2 - 1].get_or_init(|| build_table(m))
}

// Heap's algorithm: consecutive permutations differ by one transposition,
// so the sign alternates.
fn build_table(m: usize) -> PermutationTable {
    let mut a: Vec<u8> = (0..m as u8).collect();
    let mut c = vec![0usize; m];
    let mut perms = a.clone();
    let mut signs = vec![1i8];
    let mut sign = 1i8;
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            perms.extend_from_slice(&a);
            signs.push(sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    PermutationTable { m, perms, signs }
}

/// Pfaffian of the skew matrix with row-major entries `a` (size `m × m`) as the
/// normalized sum over the symmetric group:
/// `pf(A) = 1/(2ⁿ n!) Σ_σ sgn(σ) Π_{i=1..n} a_{σ(2i−1) σ(2i)}`.
///
/// Generic so that it can be differentiated with hyper-dual entries.
pub fn pfaffian_permutation_sum<S: Scalar>(a: &[S], m: usize) -> Result<S> {
    check_even(m)?;
    if m > COMBINATORIAL_MAX_DIM {
        return Err(Error::SizeUnsupported(format!(
            "permutation-sum Pfaffian limited to {COMBINATORIAL_MAX_DIM}x{COMBINATORIAL_MAX_DIM}, got {m}x{m}"
        )));
    }
    if a.len() != m * m {
        return Err(Error::Dimension(format!("{} entries for a {m}x{m} matrix", a.len())));
    }
    let table = permutation_table(m);
    debug_assert_eq!(table.m, m);
    let n = m / 2;
    let mut total = S::zero();
    for (perm, &sign) in table.perms.chunks_exact(m).zip(&table.signs) {
        let mut term = S::one();
        for pair in perm.chunks_exact(2) {
            term *= a[pair[0] as usize * m + pair[1] as usize];
        }
        if sign > 0 {
            total += term;
        } else {
            total += -term;
        }
    }
    let normalization = (1..=n).fold(1.0, |acc, k| acc * 2.0 * k as f64);
    Ok(total * S::from_f64(1.0 / normalization))
}

fn check_even(m: usize) -> Result<()> {
    if m % 2 == 1 {
        Err(Error::Dimension(format!("Pfaffian undefined for odd size {m}")))
    } else {
        Ok(())
    }
}

fn check_skew(a: &DenseMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("Pfaffian needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    check_even(a.rows())?;
    if !a.is_skew(1e-10 * a.max_abs().max(1.0)) {
        return Err(Error::Contract("Pfaffian needs a skew-symmetric matrix".into()));
    }
    Ok(())
}

/// Exact permutation-sum Pfaffian, sizes up to 8×8.
pub fn pfaffian_combinatorial(a: &DenseMatrix) -> Result<f64> {
    check_skew(a)?;
    let a = a.antisymmetrize();
    pfaffian_permutation_sum(a.as_slice(), a.rows())
}

/// Pfaffian by Parlett–Reid skew tridiagonalization with partial pivoting.
pub fn pfaffian_fast(a: &DenseMatrix) -> Result<f64> {
    check_skew(a)?;
    let n = a.rows();
    let mut a = a.antisymmetrize();
    let mut pf = 1.0;
    for k in (0..n - 1).step_by(2) {
        let kp = (k + 1..n)
            .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
            .expect("non-empty pivot range");
        if kp != k + 1 {
            for j in 0..n {
                let t = a[(k + 1, j)];
                a[(k + 1, j)] = a[(kp, j)];
                a[(kp, j)] = t;
            }
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return Ok(0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (r, i) in (k + 2..n).enumerate() {
                for (c, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[r] * col[c] - col[r] * tau[c];
                }
            }
        }
    }
    Ok(pf)
}
