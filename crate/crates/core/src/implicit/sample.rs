//! Regular points of the determinant and Pfaffian cones on the unit sphere.

use rand_chacha::ChaCha8Rng;

use super::{det_variety, mu_inverse, pf_variety, VarietyPoint};
use crate::matlib::{canonical_lambda, norm, skew_canonical_form, svd, DenseMatrix};
use crate::rng::gaussian_vec;
use crate::tolerances::{MAX_SAMPLE_ATTEMPTS, REGULAR_GAP};
use crate::{Error, Result};

fn normalized(x: Vec<f64>) -> Vec<f64> {
    let len = norm(&x);
    x.into_iter().map(|v| v / len).collect()
}

/// Gaussian `n × n` matrix projected onto `{det = 0}` by zeroing its smallest
/// singular value, normalized to unit Frobenius norm. Draws are retried until
/// `σ_{n−1}/σ₁ > 1e-3`, so the result has corank exactly one.
pub fn sample_det_variety(n: usize, rng: &mut ChaCha8Rng) -> Result<VarietyPoint> {
    let field = det_variety(n)?;
    for attempt in 1..=MAX_SAMPLE_ATTEMPTS {
        let g = DenseMatrix::new(n, n, gaussian_vec(rng, n * n))?;
        let mut s = svd(&g)?;
        let gap = s.sigma[n - 2] / s.sigma[0];
        if !(gap > REGULAR_GAP) {
            continue;
        }
        s.sigma[n - 1] = 0.0;
        let x = normalized(s.reconstruct().into_vec());
        let mut point = VarietyPoint::new(&field, x, gap)?;
        point.attempts = attempt;
        return Ok(point);
    }
    Err(Error::SamplingExhausted { attempts: MAX_SAMPLE_ATTEMPTS, stream: rng.get_stream() })
}

/// Antisymmetrized Gaussian `2n × 2n` matrix with its smallest canonical
/// block zeroed, mapped to coordinates and normalized. Draws are retried until
/// the second-smallest `|λ|` exceeds `1e-3 |λ|_max`, so the projected matrix
/// has rank exactly `2n − 2`.
pub fn sample_pf_variety(n: usize, rng: &mut ChaCha8Rng) -> Result<VarietyPoint> {
    let field = pf_variety(n)?;
    let m = 2 * n;
    for attempt in 1..=MAX_SAMPLE_ATTEMPTS {
        let g = DenseMatrix::new(m, m, gaussian_vec(rng, m * m))?.antisymmetrize();
        let form = skew_canonical_form(&g)?;
        let gap = form.lambdas[n - 2] / form.lambdas[0];
        if !(gap > REGULAR_GAP) {
            continue;
        }
        let mut lambdas = form.lambdas.clone();
        lambdas[n - 1] = 0.0;
        let projected = (&(&form.q * &canonical_lambda(&lambdas)) * &form.q.transpose()).antisymmetrize();
        let x = normalized(mu_inverse(&projected)?);
        let mut point = VarietyPoint::new(&field, x, gap)?;
        point.attempts = attempt;
        return Ok(point);
    }
    Err(Error::SamplingExhausted { attempts: MAX_SAMPLE_ATTEMPTS, stream: rng.get_stream() })
}
