use super::{dot, norm, orthogonalize, DenseMatrix};
use crate::{Error, Result};

fn require_unit(v: &[f64], what: &str) -> Result<()> {
    let len = norm(v);
    if v.is_empty() || (len - 1.0).abs() > 1e-12 {
        return Err(Error::Contract(format!("{what} must be a unit vector (norm {len})")));
    }
    Ok(())
}

/// `I − 2vvᵀ`: eigenvalue −1 on `v`, +1 on its orthogonal complement.
pub fn householder_reflection(v: &[f64]) -> Result<DenseMatrix> {
    require_unit(v, "reflection normal")?;
    let n = v.len();
    Ok(DenseMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * v[i] * v[j]))
}

/// Rotation `R ∈ SO(k)` with `Ru = v` that is the identity on the complement
/// of `span{u, v}`.
///
/// Antipodal pairs have no distinguished plane; they are routed through the
/// lowest-index coordinate direction with `|u_k| ≤ 1/√2`, which makes the
/// result a composition of two quarter-turn-sized rotations.
pub fn rotation_taking(u: &[f64], v: &[f64]) -> Result<DenseMatrix> {
    require_unit(u, "source")?;
    require_unit(v, "target")?;
    if u.len() != v.len() {
        return Err(Error::Dimension(format!("rotation between R^{} and R^{}", u.len(), v.len())));
    }
    let n = u.len();
    let c = dot(u, v);
    if c > 0.0 {
        // I + K + K²/(1 + c), K = vuᵀ − uvᵀ
        let k = DenseMatrix::from_fn(n, n, |i, j| v[i] * u[j] - u[i] * v[j]);
        let k2 = &k * &k;
        return Ok(DenseMatrix::identity(n) + k + k2.scale(1.0 / (1.0 + c)));
    }
    let w = orthogonalize(v, &[u.to_vec()]);
    let s = norm(&w);
    if s > 1e-8 {
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        let angle = s.atan2(c);
        return Ok(plane_rotation(u, &w, angle.cos(), angle.sin()));
    }
    if n == 1 {
        return Err(Error::Contract("no rotation of R^1 maps u to -u".into()));
    }
    let k = u
        .iter()
        .position(|x| x.abs() <= std::f64::consts::FRAC_1_SQRT_2)
        .expect("some coordinate of a unit vector in R^2+ is at most 1/sqrt 2");
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    let mid = orthogonalize(&e, &[u.to_vec()]);
    let len = norm(&mid);
    let mid: Vec<f64> = mid.iter().map(|x| x / len).collect();
    let first = rotation_taking(u, &mid)?;
    let second = rotation_taking(&mid, v)?;
    Ok(&second * &first)
}

/// Rotation by angle `θ` (cos `c`, sin `s`) in the plane of orthonormal `u`, `w`, taking `u` toward `w`.
fn plane_rotation(u: &[f64], w: &[f64], c: f64, s: f64) -> DenseMatrix {
    let n = u.len();
    DenseMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id + (c - 1.0) * (u[i] * u[j] + w[i] * w[j]) + s * (w[i] * u[j] - u[i] * w[j])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlib::determinant;
    use crate::rng::{stream, unit_vec};

    #[test]
    fn householder_examples() {
        let a = householder_reflection(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(a, DenseMatrix::from_diagonal(&[-1.0, 1.0, 1.0]));
        assert!(matches!(householder_reflection(&[1.0, 1.0]), Err(Error::Contract(_))));
        let mut rng = stream(3, 0);
        for _ in 0..10 {
            let v = unit_vec(&mut rng, 5);
            let a = householder_reflection(&v).unwrap();
            assert!((determinant(&a).unwrap() + 1.0).abs() < 1e-10);
            assert!((&a * &a - DenseMatrix::identity(5)).max_abs() < 1e-12);
            assert!(a.orthogonality_defect() < 1e-12);
            let av = a.matvec(&v);
            assert!(av.iter().zip(&v).all(|(x, y)| (x + y).abs() < 1e-14));
        }
    }

    #[test]
    fn rotation_identity_and_quarter_turn() {
        let u = [0.6, 0.8];
        assert!((rotation_taking(&u, &u).unwrap() - DenseMatrix::identity(2)).max_abs() < 1e-16);
        let r = rotation_taking(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((r - DenseMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]])).max_abs() < 1e-15);
    }

    fn check_rotation(u: &[f64], v: &[f64], fixes_complement: bool) {
        let n = u.len();
        let r = rotation_taking(u, v).unwrap();
        assert!(r.orthogonality_defect() < 1e-12);
        assert!((determinant(&r).unwrap() - 1.0).abs() < 1e-12);
        let ru = r.matvec(u);
        assert!(ru.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-12), "{ru:?} vs {v:?}");
        if fixes_complement {
            // Gram–Schmidt complement basis of span{u, v}
            let mut basis = vec![u.to_vec()];
            let w = orthogonalize(v, &basis);
            if norm(&w) > 1e-6 {
                basis.push(w.iter().map(|x| x / norm(&w)).collect());
            }
            for k in 0..n {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                let c = orthogonalize(&e, &basis);
                if norm(&c) < 1e-6 {
                    continue;
                }
                let c: Vec<f64> = c.iter().map(|x| x / norm(&c)).collect();
                let rc = r.matvec(&c);
                assert!(rc.iter().zip(&c).all(|(a, b)| (a - b).abs() < 1e-12));
                basis.push(c);
            }
        }
    }

    #[test]
    fn random_rotations_fix_the_complement() {
        let mut rng = stream(11, 0);
        for _ in 0..20 {
            let u = unit_vec(&mut rng, 6);
            let v = unit_vec(&mut rng, 6);
            check_rotation(&u, &v, true);
        }
    }

    #[test]
    fn antipodal_and_nearly_antipodal() {
        let mut rng = stream(12, 0);
        for _ in 0..5 {
            let u = unit_vec(&mut rng, 4);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            check_rotation(&u, &neg, false);
            let mut near = neg.clone();
            near[0] += 1e-3;
            let len = norm(&near);
            near.iter_mut().for_each(|x| *x /= len);
            check_rotation(&u, &near, true);
        }
        check_rotation(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0], false);
        assert!(rotation_taking(&[1.0], &[-1.0]).is_err());
    }
}
