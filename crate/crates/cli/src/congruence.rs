//! Orthogonal witnesses for the two quadratic cones: after the witness, both
//! `det` on 2 × 2 matrices and `pf` on 4 × 4 skew matrices become
//! `(‖a‖² − ‖b‖²)/2` in split coordinates `u = (a, b)`, whose zero set on the
//! unit sphere is the product of two spheres of radius `1/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use minlab_core::DenseMatrix;

/// `z = Wu` with `u = (a₁, a₂, b₁, b₂)` and `z` the row-major entries of a
/// 2 × 2 matrix: `z₁₁ = (a₁+b₂)/√2`, `z₁₂ = (b₁+a₂)/√2`, `z₂₁ = (b₁−a₂)/√2`,
/// `z₂₂ = (a₁−b₂)/√2`.
pub fn clifford_det_witness() -> DenseMatrix {
    let s = FRAC_1_SQRT_2;
    DenseMatrix::from_rows(&[&[s, 0.0, 0.0, s], &[0.0, s, s, 0.0], &[0.0, -s, s, 0.0], &[s, 0.0, 0.0, -s]])
}

/// `x = Wu` with `u = (a₁, a₂, a₃, b₁, b₂, b₃)` and `x` the strict upper
/// triangle of a 4 × 4 skew matrix, so that `x₁x₆ − x₂x₅ + x₃x₄` pairs
/// `aᵢ + bᵢ` with `aᵢ − bᵢ`.
pub fn product_pf_witness() -> DenseMatrix {
    let s = FRAC_1_SQRT_2;
    DenseMatrix::from_rows(&[
        &[s, 0.0, 0.0, s, 0.0, 0.0],
        &[0.0, s, 0.0, 0.0, s, 0.0],
        &[0.0, 0.0, s, 0.0, 0.0, s],
        &[0.0, 0.0, s, 0.0, 0.0, -s],
        &[0.0, -s, 0.0, 0.0, s, 0.0],
        &[s, 0.0, 0.0, -s, 0.0, 0.0],
    ])
}
