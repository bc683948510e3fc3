//! Thresholds shared by the engines, the scenario runner and the tests.

/// Relative corank threshold: a singular value counts as zero when it is at
/// most this multiple of the largest one.
pub const RANK_RTOL: f64 = 1e-8;

/// Regular-point spectral gap required of sampled variety points.
pub const REGULAR_GAP: f64 = 1e-3;

/// Finite-difference step for first derivatives and metric derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Finite-difference step for value-only second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Chart margin kept away from coordinate singularities (radians).
pub const CHART_MARGIN: f64 = 0.1;

/// Default minimality tolerance with exact jets.
pub const TOL_AD: f64 = 1e-6;

/// Default minimality tolerance with finite-difference jets.
pub const TOL_FD: f64 = 1e-4;

/// Gram determinant below which a chart point is rejected.
pub const GRAM_MIN: f64 = 1e-12;

/// Gradient norm below which a level-set point is singular.
pub const GRADIENT_MIN: f64 = 1e-6;

/// Orthogonality tolerance for ambient isometries.
pub const ORTHO_TOL: f64 = 1e-10;

/// Fixed-point distance accepted by the helicoidal check.
pub const FIXED_POINT_TOL: f64 = 1e-10;

/// Membership tolerance for on-surface images in the helicoidal check.
pub const ON_SURFACE_TOL: f64 = 1e-10;

/// Maximum retries of the variety samplers.
pub const MAX_SAMPLE_ATTEMPTS: usize = 100;
