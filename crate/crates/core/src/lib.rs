//! Numerical certification of minimal submanifolds.
//!
//! The crate checks minimality in three independent ways:
//!
//! * [`parametric`]: second-order jets of an immersion into a round sphere,
//!   the divergence-form Laplace–Beltrami operator and the mean curvature
//!   vector, together with the scaled product and generalized Clifford
//!   constructions.
//! * [`implicit`]: the level-set mean curvature of `{f = 0}` for the
//!   determinant and Pfaffian varieties, with regular-point samplers.
//! * [`symmetry`]: linear ambient isometries that fix a point, preserve the
//!   hypersurface and exchange its two sides (helicoidal symmetry).
//!
//! [`matlib`] is the dense linear algebra substrate shared by all three.

// Negated float comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autodiff;
pub mod error;
pub mod implicit;
pub mod matlib;
pub mod parametric;
pub mod rng;
pub mod symmetry;
pub mod tolerances;

pub use error::{Error, Result};
pub use matlib::DenseMatrix;
