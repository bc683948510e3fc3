//! Second-order forward-mode differentiation with hyper-dual numbers.
//!
//! A hyper-dual number `a + b·ε₁ + c·ε₂ + d·ε₁ε₂` with `ε₁² = ε₂² = 0`
//! carries one mixed second derivative exactly: evaluating `f` at
//! `x + ε₁·e_i + ε₂·e_j` yields `f`, `∂_i f`, `∂_j f` and `∂_i∂_j f` with no
//! truncation error.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Minimal arithmetic shared by `f64` and [`HyperDual`], enough for
/// polynomial evaluations such as the permutation-sum Pfaffian.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
{
    fn from_f64(x: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub const fn new(re: f64, e1: f64, e2: f64, e12: f64) -> Self {
        Self { re, e1, e2, e12 }
    }

    pub const fn constant(re: f64) -> Self {
        Self::new(re, 0.0, 0.0, 0.0)
    }

    /// Variable `re` seeded in the ε₁ and/or ε₂ directions.
    pub const fn variable(re: f64, in_e1: bool, in_e2: bool) -> Self {
        Self::new(
            re,
            if in_e1 { 1.0 } else { 0.0 },
            if in_e2 { 1.0 } else { 0.0 },
            0.0,
        )
    }

    /// Applies a scalar function given its value and first two derivatives at `re`.
    #[inline]
    fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            re: f,
            e1: df * self.e1,
            e2: df * self.e2,
            e12: df * self.e12 + d2f * self.e1 * self.e2,
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.re))
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.re;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.e1 * k, self.e2 * k, self.e12 * k)
    }
}

impl Scalar for HyperDual {
    fn from_f64(x: f64) -> Self {
        Self::constant(x)
    }
}

impl From<f64> for HyperDual {
    fn from(x: f64) -> Self {
        Self::constant(x)
    }
}

impl Add for HyperDual {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.e1 + o.e1, self.e2 + o.e2, self.e12 + o.e12)
    }
}

impl Sub for HyperDual {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.e1 - o.e1, self.e2 - o.e2, self.e12 - o.e12)
    }
}

impl Mul for HyperDual {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re,
            e1: self.re * o.e1 + self.e1 * o.re,
            e2: self.re * o.e2 + self.e2 * o.re,
            e12: self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        }
    }
}

impl Div for HyperDual {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for HyperDual {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl AddAssign for HyperDual {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for HyperDual {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for HyperDual {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

/// `(value, first partials, second partials)` of a vector-valued map.
pub type SecondOrderJet = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>);

/// Value, gradient and Hessian of `f: R^k -> R^m` at `x`.
///
/// Returns `(value, first, second)` where `first[a]` is `∂f/∂x_a` and
/// `second[a][b]` is `∂²f/∂x_a∂x_b` (filled symmetrically from `a ≤ b`).
pub fn second_order_jet<F>(f: F, x: &[f64]) -> SecondOrderJet
where
    F: Fn(&[HyperDual]) -> Vec<HyperDual>,
{
    let k = x.len();
    let mut value = Vec::new();
    let mut first = vec![Vec::new(); k];
    let mut second = vec![vec![Vec::new(); k]; k];
    let mut args: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
    for a in 0..k {
        for b in a..k {
            args[a].e1 = 1.0;
            args[b].e2 = 1.0;
            let out = f(&args);
            args[a].e1 = 0.0;
            args[b].e2 = 0.0;
            if a == b {
                first[a] = out.iter().map(|h| h.e1).collect();
                if a == 0 {
                    value = out.iter().map(|h| h.re).collect();
                }
            }
            let d2: Vec<f64> = out.iter().map(|h| h.e12).collect();
            if a != b {
                second[b][a] = d2.clone();
            }
            second[a][b] = d2;
        }
    }
    if k == 0 {
        value = f(&args).iter().map(|h| h.re).collect();
    }
    (value, first, second)
}

/// First partials only (one ε₁-seeded evaluation per variable).
pub fn first_order_jet<F>(f: F, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>)
where
    F: Fn(&[HyperDual]) -> Vec<HyperDual>,
{
    let mut args: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
    let mut value = Vec::new();
    let mut first = Vec::with_capacity(x.len());
    for a in 0..x.len() {
        args[a].e1 = 1.0;
        let out = f(&args);
        args[a].e1 = 0.0;
        if a == 0 {
            value = out.iter().map(|h| h.re).collect();
        }
        first.push(out.iter().map(|h| h.e1).collect());
    }
    if x.is_empty() {
        value = f(&args).iter().map(|h| h.re).collect();
    }
    (value, first)
}
