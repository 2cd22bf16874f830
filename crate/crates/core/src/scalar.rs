//! Scalar abstraction over `f64` and nested forward-mode dual numbers.
//!
//! Every geometric quantity in this crate is written once, generically over
//! [`Scalar`]. Evaluating it with `Dual<f64>` yields an exact directional
//! derivative; `Dual<Dual<f64>>` yields a mixed second derivative, and so on.
//! There is no truncation error at any order, only floating-point rounding.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{GeometryError, Result};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(x: f64) -> Self;

    /// The primal (lowest-order) value, stripped of all infinitesimal parts.
    fn value(&self) -> f64;

    /// `true` when every stored coefficient is finite.
    fn is_finite(&self) -> bool;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn one() -> Self {
        Self::constant(1.0)
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    /// Division that refuses a zero primal denominator.
    fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.value() == 0.0 {
            return Err(GeometryError::DomainViolation(
                "division by zero while evaluating a component function".into(),
            ));
        }
        Ok(self / rhs)
    }

    fn square(self) -> Self {
        self * self
    }

    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Self::one();
        for _ in 0..n {
            acc *= self;
        }
        acc
    }
}

impl Scalar for f64 {
    #[inline]
    fn constant(x: f64) -> Self {
        x
    }

    #[inline]
    fn value(&self) -> f64 {
        *self
    }

    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// First-order dual number `re + eps·ε` with `ε² = 0`, over any scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    /// A variable seeded with unit tangent.
    pub fn variable(re: T) -> Self {
        Self { re, eps: T::one() }
    }

    /// Lift a value as a constant (zero tangent).
    pub fn lift(re: T) -> Self {
        Self { re, eps: T::zero() }
    }
}

/// Seed the point `base + ε·direction` for a directional derivative.
pub fn seed_direction<T: Scalar>(base: &[T], direction: &[T]) -> Vec<Dual<T>> {
    base.iter().zip(direction).map(|(&b, &d)| Dual::new(b, d)).collect()
}

/// Seed the point `base + ε·e_k` for a coordinate partial.
pub fn seed_axis<T: Scalar>(base: &[T], axis: usize) -> Vec<Dual<T>> {
    base.iter()
        .enumerate()
        .map(|(i, &b)| if i == axis { Dual::variable(b) } else { Dual::lift(b) })
        .collect()
}

impl<T: Scalar> Scalar for Dual<T> {
    #[inline]
    fn constant(x: f64) -> Self {
        Self::lift(T::constant(x))
    }

    #[inline]
    fn value(&self) -> f64 {
        self.re.value()
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.is_finite()
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.re.recip();
        let re = self.re * inv;
        Self::new(re, (self.eps - re * rhs.eps) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Scalar> Add<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        Self::new(self.re + rhs, self.eps)
    }
}

impl<T: Scalar> Sub<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: f64) -> Self {
        Self::new(self.re - rhs, self.eps)
    }
}

impl<T: Scalar> Mul<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.re * rhs, self.eps * rhs)
    }
}

impl<T: Scalar> Div<f64> for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        Self::new(self.re / rhs, self.eps / rhs)
    }
}
