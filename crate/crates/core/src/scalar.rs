//! Scalar abstractions shared by the jet and matrix layers.
//!
//! [`Coeff`] is the coefficient field of a jet (real or complex numbers).
//! [`Scalar`] is what [`crate::linalg::Matrix`] is generic over: plain numbers
//! and jets of plain numbers. Jets carry a context (number of variables and
//! truncation degree), so constants are always produced from an existing value
//! through the `*_like` constructors.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// Coefficient field of a jet.
pub trait Coeff:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn abs(self) -> f64;
    fn conj(self) -> Self;
    fn exp(self) -> Self;
    fn powf(self, p: f64) -> Self;
    fn real(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn conj(self) -> Self {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn real(self) -> f64 {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn powf(self, p: f64) -> Self {
        Complex64::powf(self, p)
    }
    fn real(self) -> f64 {
        self.re
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Element type of a generic dense matrix.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_f64_like(&self, v: f64) -> Self;
    fn scale(&self, s: f64) -> Self;
    /// Multiplicative inverse. Requires a nonzero (constant term of the) value.
    fn recip(&self) -> Self;
    fn conj(&self) -> Self;
    /// Magnitude used for pivoting; the constant term for jets.
    fn magnitude(&self) -> f64;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add_ref(&a.mul_ref(b));
    }
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn from_f64_like(&self, v: f64) -> Self {
        v
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn conj(&self) -> Self {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64_like(&self, v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn recip(&self) -> Self {
        Complex64::new(1.0, 0.0) / self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

/// Real scalars that chart maps are written against: `f64` and real jets.
///
/// Carries the transcendental functions the built-in charts need and the
/// complexification used by the Hermitian matrix models.
pub trait RealScalar: Scalar {
    type Complex: Scalar;

    fn exp(&self) -> Self;
    /// Real power of a positive value; NaN (or NaN coefficients) otherwise.
    fn powf(&self, p: f64) -> Self;
    fn sqrt(&self) -> Self {
        self.powf(0.5)
    }
    fn complexify(&self) -> Self::Complex;
    fn complex_scale(&self, z: Complex64) -> Self::Complex;
    fn real_part(z: &Self::Complex) -> Self;
    fn imag_part(z: &Self::Complex) -> Self;
    /// Value at the expansion point.
    fn value(&self) -> f64;
}

impl RealScalar for f64 {
    type Complex = Complex64;

    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn powf(&self, p: f64) -> Self {
        f64::powf(*self, p)
    }
    fn complexify(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn complex_scale(&self, z: Complex64) -> Complex64 {
        z * *self
    }
    fn real_part(z: &Complex64) -> Self {
        z.re
    }
    fn imag_part(z: &Complex64) -> Self {
        z.im
    }
    fn value(&self) -> f64 {
        *self
    }
}
