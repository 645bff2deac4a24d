//! Complex numbers over any [`Real`] scalar.
//!
//! `num_complex::Complex` needs `num_traits::Num`, which cannot be
//! implemented for scalars whose constants depend on a runtime precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::Real;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Complex<S> {
    pub re: S,
    pub im: S,
}

impl<S: Real> Complex<S> {
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }

    pub fn real(re: S) -> Self {
        let im = S::zero(&re.context());
        Self { re, im }
    }

    pub fn from_i64(ctx: &S::Context, x: i64) -> Self {
        Self::real(S::from_i64(ctx, x))
    }

    pub fn i(ctx: &S::Context) -> Self {
        Self::new(S::zero(ctx), S::one(ctx))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Modulus squared, exact in rational arithmetic.
    pub fn norm_sqr(&self) -> S {
        self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> S {
        self.re.hypot(&self.im)
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.re.clone() * k, self.im.clone() * k)
    }

    pub fn add_real(&self, k: &S) -> Self {
        Self::new(self.re.clone() + k, self.im.clone())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Result<Self> {
        let ctx = self.re.context();
        if self.im.is_zero() {
            return if self.re.is_negative() {
                Ok(Self::new(S::zero(&ctx), (-self.re.clone()).sqrt()?))
            } else {
                Ok(Self::real(self.re.sqrt()?))
            };
        }
        let r = self.abs();
        let half = S::ratio(&ctx, 1, 2);
        let re = ((r.clone() + &self.re) * &half).sqrt()?;
        let im_mag = ((r - &self.re) * &half).sqrt()?;
        let im = if self.im.is_negative() { -im_mag } else { im_mag };
        Ok(Self::new(re, im))
    }
}

impl<S: Real> Add for Complex<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a, S: Real> Add<&'a Complex<S>> for Complex<S> {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        Self::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl<S: Real> Sub for Complex<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a, S: Real> Sub<&'a Complex<S>> for Complex<S> {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        Self::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl<'a, S: Real> Mul<&'a Complex<S>> for Complex<S> {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        let re = self.re.clone() * &rhs.re - &(self.im.clone() * &rhs.im);
        let im = self.re * &rhs.im + &(self.im * &rhs.re);
        Self::new(re, im)
    }
}

impl<S: Real> Mul for Complex<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl<'a, S: Real> Div<&'a Complex<S>> for Complex<S> {
    type Output = Self;
    fn div(self, rhs: &'a Self) -> Self {
        if rhs.im.is_zero() {
            return Self::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Self::new(num.re / &d, num.im / &d)
    }
}

impl<S: Real> Div for Complex<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self / &rhs
    }
}

impl<S: Real> Neg for Complex<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    #[test]
    fn field_operations() {
        let a = Complex::new(1.0, 2.0);
        let b = Complex::new(3.0, -1.0);
        let p = a.clone() * &b;
        assert_eq!(p, Complex::new(5.0, 5.0));
        let q = p / &b;
        assert!((q.re - 1.0).abs() < 1e-15 && (q.im - 2.0).abs() < 1e-15);
    }

    #[test]
    fn principal_sqrt() {
        let z = Complex::new(-4.0, 0.0).sqrt().unwrap();
        assert_eq!(z, Complex::new(0.0, 2.0));
        let w = Complex::new(3.0, -4.0).sqrt().unwrap();
        assert!((w.re - 2.0).abs() < 1e-15 && (w.im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rational_conjugate_product_is_real() {
        let a = Complex::new(Rational::new(1, 4), Rational::new(3, 10));
        let p = a.clone() * &a.conj();
        assert!(p.is_real());
        assert_eq!(p.re, Rational::new(1, 16) + Rational::new(9, 100));
    }
}
