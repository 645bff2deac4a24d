//! The scalar abstraction shared by every kernel in the crate.
//!
//! All algorithms are written once against [`Real`] and instantiated for
//! `f64`, [`MpFloat`](super::MpFloat) and [`Rational`](super::Rational).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::Error as NumericError;

pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Everything needed to mint new values (precision, for software floats).
    type Context: Clone + fmt::Debug + Send + Sync;

    /// True when arithmetic is exact (no rounding at all).
    const EXACT: bool;

    fn context(&self) -> Self::Context;

    fn from_f64(ctx: &Self::Context, x: f64) -> Self;

    fn from_i64(ctx: &Self::Context, x: i64) -> Self;

    fn from_rational(ctx: &Self::Context, q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    fn is_zero(&self) -> bool;

    /// Square root; negative radicands and (in exact mode) non-squares are errors.
    fn sqrt(&self) -> Result<Self, NumericError>;

    fn sin(&self) -> Result<Self, NumericError>;

    fn cos(&self) -> Result<Self, NumericError>;

    fn pi(ctx: &Self::Context) -> Result<Self, NumericError>;

    /// Relative spacing of representable numbers; zero for exact arithmetic.
    fn unit_roundoff(ctx: &Self::Context) -> f64;

    fn zero(ctx: &Self::Context) -> Self {
        Self::from_i64(ctx, 0)
    }

    fn one(ctx: &Self::Context) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn ratio(ctx: &Self::Context, num: i64, den: i64) -> Self {
        Self::from_i64(ctx, num) / Self::from_i64(ctx, den)
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero(&self.context())
    }

    fn signum_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if self.is_negative() {
            -1.0
        } else {
            1.0
        }
    }

    fn powi(&self, exp: i32) -> Self {
        let ctx = self.context();
        let mut base = self.clone();
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(&ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        if exp < 0 {
            Self::one(&ctx) / acc
        } else {
            acc
        }
    }

    /// `sqrt(a^2 + b^2)`; kept overridable so binary64 can avoid overflow.
    fn hypot(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            return Self::zero(&self.context());
        }
        (self.clone() * self + &(other.clone() * other)).sqrt().expect("sum of squares is nonnegative")
    }

    fn max_abs(&self, other: &Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    fn square(&self) -> Self {
        self.clone() * self
    }
}

impl Real for f64 {
    type Context = ();
    const EXACT: bool = false;

    fn context(&self) {}

    fn from_f64(_: &(), x: f64) -> Self {
        x
    }

    fn from_i64(_: &(), x: i64) -> Self {
        x as f64
    }

    fn from_rational(_: &(), q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn sqrt(&self) -> Result<Self, NumericError> {
        if *self < 0.0 {
            return Err(NumericError::NegativeRadicand(*self));
        }
        Ok(f64::sqrt(*self))
    }

    fn sin(&self) -> Result<Self, NumericError> {
        Ok(f64::sin(*self))
    }

    fn cos(&self) -> Result<Self, NumericError> {
        Ok(f64::cos(*self))
    }

    fn pi(_: &()) -> Result<Self, NumericError> {
        Ok(std::f64::consts::PI)
    }

    fn unit_roundoff(_: &()) -> f64 {
        f64::EPSILON / 2.0
    }

    fn hypot(&self, other: &Self) -> Self {
        f64::hypot(*self, *other)
    }

    fn powi(&self, exp: i32) -> Self {
        f64::powi(*self, exp)
    }
}
