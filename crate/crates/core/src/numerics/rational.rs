//! Exact rational scalars.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::Real;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

/// Exact square root of a nonnegative integer, if it exists.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational, if it is rational.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    let num = exact_isqrt(q.numer())?;
    let den = exact_isqrt(q.denom())?;
    Some(BigRational::new(num, den))
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({})", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.0.cmp(&other.0))
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Real for Rational {
    type Context = ();
    const EXACT: bool = true;

    fn context(&self) {}

    fn from_f64(_: &(), x: f64) -> Self {
        Rational(BigRational::from_f64(x).expect("finite binary64 value"))
    }

    fn from_i64(_: &(), x: i64) -> Self {
        Rational(BigRational::from_integer(x.into()))
    }

    fn from_rational(_: &(), q: &BigRational) -> Self {
        Rational(q.clone())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    fn sqrt(&self) -> Result<Self, Error> {
        if self.0.is_negative() {
            return Err(Error::NegativeRadicand(self.to_f64()));
        }
        exact_sqrt(&self.0).map(Rational).ok_or_else(|| Error::Irrational(self.0.to_string()))
    }

    fn sin(&self) -> Result<Self, Error> {
        Err(Error::NotExact("sin"))
    }

    fn cos(&self) -> Result<Self, Error> {
        Err(Error::NotExact("cos"))
    }

    fn pi(_: &()) -> Result<Self, Error> {
        Err(Error::NotExact("pi"))
    }

    fn unit_roundoff(_: &()) -> f64 {
        0.0
    }
}
