//! Software floating point with a runtime-selected binary precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;

use super::Real;
use crate::Error as NumericError;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Precision of an [`MpFloat`], in mantissa bits (always a multiple of 64).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MpContext {
    bits: usize,
}

impl MpContext {
    pub fn with_bits(bits: usize) -> Self {
        let words = bits.div_ceil(64).max(1);
        Self { bits: words * 64 }
    }

    /// Enough bits for `digits` significant decimal digits plus a guard word.
    pub fn with_decimal_digits(digits: u32) -> Self {
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + 16;
        Self::with_bits(bits)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn decimal_digits(&self) -> u32 {
        (self.bits as f64 / std::f64::consts::LOG2_10).floor() as u32
    }
}

#[derive(Clone)]
pub struct MpFloat {
    value: BigFloat,
    ctx: MpContext,
}

impl MpFloat {
    fn wrap(value: BigFloat, ctx: MpContext) -> Self {
        Self { value, ctx }
    }

    fn p(&self) -> usize {
        self.ctx.bits
    }

    #[inline]
    fn same_context(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "arithmetic between values from different precision contexts");
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn parse_decimal(ctx: &MpContext, s: &str) -> Result<Self, NumericError> {
        let v = CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, ctx.bits, RM, &mut cc.borrow_mut()));
        if v.is_nan() {
            return Err(NumericError::Parse(s.to_string()));
        }
        Ok(Self::wrap(v, *ctx))
    }

    /// Decimal rendering with all significant digits of the context.
    pub fn to_decimal_string(&self) -> String {
        CONSTS.with(|cc| self.value.format(Radix::Dec, RM, &mut cc.borrow_mut()).unwrap_or_else(|_| "NaN".to_string()))
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MpFloat({})", self.to_decimal_string())
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! mp_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait for MpFloat {
            type Output = MpFloat;
            fn $method(self, rhs: MpFloat) -> MpFloat {
                self.same_context(&rhs);
                let p = self.p();
                MpFloat::wrap(self.value.$op(&rhs.value, p, RM), self.ctx)
            }
        }
        impl<'a> $trait<&'a MpFloat> for MpFloat {
            type Output = MpFloat;
            fn $method(self, rhs: &'a MpFloat) -> MpFloat {
                self.same_context(rhs);
                let p = self.p();
                MpFloat::wrap(self.value.$op(&rhs.value, p, RM), self.ctx)
            }
        }
    };
}

mp_binop!(Add, add, add);
mp_binop!(Sub, sub, sub);
mp_binop!(Mul, mul, mul);
mp_binop!(Div, div, div);

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat::wrap(self.value.neg(), self.ctx)
    }
}

impl Real for MpFloat {
    type Context = MpContext;
    const EXACT: bool = false;

    fn context(&self) -> MpContext {
        self.ctx
    }

    fn from_f64(ctx: &MpContext, x: f64) -> Self {
        Self::wrap(BigFloat::from_f64(x, ctx.bits), *ctx)
    }

    fn from_i64(ctx: &MpContext, x: i64) -> Self {
        Self::wrap(BigFloat::from_i64(x, ctx.bits), *ctx)
    }

    fn from_rational(ctx: &MpContext, q: &BigRational) -> Self {
        let num = Self::parse_decimal(ctx, &q.numer().to_string()).expect("integer literal");
        let den = Self::parse_decimal(ctx, &q.denom().to_string()).expect("integer literal");
        num / den
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.value.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.value.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        // mantissa is 0.m in [1/2, 1) with the most significant word last;
        // words are 32 bits wide on wasm32 and 64 elsewhere
        let w = -(astro_float::WORD_BIT_SIZE as i32);
        let word = |i: usize| words.len().checked_sub(i + 1).map_or(0.0, |j| words[j] as f64);
        let m = ((word(2) * 2f64.powi(w) + word(1)) * 2f64.powi(w) + word(0)) * 2f64.powi(w);
        let e = exp as i32;
        let v = if e > 1000 {
            f64::INFINITY
        } else if e < -1070 {
            0.0
        } else {
            m * 2f64.powi(e)
        };
        if sign.is_negative() {
            -v
        } else {
            v
        }
    }

    fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.ctx)
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    fn sqrt(&self) -> Result<Self, NumericError> {
        if self.is_negative() {
            return Err(NumericError::NegativeRadicand(self.to_f64()));
        }
        if self.value.is_zero() {
            return Ok(self.clone());
        }
        Ok(Self::wrap(self.value.sqrt(self.p(), RM), self.ctx))
    }

    fn sin(&self) -> Result<Self, NumericError> {
        let v = CONSTS.with(|cc| self.value.sin(self.p(), RM, &mut cc.borrow_mut()));
        Ok(Self::wrap(v, self.ctx))
    }

    fn cos(&self) -> Result<Self, NumericError> {
        let v = CONSTS.with(|cc| self.value.cos(self.p(), RM, &mut cc.borrow_mut()));
        Ok(Self::wrap(v, self.ctx))
    }

    fn pi(ctx: &MpContext) -> Result<Self, NumericError> {
        let v = CONSTS.with(|cc| cc.borrow_mut().pi(ctx.bits, RM));
        Ok(Self::wrap(v, *ctx))
    }

    fn unit_roundoff(ctx: &MpContext) -> f64 {
        2f64.powi(-(ctx.bits as i32))
    }

    fn powi(&self, exp: i32) -> Self {
        let p = self.p();
        let v = self.value.powi(exp.unsigned_abs() as usize, p, RM);
        let v = if exp < 0 { BigFloat::from_i64(1, p).div(&v, p, RM) } else { v };
        Self::wrap(v, self.ctx)
    }
}
