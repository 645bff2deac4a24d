//! Runtime selection of the scalar type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{MpContext, MpFloat, Rational, Real};
use crate::{Error, Result};

pub const DEFAULT_DECIMAL_DIGITS: u32 = 60;
pub const MIN_DECIMAL_DIGITS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PrecisionMode {
    Binary64,
    Software { decimal_digits: u32 },
    ExactRational,
}

impl PrecisionMode {
    pub fn default_tolerance(&self) -> f64 {
        match self {
            PrecisionMode::Binary64 => 1e-8,
            PrecisionMode::Software { .. } | PrecisionMode::ExactRational => 1e-10,
        }
    }
}

impl fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecisionMode::Binary64 => f.write_str("f64"),
            PrecisionMode::Software { decimal_digits } => write!(f, "{decimal_digits}"),
            PrecisionMode::ExactRational => f.write_str("rational"),
        }
    }
}

impl FromStr for PrecisionMode {
    type Err = Error;

    /// Accepts `f64`, `rational`, or a decimal digit count.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "f64" | "binary64" => Ok(PrecisionMode::Binary64),
            "rational" | "exact" => Ok(PrecisionMode::ExactRational),
            other => {
                let digits: u32 = other
                    .parse()
                    .map_err(|_| Error::Precision(format!("{other:?} is not f64, rational or a digit count")))?;
                if digits < MIN_DECIMAL_DIGITS {
                    return Err(Error::Precision(format!(
                        "software floats need at least {MIN_DECIMAL_DIGITS} digits, got {digits}"
                    )));
                }
                Ok(PrecisionMode::Software { decimal_digits: digits })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub mode: PrecisionMode,
    pub default_tolerance: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::software(DEFAULT_DECIMAL_DIGITS).expect("default precision is valid")
    }
}

impl PrecisionContext {
    pub fn new(mode: PrecisionMode) -> Result<Self> {
        if let PrecisionMode::Software { decimal_digits } = mode {
            if decimal_digits < MIN_DECIMAL_DIGITS {
                return Err(Error::Precision(format!(
                    "software floats need at least {MIN_DECIMAL_DIGITS} digits, got {decimal_digits}"
                )));
            }
        }
        Ok(Self { mode, default_tolerance: mode.default_tolerance() })
    }

    pub fn binary64() -> Self {
        Self::new(PrecisionMode::Binary64).expect("binary64 is valid")
    }

    pub fn software(decimal_digits: u32) -> Result<Self> {
        Self::new(PrecisionMode::Software { decimal_digits })
    }

    pub fn exact() -> Self {
        Self::new(PrecisionMode::ExactRational).expect("exact mode is valid")
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.default_tolerance = tol;
        self
    }

    pub fn is_exact(&self) -> bool {
        self.mode == PrecisionMode::ExactRational
    }

    /// Runs `visitor` with the scalar type selected by this context.
    pub fn dispatch<V: PrecisionVisitor>(&self, visitor: V) -> V::Output {
        match self.mode {
            PrecisionMode::Binary64 => visitor.visit::<f64>(&(), self),
            PrecisionMode::Software { decimal_digits } => {
                visitor.visit::<MpFloat>(&MpContext::with_decimal_digits(decimal_digits), self)
            }
            PrecisionMode::ExactRational => visitor.visit::<Rational>(&(), self),
        }
    }
}

/// A computation generic over the scalar type, run through [`PrecisionContext::dispatch`].
pub trait PrecisionVisitor {
    type Output;
    fn visit<S: Real>(self, ctx: &S::Context, precision: &PrecisionContext) -> Self::Output;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_modes() {
        assert_eq!("f64".parse::<PrecisionMode>().unwrap(), PrecisionMode::Binary64);
        assert_eq!("rational".parse::<PrecisionMode>().unwrap(), PrecisionMode::ExactRational);
        assert_eq!("80".parse::<PrecisionMode>().unwrap(), PrecisionMode::Software { decimal_digits: 80 });
        assert!("20".parse::<PrecisionMode>().is_err());
        assert!("fast".parse::<PrecisionMode>().is_err());
    }

    #[test]
    fn default_tolerances() {
        assert_eq!(PrecisionContext::binary64().default_tolerance, 1e-8);
        assert_eq!(PrecisionContext::default().default_tolerance, 1e-10);
        assert!(PrecisionContext::software(12).is_err());
    }

    struct Roundoff;
    impl PrecisionVisitor for Roundoff {
        type Output = f64;
        fn visit<S: Real>(self, ctx: &S::Context, _: &PrecisionContext) -> f64 {
            S::unit_roundoff(ctx)
        }
    }

    #[test]
    fn dispatch_selects_scalar() {
        assert_eq!(PrecisionContext::binary64().dispatch(Roundoff), f64::EPSILON / 2.0);
        assert_eq!(PrecisionContext::exact().dispatch(Roundoff), 0.0);
        assert_eq!(PrecisionContext::default().dispatch(Roundoff), 2f64.powi(-256));
    }
}
