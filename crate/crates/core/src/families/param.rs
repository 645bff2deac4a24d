//! Exact parameter literals.
//!
//! Parameters are kept exact so that the structural questions (is the
//! recurrence polynomial? does a special clause apply?) can be decided
//! without rounding, and so that every precision mode sees the same value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::{Complex, Real};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Real(BigRational),
    Complex {
        re: BigRational,
        im: BigRational,
    },
    /// `q * pi` for rational `q`.
    PiMultiple(BigRational),
}

impl Param {
    pub fn rational(num: i64, den: i64) -> Self {
        Param::Real(BigRational::new(num.into(), den.into()))
    }

    pub fn integer(n: i64) -> Self {
        Param::Real(BigRational::from_integer(n.into()))
    }

    pub fn complex(re: BigRational, im: BigRational) -> Self {
        if im.is_zero() {
            Param::Real(re)
        } else {
            Param::Complex { re, im }
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Param::Complex { .. })
    }

    /// The exact rational value, if the parameter is a real rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Param::Real(q) => Some(q),
            _ => None,
        }
    }

    /// Real and imaginary parts as exact rationals (not for pi multiples).
    pub fn gaussian(&self) -> Option<(BigRational, BigRational)> {
        match self {
            Param::Real(q) => Some((q.clone(), BigRational::zero())),
            Param::Complex { re, im } => Some((re.clone(), im.clone())),
            Param::PiMultiple(_) => None,
        }
    }

    pub fn re_f64(&self) -> f64 {
        self.to_complex_f64().0
    }

    pub fn im_f64(&self) -> f64 {
        self.to_complex_f64().1
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        match self {
            Param::Real(q) => (q.to_f64().unwrap_or(f64::NAN), 0.0),
            Param::Complex { re, im } => (re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN)),
            Param::PiMultiple(q) => (q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI, 0.0),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Param::Complex { re, im } => Param::Complex { re: re.clone(), im: -im.clone() },
            other => other.clone(),
        }
    }

    pub fn to_complex<S: Real>(&self, ctx: &S::Context) -> Result<Complex<S>> {
        match self {
            Param::Real(q) => Ok(Complex::real(S::from_rational(ctx, q))),
            Param::Complex { re, im } => Ok(Complex::new(S::from_rational(ctx, re), S::from_rational(ctx, im))),
            Param::PiMultiple(q) => Ok(Complex::real(S::pi(ctx)? * &S::from_rational(ctx, q))),
        }
    }

    /// Real value in the scalar type; complex parameters are an error.
    pub fn to_real<S: Real>(&self, ctx: &S::Context) -> Result<S> {
        if !self.is_real() {
            return Err(Error::Domain(format!("parameter {self} must be real")));
        }
        Ok(self.to_complex::<S>(ctx)?.re)
    }

    /// `(sin x, cos x)` for this parameter used as an angle `x`, exact when
    /// both values are rational (multiples of `pi/2`).
    pub fn sin_cos<S: Real>(&self, ctx: &S::Context) -> Result<(S, S)> {
        self.scaled_sin_cos(ctx, 1)
    }

    /// `(sin kx, cos kx)` for this parameter used as an angle `x`.
    pub fn scaled_sin_cos<S: Real>(&self, ctx: &S::Context, k: i64) -> Result<(S, S)> {
        if let Param::PiMultiple(q) = self {
            let kq = q * BigRational::from_integer(k.into());
            if let Some((s, c)) = quarter_turn(&kq) {
                return Ok((S::from_i64(ctx, s), S::from_i64(ctx, c)));
            }
        }
        let x = self.to_real::<S>(ctx)? * &S::from_i64(ctx, k);
        if x.is_zero() {
            return Ok((S::zero(ctx), S::one(ctx)));
        }
        Ok((x.sin()?, x.cos()?))
    }
}

/// `(sin q pi, cos q pi)` when `2q` is an integer.
fn quarter_turn(q: &BigRational) -> Option<(i64, i64)> {
    let twice = q * BigRational::from_integer(2.into());
    if !twice.is_integer() {
        return None;
    }
    let r = twice.to_integer().mod_floor_i64(4);
    Some(match r {
        0 => (0, 1),
        1 => (1, 0),
        2 => (0, -1),
        _ => (-1, 0),
    })
}

trait ModFloor {
    fn mod_floor_i64(&self, m: i64) -> i64;
}

impl ModFloor for BigInt {
    fn mod_floor_i64(&self, m: i64) -> i64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_i64().expect("small remainder")
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Real(q) => f.write_str(&fmt_rational(q)),
            Param::Complex { re, im } => {
                let sign = if im.is_negative() { '-' } else { '+' };
                let mag = im.abs();
                let mag = if mag.is_one() { String::new() } else { fmt_rational(&mag) };
                if re.is_zero() {
                    let lead = if im.is_negative() { "-" } else { "" };
                    write!(f, "{lead}{mag}i")
                } else {
                    write!(f, "{}{sign}{mag}i", fmt_rational(re))
                }
            }
            Param::PiMultiple(q) => {
                if q.is_one() {
                    f.write_str("pi")
                } else if q.numer().is_one() {
                    write!(f, "pi/{}", q.denom())
                } else if q.is_integer() {
                    write!(f, "{}pi", q.numer())
                } else {
                    write!(f, "{}pi/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

/// Parses `12`, `-0.75`, `3/4`, `1.5e-3`, or `-7/2e1` style literals exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = all.parse().map_err(|_| err())?;
    let ten = BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let mut q = BigRational::from_integer(n);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

/// Parses a coefficient of `i` or `pi`: empty means 1, `-` means -1.
fn parse_coefficient(s: &str, whole: &str) -> Result<BigRational> {
    match s.trim() {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        other => parse_rational(other.trim_end_matches('*')).map_err(|_| Error::Parse(whole.to_string())),
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        if let Some(pos) = t.find("pi") {
            // forms: pi, -pi, 2pi, pi/3, 2pi/3, 2/3pi
            let before = &t[..pos];
            let after = &t[pos + 2..];
            let mut q = parse_coefficient(before, s)?;
            if let Some(den) = after.strip_prefix('/') {
                let d = parse_rational(den).map_err(|_| Error::Parse(s.to_string()))?;
                if d.is_zero() {
                    return Err(Error::Parse(s.to_string()));
                }
                q /= d;
            } else if !after.is_empty() {
                return Err(Error::Parse(s.to_string()));
            }
            return Ok(Param::PiMultiple(q));
        }
        if let Some(body) = t.strip_suffix('i') {
            // split into real and imaginary parts at the last sign that is
            // not a leading sign and not part of an exponent
            let bytes = body.as_bytes();
            let mut split = None;
            for idx in (1..bytes.len()).rev() {
                if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                    split = Some(idx);
                    break;
                }
            }
            let (re, im) = match split {
                Some(idx) => (parse_rational(&body[..idx])?, parse_coefficient(&body[idx..], s)?),
                None => (BigRational::zero(), parse_coefficient(body, s)?),
            };
            return Ok(Param::complex(re, im));
        }
        Ok(Param::Real(parse_rational(&t)?))
    }
}

impl Serialize for Param {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(x) => {
                // JSON numbers are read through their shortest decimal form,
                // so 0.3 means 3/10 rather than the nearest binary64 value.
                format!("{x}").parse().map_err(serde::de::Error::custom)
            }
        }
    }
}
