//! Necessary conditions for a nontrivial commutant.
//!
//! Shifting the commutation equation in `(m,n)` gives small linear systems
//! in consecutive `h_k`. Their determinants (`delta_1..3` for two equations,
//! `D(m,n)` for three) must vanish whenever a nonzero Hankel commutant
//! exists. The omega test checks `beta_n - alpha_n - alpha_{n-1} + omega`,
//! which vanishes identically in the polynomial Wilson and continuous dual
//! Hahn cases.

mod asymptotic;
mod decay;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::families::{Jacobi, ValidatedFamily};
use crate::numerics::{PrecisionContext, PrecisionVisitor, Real};
use crate::{Error, Result};

pub use asymptotic::{asymptotic_claims_check, omega_decay_fit, AsymptoticClaim, ExpectedCoefficient, OmegaDecay};
pub use decay::{decay_study, mp_bracket, mp_bracket_study, DecayPrediction, DecayStudy, DEFAULT_DECAY_MS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Delta1,
    Delta2,
    Delta3,
    #[serde(rename = "D")]
    D,
    Omega,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Delta1 => "delta1",
            Quantity::Delta2 => "delta2",
            Quantity::Delta3 => "delta3",
            Quantity::D => "D",
            Quantity::Omega => "omega",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delta1" | "d1" => Ok(Quantity::Delta1),
            "delta2" | "d2" => Ok(Quantity::Delta2),
            "delta3" | "d3" => Ok(Quantity::Delta3),
            "d" | "bigd" | "big-d" => Ok(Quantity::D),
            "omega" => Ok(Quantity::Omega),
            other => {
                Err(Error::Invalid(format!("unknown quantity {other:?} (expected delta1, delta2, delta3, D or omega)")))
            }
        }
    }
}

fn max_row<S: Real>(row: &[S]) -> S {
    row.iter().fold(S::zero(&row[0].context()), |m, x| m.max_abs(x))
}

/// Determinant value and the product of its row maxima.
fn det2<S: Real>(r0: [S; 2], r1: [S; 2]) -> (S, S) {
    let scale = max_row(&r0) * &max_row(&r1);
    let v = r0[0].clone() * &r1[1] - &(r0[1].clone() * &r1[0]);
    (v, scale)
}

fn det3<S: Real>(r: [[S; 3]; 3]) -> (S, S) {
    let scale = max_row(&r[0]) * &max_row(&r[1]) * &max_row(&r[2]);
    let minor =
        |a: usize, b: usize, c: usize, d: usize| -> S { r[1][a].clone() * &r[2][b] - &(r[1][c].clone() * &r[2][d]) };
    let v = r[0][0].clone() * &minor(1, 2, 2, 1) - &(r[0][1].clone() * &minor(0, 2, 2, 0))
        + &(r[0][2].clone() * &minor(0, 1, 1, 0));
    (v, scale)
}

/// `delta_j(n, m)` with its scale, for `j` in `1..=3`, `n >= 2`, `m >= 0`.
///
/// `delta_2` carries its leading minus sign.
pub fn delta_scaled<S: Real>(jac: &Jacobi<S>, j: u8, n: i64, m: i64) -> Result<(S, S)> {
    if n < 2 || m < 0 {
        return Err(Error::Range(format!("delta_{j}({n},{m}) needs n >= 2 and m >= 0")));
    }
    let a = |k: i64| jac.alpha(k);
    let b = |k: i64| jac.beta(k);
    match j {
        1 => Ok(det2([b(n)? - &b(m)?, a(n - 1)? - &a(m - 1)?], [b(n - 1)? - &b(m + 1)?, a(n - 2)? - &a(m)?])),
        2 => {
            let (v, s) = det2([a(n)? - &a(m)?, a(n - 1)? - &a(m - 1)?], [a(n - 1)? - &a(m + 1)?, a(n - 2)? - &a(m)?]);
            Ok((-v, s))
        }
        3 => Ok(det2([a(n)? - &a(m)?, b(n)? - &b(m)?], [a(n - 1)? - &a(m + 1)?, b(n - 1)? - &b(m + 1)?])),
        _ => Err(Error::Invalid(format!("delta index {j} is not 1, 2 or 3"))),
    }
}

pub fn delta_j<S: Real>(jac: &Jacobi<S>, j: u8, n: i64, m: i64) -> Result<S> {
    Ok(delta_scaled(jac, j, n, m)?.0)
}

/// `D(m,n)` with its scale, for `n >= 2`, `m >= 0`; row `r` holds the
/// coefficients of the equation shifted to `(m + r, n - r)`.
pub fn big_d_scaled<S: Real>(jac: &Jacobi<S>, m: i64, n: i64) -> Result<(S, S)> {
    if n < 2 || m < 0 {
        return Err(Error::Range(format!("D({m},{n}) needs n >= 2 and m >= 0")));
    }
    let row = |r: i64| -> Result<[S; 3]> {
        Ok([
            jac.alpha(n - r)? - &jac.alpha(m + r)?,
            jac.beta(n - r)? - &jac.beta(m + r)?,
            jac.alpha(n - r - 1)? - &jac.alpha(m + r - 1)?,
        ])
    };
    Ok(det3([row(0)?, row(1)?, row(2)?]))
}

pub fn big_d<S: Real>(jac: &Jacobi<S>, m: i64, n: i64) -> Result<S> {
    Ok(big_d_scaled(jac, m, n)?.0)
}

/// `beta_n - alpha_n - alpha_{n-1} + omega` with the largest of its terms.
pub fn omega_value<S: Real>(jac: &Jacobi<S>, omega: &S, n: i64) -> Result<(S, S)> {
    let (b, a0, a1) = (jac.beta(n)?, jac.alpha(n)?, jac.alpha(n - 1)?);
    let scale = b.abs().max_abs(&a0).max_abs(&a1).max_abs(omega);
    Ok((b - &a0 - &a1 + omega, scale))
}

/// Omega-test values for `1 <= n <= n_max`.
pub fn omega_test<S: Real>(jac: &Jacobi<S>, omega: &S, n_max: i64) -> Result<Vec<S>> {
    (1..=n_max).map(|n| Ok(omega_value(jac, omega, n)?.0)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSample {
    /// Absent for the omega test, which is indexed by `n` only.
    pub m: Option<i64>,
    pub n: i64,
    pub value: f64,
    pub scale: f64,
}

impl GridSample {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionGrid {
    pub quantity: Quantity,
    pub family: ValidatedFamily,
    pub omega: Option<f64>,
    pub samples: Vec<GridSample>,
    pub max_relative: f64,
    pub max_absolute: f64,
}

impl ObstructionGrid {
    /// Every sample satisfies `|value| <= tol * scale`.
    pub fn vanishes(&self, tol: f64) -> bool {
        self.max_relative <= tol
    }
}

/// Which points an obstruction grid covers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub quantity: Quantity,
    pub m_min: i64,
    pub m_max: i64,
    pub n_min: i64,
    pub n_max: i64,
    /// Required for the omega test.
    pub omega: Option<String>,
}

impl GridSpec {
    pub fn new(quantity: Quantity, m: (i64, i64), n: (i64, i64)) -> Self {
        GridSpec { quantity, m_min: m.0, m_max: m.1, n_min: n.0, n_max: n.1, omega: None }
    }

    pub fn omega(omega: &str, n_max: i64) -> Self {
        GridSpec { quantity: Quantity::Omega, m_min: 0, m_max: 0, n_min: 1, n_max, omega: Some(omega.into()) }
    }

    fn check(&self) -> Result<()> {
        let n_floor = if self.quantity == Quantity::Omega { 1 } else { 2 };
        if self.n_min < n_floor || self.n_max < self.n_min || self.m_min < 0 || self.m_max < self.m_min {
            return Err(Error::Invalid(format!(
                "grid m={}..{}, n={}..{} is empty or below n = {n_floor}",
                self.m_min, self.m_max, self.n_min, self.n_max
            )));
        }
        if self.quantity == Quantity::Omega && self.omega.is_none() {
            return Err(Error::Invalid("the omega test needs a value for omega".into()));
        }
        Ok(())
    }
}

pub fn obstruction_grid<S: Real>(jac: &Jacobi<S>, fam: &ValidatedFamily, spec: &GridSpec) -> Result<ObstructionGrid> {
    spec.check()?;
    let ctx = jac.context();
    let mut samples = Vec::new();
    let mut push = |m: Option<i64>, n: i64, (v, s): (S, S)| {
        samples.push(GridSample { m, n, value: v.to_f64(), scale: s.to_f64() })
    };
    let mut omega_f64 = None;
    let mut max_relative = 0.0f64;
    let mut rel = |v: &S, s: &S| {
        let r = if s.is_zero() { v.abs().to_f64() } else { (v.abs() / s).to_f64() };
        max_relative = max_relative.max(r);
    };
    match spec.quantity {
        Quantity::Omega => {
            let text = spec.omega.as_deref().unwrap_or_default();
            let omega = S::from_rational(ctx, &crate::families::parse_rational(text)?);
            omega_f64 = Some(omega.to_f64());
            for n in spec.n_min..=spec.n_max {
                let (v, s) = omega_value(jac, &omega, n)?;
                rel(&v, &s);
                push(None, n, (v, s));
            }
        }
        q => {
            for m in spec.m_min..=spec.m_max {
                for n in spec.n_min..=spec.n_max {
                    let (v, s) = match q {
                        Quantity::Delta1 => delta_scaled(jac, 1, n, m)?,
                        Quantity::Delta2 => delta_scaled(jac, 2, n, m)?,
                        Quantity::Delta3 => delta_scaled(jac, 3, n, m)?,
                        _ => big_d_scaled(jac, m, n)?,
                    };
                    rel(&v, &s);
                    push(Some(m), n, (v, s));
                }
            }
        }
    }
    let max_absolute = samples.iter().map(|x| x.value.abs()).fold(0.0, f64::max);
    Ok(ObstructionGrid {
        quantity: spec.quantity,
        family: fam.clone(),
        omega: omega_f64,
        samples,
        max_relative,
        max_absolute,
    })
}

struct GridVisitor<'a> {
    fam: &'a ValidatedFamily,
    spec: &'a GridSpec,
}

impl PrecisionVisitor for GridVisitor<'_> {
    type Output = Result<ObstructionGrid>;

    fn visit<S: Real>(self, ctx: &S::Context, _: &PrecisionContext) -> Self::Output {
        obstruction_grid(&Jacobi::<S>::new(self.fam, ctx)?, self.fam, self.spec)
    }
}

/// [`obstruction_grid`] in the scalar type chosen by `precision`.
pub fn obstruction_grid_report(
    fam: &ValidatedFamily,
    spec: &GridSpec,
    precision: &PrecisionContext,
) -> Result<ObstructionGrid> {
    precision.dispatch(GridVisitor { fam, spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{FamilyId, FamilySpec};
    use crate::numerics::{MpContext, MpFloat, Rational};

    fn fam(id: FamilyId, lits: &[&str]) -> ValidatedFamily {
        FamilySpec::from_literals(id, lits).unwrap().validate().unwrap()
    }

    #[test]
    fn hermite_delta2() {
        let ctx = MpContext::with_decimal_digits(60);
        let j = Jacobi::<MpFloat>::new(&fam(FamilyId::H, &[]), &ctx).unwrap();
        let v = delta_j(&j, 2, 4, 1).unwrap().to_f64();
        assert!((v - 0.0033666245876316).abs() < 1e-15, "{v}");
    }

    #[test]
    fn linear_alpha_kills_delta2() {
        let j = Jacobi::<Rational>::new(&fam(FamilyId::L, &["0"]), &()).unwrap();
        for n in 2..12 {
            for m in 0..6 {
                assert!(delta_j(&j, 2, n, m).unwrap().is_zero());
                assert!(big_d(&j, m, n).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn determinant_expansion() {
        let r = [[2.0, 1.0, 3.0], [0.0, -1.0, 4.0], [5.0, 2.0, 1.0]];
        let (v, s) = det3(r);
        assert_eq!(v, 2.0 * (-1.0 - 8.0) - 1.0 * (0.0 - 20.0) + 3.0 * (0.0 + 5.0));
        assert_eq!(s, 3.0 * 4.0 * 5.0);
    }

    #[test]
    fn omega_on_polynomial_wilson() {
        let j = Jacobi::<Rational>::new(&fam(FamilyId::W, &["3/4", "3/4", "1/4", "1/4"]), &()).unwrap();
        let v = omega_test(&j, &Rational::new(1, 16), 40).unwrap();
        assert!(v.iter().all(Real::is_zero));
        let v = omega_test(&j, &Rational::new(1, 8), 5).unwrap();
        assert!(v.iter().all(|x| *x == Rational::new(1, 16)));
    }

    #[test]
    fn grid_checks() {
        let f = fam(FamilyId::C, &["1"]);
        let p = PrecisionContext::binary64();
        assert!(obstruction_grid_report(&f, &GridSpec::new(Quantity::D, (1, 3), (1, 5)), &p).is_err());
        assert!(obstruction_grid_report(&f, &GridSpec::new(Quantity::D, (3, 1), (2, 5)), &p).is_err());
        let g = obstruction_grid_report(&f, &GridSpec::new(Quantity::D, (1, 3), (2, 6)), &p).unwrap();
        assert_eq!(g.samples.len(), 15);
        assert!(!g.vanishes(1e-10));
        assert!("delta2".parse::<Quantity>().unwrap() == Quantity::Delta2);
        assert!("x".parse::<Quantity>().is_err());
    }
}
