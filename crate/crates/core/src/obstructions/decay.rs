//! Decay in `m` of the leading `n` coefficient of the obstruction determinants.
//!
//! For the families below `lim_n D(m,n)/n` (or `lim_n delta_2(n,m)/n` when
//! `beta_n = 0`) behaves like `C m^p` with a closed-form `C`, and vanishes
//! identically exactly on the dimension-two parameter sets.

use serde::Serialize;

use super::{big_d, delta_j, Quantity};
use crate::families::{FamilyId, Jacobi, ValidatedFamily};
use crate::numerics::fit::{fit_power_law, PowerLawFit};
use crate::numerics::limit::{limit_estimate, LimitOptions};
use crate::numerics::linalg::{least_squares, DenseMatrix};
use crate::numerics::Real;
use crate::{Error, Result};

pub const DEFAULT_DECAY_MS: [i64; 10] = [4, 5, 6, 8, 11, 16, 22, 32, 45, 64];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayPrediction {
    pub quantity: Quantity,
    pub exponent: i32,
    pub coefficient: f64,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayStudy {
    pub description: String,
    pub ms: Vec<i64>,
    pub values: Vec<f64>,
    /// Richardson error estimate per `m`; zero for directly evaluated values.
    pub errors: Vec<f64>,
    /// `None` when the values vanish or change sign.
    pub power_law: Option<PowerLawFit>,
    /// `k_0` of `m^{-p} y_m = k_0 + k_1/m + k_2/m^2 + k_3/m^3` with the predicted `p`.
    pub fitted_coefficient: f64,
    pub prediction: DecayPrediction,
}

fn prediction(fam: &ValidatedFamily) -> Result<(DecayPrediction, f64)> {
    let p = fam.params();
    let r = |i: usize| p[i].re_f64();
    let (quantity, exponent, coefficient, formula, decay_step) = match fam.id() {
        FamilyId::C => (Quantity::D, -3, r(0) / 8.0, "a/(8 m^3)", 0.5),
        FamilyId::L => (Quantity::D, -6, r(0).powi(4) / 16.0, "alpha^4/(16 m^6)", 1.0),
        FamilyId::M => {
            let (c, b) = (r(0), r(1));
            (
                Quantity::D,
                -6,
                c * (c + 1.0) * (1.0 - b).powi(4) / (32.0 * (1.0 - c).powi(3)),
                "c(c+1)(1-beta)^4/(32(1-c)^3 m^6)",
                1.0,
            )
        }
        FamilyId::MP => {
            let lam = r(0);
            let (sin, cos) = p[1].sin_cos::<f64>(&())?;
            if cos == 0.0 {
                (Quantity::Delta2, -3, (1.0 - 2.0 * lam).powi(2) / 16.0, "(1-2 lambda)^2/(16 m^3)", 1.0)
            } else {
                let c = cos / (4.0 * sin.powi(3)) * -(1.0 - 2.0 * lam).powi(4) / 32.0;
                (Quantity::D, -6, c, "cos(phi)/(4 sin^3 phi) * -(1-2 lambda)^4/(32 m^6)", 1.0)
            }
        }
        other => {
            return Err(Error::Invalid(format!(
                "no obstruction decay law is implemented for {} (expected MP, M, L or C)",
                other.name()
            )))
        }
    };
    Ok((DecayPrediction { quantity, exponent, coefficient, formula: formula.into() }, decay_step))
}

fn coefficient_fit(ms: &[i64], ys: &[f64], exponent: i32) -> Result<f64> {
    let scaled: Vec<f64> = ms.iter().zip(ys).map(|(&m, y)| y * (m as f64).powi(-exponent)).collect();
    let rows = ms.iter().map(|&m| (0..4).map(|k| (m as f64).powi(-k)).collect()).collect();
    Ok(least_squares(&DenseMatrix::from_rows(rows)?, &scaled)?[0])
}

fn finish(
    description: String,
    ms: &[i64],
    values: Vec<f64>,
    errors: Vec<f64>,
    prediction: DecayPrediction,
) -> Result<DecayStudy> {
    let power_law = fit_power_law(&ms.iter().map(|&m| m as f64).collect::<Vec<_>>(), &values, 2).ok();
    let fitted_coefficient = coefficient_fit(ms, &values, prediction.exponent)?;
    Ok(DecayStudy { description, ms: ms.to_vec(), values, errors, power_law, fitted_coefficient, prediction })
}

/// `lim_n D(m,n)/n` (or `delta_2` for `beta = 0`) for each `m` by Richardson
/// extrapolation, then fitted against the family's decay law.
pub fn decay_study<S: Real>(jac: &Jacobi<S>, fam: &ValidatedFamily, ms: &[i64]) -> Result<DecayStudy> {
    let (pred, decay_step) = prediction(fam)?;
    if ms.len() < 5 || ms.iter().any(|&m| m < 1) {
        return Err(Error::Invalid("a decay study needs at least five m >= 1".into()));
    }
    let ctx = jac.context().clone();
    let opts = if decay_step < 1.0 {
        LimitOptions { start: 100.0, ratio: 4.0, levels: 9, decay_step, tolerance: 1e-30 }
    } else {
        LimitOptions { start: 64.0, ratio: 2.0, levels: 10, decay_step, tolerance: 1e-30 }
    };
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for &m in ms {
        let est = limit_estimate(
            &ctx,
            |n: &S| {
                let n = n.to_f64().round() as i64;
                match pred.quantity {
                    Quantity::Delta2 => delta_j(jac, 2, n, m),
                    _ => big_d(jac, m, n),
                }
            },
            1,
            &opts,
        )?;
        values.push(est.value.to_f64());
        errors.push(est.error_estimate);
    }
    let what = if pred.quantity == Quantity::Delta2 { "lim_n delta_2(n,m)/n" } else { "lim_n D(m,n)/n" };
    finish(format!("{what} for {}", fam.spec()), ms, values, errors, pred)
}

/// The bracket `[...]` of the Meixner-Pollaczek leading coefficient, built
/// from `a~_n = sqrt((n+1)(n+2 lambda))`:
/// `(a~_{m+1}-a~_m)^2 - (a~_{m+2}-a~_{m+1})(a~_m-a~_{m-1}) + a~_{m+2} - 3a~_{m+1} + 3a~_m - a~_{m-1}`.
pub fn mp_bracket<S: Real>(ctx: &S::Context, lambda: &S, m: i64) -> Result<S> {
    if m < 0 {
        return Err(Error::Range(format!("bracket at m = {m}")));
    }
    let two_lambda = lambda.clone() * &S::from_i64(ctx, 2);
    let at = |n: i64| -> Result<S> {
        if n == -1 {
            return Ok(S::zero(ctx));
        }
        (S::from_i64(ctx, n + 1) * &(S::from_i64(ctx, n) + &two_lambda)).sqrt()
    };
    let (a0, a1, a2, am) = (at(m)?, at(m + 1)?, at(m + 2)?, at(m - 1)?);
    let three = S::from_i64(ctx, 3);
    Ok((a1.clone() - &a0).square() - &((a2.clone() - &a1) * &(a0.clone() - &am)) + &a2 - &(three.clone() * &a1)
        + &(three * &a0)
        - &am)
}

/// [`mp_bracket`] over `ms`, fitted against `-(1-2 lambda)^4/(32 m^6)`.
pub fn mp_bracket_study<S: Real>(ctx: &S::Context, lambda: &S, ms: &[i64]) -> Result<DecayStudy> {
    let values = ms.iter().map(|&m| Ok(mp_bracket(ctx, lambda, m)?.to_f64())).collect::<Result<Vec<_>>>()?;
    let lam = lambda.to_f64();
    let pred = DecayPrediction {
        quantity: Quantity::D,
        exponent: -6,
        coefficient: -(1.0 - 2.0 * lam).powi(4) / 32.0,
        formula: "-(1-2 lambda)^4/(32 m^6)".into(),
    };
    finish(format!("Meixner-Pollaczek bracket, lambda = {lam}"), ms, values, vec![0.0; ms.len()], pred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::numerics::{MpContext, MpFloat};

    fn fam(id: FamilyId, lits: &[&str]) -> ValidatedFamily {
        FamilySpec::from_literals(id, lits).unwrap().validate().unwrap()
    }

    #[test]
    fn charlier_cubic_decay() {
        let ctx = MpContext::with_decimal_digits(60);
        let f = fam(FamilyId::C, &["1"]);
        let s = decay_study(&Jacobi::<MpFloat>::new(&f, &ctx).unwrap(), &f, &DEFAULT_DECAY_MS).unwrap();
        // lim D(4,n)/n from a 60-digit reference evaluation
        assert!((s.values[0] - 7.82221588452e-4).abs() < 1e-12, "{}", s.values[0]);
        let pl = s.power_law.unwrap();
        assert!((pl.exponent + 3.0).abs() < 0.1, "{pl:?}");
        assert!((s.fitted_coefficient - 0.125).abs() < 0.05 * 0.125, "{}", s.fitted_coefficient);
    }

    #[test]
    fn bracket_sixth_power() {
        let ctx = MpContext::with_decimal_digits(60);
        let s = mp_bracket_study(&ctx, &MpFloat::one(&ctx), &DEFAULT_DECAY_MS).unwrap();
        let pl = s.power_law.unwrap();
        assert!((pl.exponent + 6.0).abs() < 0.2, "{pl:?}");
        assert!(pl.coefficient < 0.0);
        let half = MpFloat::ratio(&ctx, 1, 2);
        assert!(mp_bracket(&ctx, &half, 7).unwrap().to_f64().abs() < 1e-50);
    }

    #[test]
    fn leading_coefficient_matches_bracket() {
        // lim D/n = cos(phi)/(4 sin^3 phi) * bracket
        let ctx = MpContext::with_decimal_digits(60);
        let f = fam(FamilyId::MP, &["1", "pi/3"]);
        let ms = [3, 4, 6, 9, 12];
        let s = decay_study(&Jacobi::<MpFloat>::new(&f, &ctx).unwrap(), &f, &ms).unwrap();
        let (sin, cos) = (3f64.sqrt() / 2.0, 0.5);
        for (i, &m) in ms.iter().enumerate() {
            let b = mp_bracket(&ctx, &MpFloat::one(&ctx), m).unwrap().to_f64();
            let want = cos / (4.0 * sin.powi(3)) * b;
            assert!((s.values[i] - want).abs() < 1e-9 * want.abs(), "m={m}: {} vs {want}", s.values[i]);
        }
    }
}
