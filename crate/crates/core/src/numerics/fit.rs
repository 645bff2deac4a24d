//! Least-squares fits of asymptotic expansions and power laws.

use serde::Serialize;

use super::linalg::{least_squares, DenseMatrix};
use super::Real;
use crate::{Error, Result};

/// Coefficients of `f(n) ~ sum_i c_i n^{p_i}` fitted on a geometric grid.
#[derive(Clone, Debug)]
pub struct AsymptoticFit<S> {
    pub powers: Vec<i32>,
    pub coefficients: Vec<S>,
    /// Maximum relative deviation of the fit over the sample points.
    pub residual_norm: S,
    pub sample_points: Vec<S>,
}

impl<S: Real> AsymptoticFit<S> {
    pub fn coefficient(&self, power: i32) -> Option<&S> {
        self.powers.iter().position(|&p| p == power).map(|i| &self.coefficients[i])
    }

    pub fn to_record(&self) -> FitRecord {
        FitRecord {
            powers: self.powers.clone(),
            coefficients: self.coefficients.iter().map(Real::to_f64).collect(),
            residual_norm: self.residual_norm.to_f64(),
            n_min: self.sample_points.first().map_or(0.0, Real::to_f64),
            n_max: self.sample_points.last().map_or(0.0, Real::to_f64),
            count: self.sample_points.len(),
        }
    }
}

/// Serializable summary of an [`AsymptoticFit`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitRecord {
    pub powers: Vec<i32>,
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub n_min: f64,
    pub n_max: f64,
    pub count: usize,
}

/// `count` points `n_min * r^k` spanning `[n_min, n_max]`.
pub fn geometric_grid(n_min: f64, n_max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![n_min];
    }
    let r = (n_max / n_min).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| if k + 1 == count { n_max } else { n_min * r.powi(k as i32) }).collect()
}

pub fn fit_asymptotic<S, F>(
    ctx: &S::Context,
    f: F,
    powers: &[i32],
    n_min: f64,
    n_max: f64,
    count: usize,
) -> Result<AsymptoticFit<S>>
where
    S: Real,
    F: Fn(&S) -> Result<S>,
{
    if powers.is_empty() {
        return Err(Error::DegenerateFit("no powers requested".into()));
    }
    if !(n_min >= 1.0 && n_max > n_min) {
        return Err(Error::DegenerateFit(format!("need 1 <= n_min < n_max, got [{n_min}, {n_max}]")));
    }
    if count < powers.len() + 2 {
        return Err(Error::DegenerateFit(format!(
            "{count} samples cannot determine {} coefficients with a residual",
            powers.len()
        )));
    }
    let points: Vec<S> = geometric_grid(n_min, n_max, count).into_iter().map(|x| S::from_f64(ctx, x)).collect();
    let values = points.iter().map(&f).collect::<Result<Vec<S>>>()?;
    let rows = points.iter().map(|x| powers.iter().map(|&p| x.powi(p)).collect()).collect();
    let design = DenseMatrix::from_rows(rows)?;
    let coefficients = least_squares(&design, &values)?;
    let fitted = design.mul_vec(&coefficients);
    let mut residual = S::zero(ctx);
    for (y, yhat) in values.iter().zip(&fitted) {
        let dev = (y.clone() - yhat).abs();
        let rel = if y.is_zero() { dev } else { dev / &y.abs() };
        residual = residual.max_abs(&rel);
    }
    Ok(AsymptoticFit { powers: powers.to_vec(), coefficients, residual_norm: residual, sample_points: points })
}

/// Fit of `y_m ~ C m^p (1 + c_1/m + ... + c_j/m^j)` in log space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// The constant `C` (sign restored from the data).
    pub coefficient: f64,
    pub corrections: usize,
    pub residual_norm: f64,
}

/// Fits `log|y| = p log m + c0 + c1/m + ... + c_j/m^j`.
///
/// Plain log-log regression is biased by the `1/m` corrections every
/// obstruction sequence carries; the extra terms absorb them. All `y` must
/// share one sign.
pub fn fit_power_law(ms: &[f64], ys: &[f64], corrections: usize) -> Result<PowerLawFit> {
    let k = corrections + 2;
    if ms.len() != ys.len() || ms.len() < k + 1 {
        return Err(Error::DegenerateFit(format!("{} samples for {k} power-law parameters", ms.len())));
    }
    let sign = ys[0].signum();
    if sign == 0.0 || ys.iter().any(|y| y.signum() != sign) {
        return Err(Error::DegenerateFit("power-law data changes sign or vanishes".into()));
    }
    let rows = ms
        .iter()
        .map(|&m| {
            let mut row = vec![m.ln(), 1.0];
            row.extend((1..=corrections).map(|j| m.powi(-(j as i32))));
            row
        })
        .collect();
    let design = DenseMatrix::from_rows(rows)?;
    let logs: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let sol = least_squares(&design, &logs)?;
    let fitted = design.mul_vec(&sol);
    let residual_norm = logs.iter().zip(&fitted).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(PowerLawFit { exponent: sol[0], coefficient: sign * sol[1].exp(), corrections, residual_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{MpContext, MpFloat, Rational};

    #[test]
    fn exact_polynomial_fit_in_binary64() {
        let fit = fit_asymptotic::<f64, _>(&(), |x| Ok(x * x), &[2, 1, 0], 1.0, 1e3, 12).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(fit.coefficients[1].abs() < 1e-9);
        assert!(fit.coefficients[2].abs() < 1e-7);
        assert!(fit.residual_norm < 1e-10);
    }

    #[test]
    fn expansion_with_inverse_powers_in_software_precision() {
        let ctx = MpContext::with_decimal_digits(60);
        let f = |x: &MpFloat| {
            let c = x.context();
            Ok(MpFloat::ratio(&c, 1, 4) * &x.square() + &MpFloat::ratio(&c, 5, 2) + &(MpFloat::from_i64(&c, 3) / x))
        };
        let fit = fit_asymptotic(&ctx, f, &[2, 0, -1], 10.0, 1e5, 20).unwrap();
        assert!((fit.coefficients[0].to_f64() - 0.25).abs() < 1e-40);
        assert!((fit.coefficients[1].to_f64() - 2.5).abs() < 1e-35);
        assert!((fit.coefficients[2].to_f64() - 3.0).abs() < 1e-30);
        assert_eq!(fit.coefficient(0).unwrap().to_f64(), fit.coefficients[1].to_f64());
    }

    #[test]
    fn exact_fit_is_exact() {
        let f = |x: &Rational| Ok(x.clone() * x - &Rational::new(1, 3));
        let fit = fit_asymptotic(&(), f, &[2, 1, 0], 1.0, 100.0, 6).unwrap();
        assert_eq!(fit.coefficients, vec![Rational::new(1, 1), Rational::new(0, 1), Rational::new(-1, 3)]);
        assert!(fit.residual_norm.is_zero());
    }

    #[test]
    fn too_few_samples() {
        let r = fit_asymptotic::<f64, _>(&(), |x| Ok(*x), &[1, 0], 1.0, 10.0, 3);
        assert!(matches!(r, Err(Error::DegenerateFit(_))));
        let r = fit_asymptotic::<f64, _>(&(), |x| Ok(*x), &[1, 0], 5.0, 5.0, 8);
        assert!(r.is_err());
    }

    #[test]
    fn power_law_with_corrections() {
        let ms: Vec<f64> = (4..=64).step_by(4).map(f64::from).collect();
        let ys: Vec<f64> = ms.iter().map(|m| -0.5 * m.powi(-6) * (1.0 + 3.0 / m)).collect();
        let fit = fit_power_law(&ms, &ys, 3).unwrap();
        assert!((fit.exponent + 6.0).abs() < 1e-3);
        assert!((fit.coefficient + 0.5).abs() < 1e-2);
        let bad = fit_power_law(&[1.0, 2.0, 3.0, 4.0], &[1.0, -1.0, 1.0, 1.0], 1);
        assert!(bad.is_err());
    }

    #[test]
    fn grid_endpoints() {
        let g = geometric_grid(10.0, 1000.0, 3);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[2], 1000.0);
        assert!((g[1] - 100.0).abs() < 1e-9);
    }
}
