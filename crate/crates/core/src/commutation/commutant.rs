//! Numerical Hankel commutant with two independent solvers.

use serde::Serialize;

use super::nullspace::{numeric_nullspace, Nullspace};
use super::{descend_extend, max_relative_residual, normalize, HankelSequence, JacobiTable, Origin};
use crate::families::{theorem_prediction, Jacobi, TheoremPrediction, ValidatedFamily};
use crate::numerics::linalg::{dot, solve};
use crate::numerics::{DenseMatrix, PrecisionContext, PrecisionMode, PrecisionVisitor, Real};
use crate::{Error, Result};

pub const MIN_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    Agrees,
    Disagrees,
    OutsideDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedOutcome {
    pub seed: [i64; 2],
    pub accepted: bool,
    /// Absent when the extension hit a pivot failure.
    pub max_relative_residual: Option<f64>,
    pub pivot_failure: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct Commutant<S> {
    pub family: ValidatedFamily,
    pub k: usize,
    pub tolerance: f64,
    /// Accepted recurrence solutions `h_0..h_{2K+1}`, normalized.
    pub basis: Vec<HankelSequence<S>>,
    pub basis_residuals: Vec<f64>,
    pub seeds: Vec<SeedOutcome>,
    pub nullspace: Nullspace<S>,
    /// One entry per nullspace vector, see [`reextension_error`].
    pub reextension_errors: Vec<f64>,
    pub prediction: TheoremPrediction,
    pub subspace_angle: Option<f64>,
}

impl<S: Real> Commutant<S> {
    pub fn measured_dim(&self) -> usize {
        self.basis.len()
    }

    /// The two solvers disagree on the dimension.
    pub fn instability(&self) -> bool {
        self.nullspace.dim != self.basis.len()
    }

    pub fn agreement(&self) -> Agreement {
        if !self.prediction.in_stated_domain {
            Agreement::OutsideDomain
        } else if self.prediction.dim == self.measured_dim() {
            Agreement::Agrees
        } else {
            Agreement::Disagrees
        }
    }
}

/// Largest relative deviation between `v` and its re-extension from
/// `(v_0, v_1)` through the descend recurrence. Entries below
/// `sqrt(u) * max|v|` are compared against that floor instead.
pub fn reextension_error<S: Real>(t: &JacobiTable<S>, v: &[S], pivot_tol: f64) -> Result<f64> {
    let last = v.len() - 1;
    let e = descend_extend(t, v[0].clone(), v[1].clone(), last, pivot_tol)?;
    let ctx = v[0].context();
    let vmax = v.iter().fold(S::zero(&ctx), |m, x| m.max_abs(x));
    let floor = if S::EXACT { S::zero(&ctx) } else { vmax * &S::from_f64(&ctx, S::unit_roundoff(&ctx).sqrt()) };
    let mut worst = 0.0f64;
    for (a, b) in e.iter().zip(v) {
        let d = (a.clone() - b).abs();
        if d.is_zero() {
            continue;
        }
        let denom = b.abs().max_abs(&floor);
        worst = worst.max(if denom.is_zero() { f64::INFINITY } else { (d / &denom).to_f64() });
    }
    Ok(worst)
}

fn unit_columns<S: Real>(vs: &[Vec<S>]) -> Vec<Vec<S>> {
    vs.iter()
        .map(|v| {
            let mut v = v.clone();
            normalize(&mut v);
            v
        })
        .collect()
}

/// Largest principal angle between `span(a)` and `span(b)` for subspaces of
/// dimension one or two. Uses Gram matrices only, so it works in exact
/// arithmetic; the final square root is taken in binary64.
pub fn subspace_angle_generic<S: Real>(a: &[Vec<S>], b: &[Vec<S>]) -> Result<f64> {
    let d = b.len();
    if a.is_empty() || d == 0 || d > 2 || a.len() != d {
        return Err(Error::Invalid(format!("subspace angle between dimensions {} and {d}", a.len())));
    }
    let a = unit_columns(a);
    let b = unit_columns(b);
    let ctx = a[0][0].context();
    let gram = |x: &[Vec<S>], y: &[Vec<S>]| -> Result<DenseMatrix<S>> {
        DenseMatrix::from_rows(x.iter().map(|u| y.iter().map(|v| dot(u, v)).collect()).collect())
    };
    let aa = gram(&a, &a)?;
    let ab = gram(&a, &b)?;
    let bb = gram(&b, &b)?;
    // m = B^T (I - P_A) B with P_A = A (A^T A)^{-1} A^T
    let mut m = bb.clone();
    let cols: Vec<Vec<S>> = (0..d)
        .map(|j| solve(aa.clone(), (0..a.len()).map(|i| ab.get(i, j).clone()).collect()))
        .collect::<Result<_>>()?;
    for i in 0..d {
        for j in 0..d {
            let proj = (0..a.len()).fold(S::zero(&ctx), |acc, l| acc + &(ab.get(l, i).clone() * &cols[j][l]));
            m.set(i, j, m.get(i, j).clone() - &proj);
        }
    }
    let f = |x: &DenseMatrix<S>, i, j| x.get(i, j).to_f64();
    let lambda = if d == 1 {
        f(&m, 0, 0) / f(&bb, 0, 0)
    } else {
        // largest root of det(M - lambda G) with G = B^T B
        let (g11, g12, g22) = (f(&bb, 0, 0), f(&bb, 0, 1), f(&bb, 1, 1));
        let (m11, m12, m22) = (f(&m, 0, 0), f(&m, 0, 1), f(&m, 1, 1));
        let qa = g11 * g22 - g12 * g12;
        let qb = -(m11 * g22 + m22 * g11 - 2.0 * m12 * g12);
        let qc = m11 * m22 - m12 * m12;
        if qa <= 0.0 {
            return Err(Error::NearSingular("subspace basis is rank deficient".into()));
        }
        (-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa)
    };
    Ok(lambda.clamp(0.0, 1.0).sqrt().asin())
}

/// Commutant of the Jacobi matrix `j` truncated at order `k`.
///
/// Seeds `(1,0)` and `(0,1)` are extended to `h_0..h_{2K+1}` and accepted
/// when the residual over `0 <= m < n <= K` is below `tol`. The nullspace
/// of the full system provides the cross-check.
pub fn commutant_compute<S: Real>(j: &Jacobi<S>, fam: &ValidatedFamily, k: usize, tol: f64) -> Result<Commutant<S>> {
    if k < MIN_ORDER {
        return Err(Error::Range(format!("commutant needs K >= {MIN_ORDER}, got {k}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let ctx = j.context().clone();
    let last = 2 * k + 1;
    let t = JacobiTable::build(j, last)?;
    let pivot_tol = 1e3 * S::unit_roundoff(&ctx);

    let mut seeds = Vec::new();
    let mut basis = Vec::new();
    let mut basis_residuals = Vec::new();
    for seed in [[1i64, 0], [0, 1]] {
        let h = descend_extend(&t, S::from_i64(&ctx, seed[0]), S::from_i64(&ctx, seed[1]), last, pivot_tol);
        match h {
            Ok(h) => {
                let r = max_relative_residual(&t, &h, k)?;
                let accepted = r <= tol;
                seeds.push(SeedOutcome { seed, accepted, max_relative_residual: Some(r), pivot_failure: None });
                if accepted {
                    basis.push(HankelSequence::new(h, Origin::Recurrence { seed })?.normalized());
                    basis_residuals.push(r);
                }
            }
            Err(Error::Pivot(n)) => {
                seeds.push(SeedOutcome { seed, accepted: false, max_relative_residual: None, pivot_failure: Some(n) });
            }
            Err(e) => return Err(e),
        }
    }

    let nullspace = numeric_nullspace(&t, k, tol)?;
    let reextension_errors =
        nullspace.vectors.iter().map(|v| reextension_error(&t, v, pivot_tol).unwrap_or(f64::INFINITY)).collect();

    let prediction = theorem_prediction(fam);
    let subspace_angle = match &prediction.basis {
        Some(cf) if prediction.dim == 2 && basis.len() == 2 => {
            let len = 2 * k + 1;
            let numeric: Vec<Vec<S>> = basis.iter().map(|h| h.values[..len].to_vec()).collect();
            match cf.materialize::<S>(&ctx, len) {
                Ok((h1, h2)) => Some(subspace_angle_generic(&numeric, &[h1, h2])?),
                // closed forms such as sin(k pi/3) have no exact rational values
                Err(Error::Irrational(_) | Error::NotExact(_)) => {
                    let (h1, h2) = cf.materialize::<f64>(&(), len)?;
                    let numeric: Vec<Vec<f64>> = numeric.iter().map(|v| v.iter().map(Real::to_f64).collect()).collect();
                    Some(subspace_angle_generic(&numeric, &[h1, h2])?)
                }
                Err(e) => return Err(e),
            }
        }
        _ => None,
    };

    Ok(Commutant {
        family: fam.clone(),
        k,
        tolerance: tol,
        basis,
        basis_residuals,
        seeds,
        nullspace,
        reextension_errors,
        prediction,
        subspace_angle,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisRecord {
    pub origin: Origin,
    pub values: Vec<f64>,
    pub max_relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullspaceSummary {
    pub dim: usize,
    pub method: String,
    /// Largest `sigma / sigma_max` counted as null.
    pub largest_null_sigma: Option<f64>,
    /// Smallest `sigma / sigma_max` above the threshold.
    pub smallest_nonnull_sigma: Option<f64>,
    /// Smallest `sigma / sigma_max` overall; absent in exact mode.
    pub smallest_sigma: Option<f64>,
    pub reextension_errors: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutantReport {
    pub family: ValidatedFamily,
    pub precision: PrecisionMode,
    #[serde(rename = "K")]
    pub k: usize,
    pub tolerance: f64,
    pub measured_dim: usize,
    pub basis: Vec<BasisRecord>,
    /// Worst residual among basis members; absent for a trivial commutant.
    pub max_relative_residual: Option<f64>,
    pub seeds: Vec<SeedOutcome>,
    pub nullspace: NullspaceSummary,
    pub instability: bool,
    pub prediction: TheoremPrediction,
    pub subspace_angle: Option<f64>,
    pub agreement: Agreement,
}

impl CommutantReport {
    pub fn from_commutant<S: Real>(c: &Commutant<S>, precision: PrecisionMode) -> Self {
        let sig = &c.nullspace.relative_sigma;
        let split = sig.len().saturating_sub(c.nullspace.dim);
        CommutantReport {
            family: c.family.clone(),
            precision,
            k: c.k,
            tolerance: c.tolerance,
            measured_dim: c.measured_dim(),
            basis: c
                .basis
                .iter()
                .zip(&c.basis_residuals)
                .map(|(h, &r)| BasisRecord { origin: h.origin.clone(), values: h.to_f64(), max_relative_residual: r })
                .collect(),
            max_relative_residual: c.basis_residuals.iter().copied().reduce(f64::max),
            seeds: c.seeds.clone(),
            nullspace: NullspaceSummary {
                dim: c.nullspace.dim,
                method: c.nullspace.method.to_string(),
                largest_null_sigma: sig.get(split).copied(),
                smallest_nonnull_sigma: split.checked_sub(1).and_then(|i| sig.get(i)).copied(),
                smallest_sigma: sig.last().copied(),
                reextension_errors: c.reextension_errors.clone(),
            },
            instability: c.instability(),
            prediction: c.prediction.clone(),
            subspace_angle: c.subspace_angle,
            agreement: c.agreement(),
        }
    }
}

struct ReportVisitor<'a> {
    fam: &'a ValidatedFamily,
    k: usize,
    tol: Option<f64>,
}

impl PrecisionVisitor for ReportVisitor<'_> {
    type Output = Result<CommutantReport>;

    fn visit<S: Real>(self, ctx: &S::Context, precision: &PrecisionContext) -> Self::Output {
        let j = Jacobi::<S>::new(self.fam, ctx)?;
        let tol = self.tol.unwrap_or(precision.default_tolerance);
        let c = commutant_compute(&j, self.fam, self.k, tol)?;
        Ok(CommutantReport::from_commutant(&c, precision.mode))
    }
}

/// [`commutant_compute`] in the scalar type chosen by `precision`, with the
/// context's default tolerance unless `tol` is given.
pub fn commutant_report(
    fam: &ValidatedFamily,
    k: usize,
    tol: Option<f64>,
    precision: &PrecisionContext,
) -> Result<CommutantReport> {
    precision.dispatch(ReportVisitor { fam, k, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{FamilyId, FamilySpec};
    use crate::numerics::{MpContext, MpFloat, Rational};

    fn fam(id: FamilyId, lits: &[&str]) -> ValidatedFamily {
        FamilySpec::from_literals(id, lits).unwrap().validate().unwrap()
    }

    fn run(id: FamilyId, lits: &[&str]) -> Commutant<MpFloat> {
        let ctx = MpContext::with_decimal_digits(60);
        let f = fam(id, lits);
        commutant_compute(&Jacobi::new(&f, &ctx).unwrap(), &f, 32, 1e-10).unwrap()
    }

    #[test]
    fn laguerre_two_dimensional() {
        let c = run(FamilyId::L, &["0"]);
        assert_eq!(c.measured_dim(), 2);
        assert!(!c.instability());
        assert_eq!(c.agreement(), Agreement::Agrees);
        assert!(c.subspace_angle.unwrap() < 1e-30);
        assert!(c.reextension_errors.iter().all(|&e| e < 1e-20));
    }

    #[test]
    fn meixner_geometric_basis() {
        let c = run(FamilyId::M, &["1/2", "1"]);
        assert_eq!(c.measured_dim(), 2);
        assert!(c.subspace_angle.unwrap() < 1e-8, "{:?}", c.subspace_angle);
        let c = run(FamilyId::M, &["1/2", "2"]);
        assert_eq!(c.measured_dim(), 0);
        assert_eq!(c.nullspace.dim, 0);
    }

    #[test]
    fn hermite_measured_trivial() {
        let c = run(FamilyId::H, &[]);
        assert_eq!(c.measured_dim(), 0);
        assert_eq!(c.agreement(), Agreement::Disagrees);
        assert!(!c.instability());
    }

    #[test]
    fn exact_wilson() {
        let f = fam(FamilyId::W, &["3/4", "3/4", "1/4", "1/4"]);
        let c = commutant_compute(&Jacobi::<Rational>::new(&f, &()).unwrap(), &f, 10, 1e-10).unwrap();
        assert_eq!(c.measured_dim(), 2);
        assert_eq!(c.nullspace.dim, 2);
        assert_eq!(c.subspace_angle, Some(0.0));
    }

    #[test]
    fn order_and_tolerance_checked() {
        let f = fam(FamilyId::L, &["0"]);
        let j = Jacobi::<f64>::new(&f, &()).unwrap();
        assert!(matches!(commutant_compute(&j, &f, 7, 1e-8), Err(Error::Range(_))));
        assert!(commutant_compute(&j, &f, 8, 0.0).is_err());
    }

    #[test]
    fn angle_of_known_planes() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let b = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]];
        let th = subspace_angle_generic(&a, &b).unwrap();
        assert!((th - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(subspace_angle_generic(&a, &a).unwrap() < 1e-8);
    }
}
