//! The generalized Hilbert matrix `h~_k = (-1)^k / (k + t)` against `J_t`.

use serde::Serialize;

use super::{residual_grid, HankelSequence, JacobiTable, Origin};
use crate::families::{FamilyId, FamilySpec, Jacobi, ValidatedFamily};
use crate::numerics::{DenseMatrix, PrecisionContext, PrecisionVisitor, Real};
use crate::{Error, Result};

/// `h~_0..h~_last` for the family's `t`.
pub fn hilbert_sequence<S: Real>(fam: &ValidatedFamily, ctx: &S::Context, last: usize) -> Result<HankelSequence<S>> {
    if fam.id() != FamilyId::HilbertJt {
        return Err(Error::Invalid(format!("{} is not the Hilbert companion family", fam.spec())));
    }
    let t: S = fam.params()[0].to_real(ctx)?;
    let values = (0..=last as i64)
        .map(|k| {
            let sign = S::from_i64(ctx, if k % 2 == 0 { 1 } else { -1 });
            sign / &(S::from_i64(ctx, k) + &t)
        })
        .collect();
    HankelSequence::new(values, Origin::User)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertDemo {
    pub family: ValidatedFamily,
    pub precision: String,
    #[serde(rename = "K")]
    pub k: usize,
    /// `[J_t, H~_t]` on the `K x K` truncation, over `m, n <= K - 2`.
    pub commutator_max_relative: f64,
    pub commutator_max_absolute: f64,
    /// Order of the residual grid `0 <= m, n <= grid_order`.
    pub grid_order: usize,
    pub grid_max_relative: f64,
    pub grid_max_absolute: f64,
}

/// Interior entries of `J H - H J` for the leading `K x K` blocks, as
/// `(max relative, max absolute)`; each entry is scaled by its largest term.
pub fn interior_commutator<S: Real>(j: &DenseMatrix<S>, h: &DenseMatrix<S>) -> Result<(f64, f64)> {
    let k = j.rows();
    if k < 3 || h.rows() != k {
        return Err(Error::Range(format!("commutator of {k}x{k} and {}x{} blocks", h.rows(), h.rows())));
    }
    let (mut rel, mut abs) = (0.0f64, 0.0f64);
    for m in 0..=k - 2 {
        for n in 0..=k - 2 {
            let ctx = j.get(0, 0).context();
            let mut v = S::zero(&ctx);
            let mut scale = S::zero(&ctx);
            for i in m.saturating_sub(1)..=m + 1 {
                let term = j.get(m, i).clone() * h.get(i, n);
                scale = scale.max_abs(&term);
                v = v + &term;
            }
            for i in n.saturating_sub(1)..=n + 1 {
                let term = h.get(m, i).clone() * j.get(i, n);
                scale = scale.max_abs(&term);
                v = v - &term;
            }
            let a = v.abs().to_f64();
            abs = abs.max(a);
            if !scale.is_zero() {
                rel = rel.max((v.abs() / &scale).to_f64());
            }
        }
    }
    Ok((rel, abs))
}

pub fn hilbert_demo_compute<S: Real>(
    fam: &ValidatedFamily,
    ctx: &S::Context,
    k: usize,
    grid_order: usize,
) -> Result<HilbertDemo> {
    if k < 3 {
        return Err(Error::Invalid(format!("K = {k} is below 3")));
    }
    let jac = Jacobi::<S>::new(fam, ctx)?;
    let reach = (2 * grid_order + 1).max(2 * k);
    let table = JacobiTable::build(&jac, reach.max(k))?;
    let seq = hilbert_sequence::<S>(fam, ctx, reach)?;
    let (commutator_max_relative, commutator_max_absolute) = interior_commutator(&table.matrix(k)?, &seq.matrix(k)?)?;
    let grid = residual_grid(&table, &seq.values, grid_order)?;
    Ok(HilbertDemo {
        family: fam.clone(),
        precision: String::new(),
        k,
        commutator_max_relative,
        commutator_max_absolute,
        grid_order,
        grid_max_relative: grid.max_relative,
        grid_max_absolute: grid.max_absolute,
    })
}

/// Validates `t` and runs [`hilbert_demo_compute`] at the requested precision.
pub fn hilbert_demo(t: &str, k: usize, grid_order: usize, precision: &PrecisionContext) -> Result<HilbertDemo> {
    let fam = FamilySpec::from_literals(FamilyId::HilbertJt, &[t])?.validate()?;
    struct Run<'a> {
        fam: &'a ValidatedFamily,
        k: usize,
        grid_order: usize,
    }
    impl PrecisionVisitor for Run<'_> {
        type Output = Result<HilbertDemo>;
        fn visit<S: Real>(self, ctx: &S::Context, _: &PrecisionContext) -> Self::Output {
            hilbert_demo_compute::<S>(self.fam, ctx, self.k, self.grid_order)
        }
    }
    let mut out = precision.dispatch(Run { fam: &fam, k, grid_order })?;
    out.precision = precision.mode.to_string();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    #[test]
    fn exact_commutation_for_integer_t() {
        let fam = FamilySpec::from_literals(FamilyId::HilbertJt, &["2"]).unwrap().validate().unwrap();
        let d = hilbert_demo_compute::<Rational>(&fam, &(), 12, 12).unwrap();
        assert_eq!(d.commutator_max_absolute, 0.0);
        assert_eq!(d.grid_max_absolute, 0.0);
    }

    #[test]
    fn truncation_boundary_is_excluded() {
        // The last row of the truncated product misses alpha_{K-1} h_{K+n}.
        let fam = FamilySpec::from_literals(FamilyId::HilbertJt, &["1"]).unwrap().validate().unwrap();
        let jac = Jacobi::<f64>::new(&fam, &()).unwrap();
        let table = JacobiTable::build(&jac, 20).unwrap();
        let seq = hilbert_sequence::<f64>(&fam, &(), 20).unwrap();
        let (rel, _) = interior_commutator(&table.matrix(8).unwrap(), &seq.matrix(8).unwrap()).unwrap();
        assert!(rel < 1e-14);
    }

    #[test]
    fn negative_integer_t_rejected() {
        let e = hilbert_demo("-2", 16, 16, &PrecisionContext::binary64()).unwrap_err();
        assert!(e.is_input_error(), "{e}");
    }
}
