//! Single-index recurrences that the commutation equations collapse to at
//! the special parameter points.

use crate::families::{FamilyId, ValidatedFamily};
use crate::numerics::Real;
use crate::Result;

/// `p(k) h_{k+1} + q(k) h_k + r(k) h_{k-1} = 0` with coefficients affine in `k`.
#[derive(Clone, Debug)]
pub struct IndexRecurrence<S> {
    base: [S; 3],
    slope: [S; 3],
    pub description: &'static str,
}

impl<S: Real> IndexRecurrence<S> {
    pub fn coefficients(&self, k: usize) -> [S; 3] {
        let ctx = self.base[0].context();
        let kk = S::from_i64(&ctx, k as i64);
        [0, 1, 2].map(|i| self.base[i].clone() + &(self.slope[i].clone() * &kk))
    }

    /// Residual at `k >= 1` and the largest of its three terms.
    pub fn residual(&self, h: &[S], k: usize) -> (S, S) {
        let [p, q, r] = self.coefficients(k);
        let t1 = p * &h[k + 1];
        let t2 = q * &h[k];
        let t3 = r * &h[k - 1];
        let scale = t1.abs().max_abs(&t2).max_abs(&t3);
        (t1 + &t2 + &t3, scale)
    }

    /// Maximal relative residual over `1 <= k < h.len() - 1`.
    pub fn max_relative(&self, h: &[S]) -> f64 {
        (1..h.len().saturating_sub(1))
            .map(|k| {
                let (r, s) = self.residual(h, k);
                if s.is_zero() {
                    0.0
                } else {
                    (r.abs() / &s).to_f64()
                }
            })
            .fold(0.0, f64::max)
    }
}

/// The reduced recurrence for a family, evaluated at its parameters. It is
/// only a consequence of commutation at the points where the commutant is
/// two-dimensional. Jacobi and Charlier have none.
pub fn single_index_recurrence<S: Real>(fam: &ValidatedFamily, ctx: &S::Context) -> Result<Option<IndexRecurrence<S>>> {
    let i = |v: i64| S::from_i64(ctx, v);
    let h = |n: i64, d: i64| S::ratio(ctx, n, d);
    let constant =
        |q: S, description| IndexRecurrence { base: [i(1), q, i(1)], slope: [i(0), i(0), i(0)], description };
    let p = fam.params();
    let rec = match fam.id() {
        FamilyId::W => {
            let s = p.iter().try_fold(i(0), |acc, x| Ok::<_, crate::Error>(acc + &x.to_real::<S>(ctx)?))?;
            IndexRecurrence {
                base: [s.clone(), (s.clone() - &i(1)) * &i(2), s - &i(2)],
                slope: [i(1), i(2), i(1)],
                description: "(k+s) h_{k+1} + 2(k+s-1) h_k + (k+s-2) h_{k-1} = 0",
            }
        }
        FamilyId::CdH | FamilyId::HilbertJt => {
            // J_t is the dual Hahn matrix at (1/2, 1/2, t - 1/2), so s = t + 1/2
            let s = if fam.id() == FamilyId::CdH {
                p.iter().try_fold(i(0), |acc, x| Ok::<_, crate::Error>(acc + &x.to_real::<S>(ctx)?))?
            } else {
                p[0].to_real::<S>(ctx)? + &h(1, 2)
            };
            IndexRecurrence {
                base: [s.clone() + &h(1, 2), s.clone() * &i(2) - &i(1), s - &h(3, 2)],
                slope: [i(1), i(2), i(1)],
                description: "(k+s+1/2) h_{k+1} + (2k+2s-1) h_k + (k+s-3/2) h_{k-1} = 0",
            }
        }
        FamilyId::MP => {
            let (_, cos) = p[1].sin_cos::<S>(ctx)?;
            constant(-(cos * &i(2)), "h_{k+1} - 2 cos(phi) h_k + h_{k-1} = 0")
        }
        FamilyId::M => {
            let root = p[0].to_real::<S>(ctx)?.sqrt()?;
            let q = root.clone() + &(S::one(ctx) / &root);
            constant(q, "h_{k+1} + (c^{-1/2} + c^{1/2}) h_k + h_{k-1} = 0")
        }
        FamilyId::L => constant(i(2), "h_{k+1} + 2 h_k + h_{k-1} = 0"),
        FamilyId::CH | FamilyId::H => constant(i(0), "h_{k+1} + h_{k-1} = 0"),
        FamilyId::J | FamilyId::C => return Ok(None),
    };
    Ok(Some(rec))
}
