//! Nullspace of the full commutation system, independent of the recurrence.
//!
//! The equations `r(m,n) = 0` for `0 <= m < n <= K` are linear in
//! `h_0..h_{2K}` and each touches only three consecutive unknowns. Feeding
//! the rows (sorted by `m+n`) through Givens rotations keeps the triangular
//! factor `R` banded with two superdiagonals, so the reduction is cheap.
//! The dimension is read off the singular values of `R`; null vectors come
//! from a few steps of inverse subspace iteration with `R^T R`.

use super::JacobiTable;
use crate::numerics::linalg::{rref_nullspace, singular_values};
use crate::numerics::{DenseMatrix, Real};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Nullspace<S> {
    pub dim: usize,
    /// Orthonormal basis vectors over the observed unknowns, normally
    /// `h_0..h_{2K}` (unnormalized in exact mode).
    pub vectors: Vec<Vec<S>>,
    pub sigma_max: f64,
    /// `sigma_i / sigma_max`, descending; empty in exact mode.
    pub relative_sigma: Vec<f64>,
    pub method: &'static str,
}

/// Equation `(m,n)` as coefficients of `h_{k-1}, h_k, h_{k+1}`, scaled to
/// unit maximum; `None` for an identically zero row.
fn equation<S: Real>(t: &JacobiTable<S>, m: usize, n: usize) -> Option<[S; 3]> {
    let (mi, ni) = (m as i64, n as i64);
    let row =
        [t.alpha(ni - 1).clone() - t.alpha(mi - 1), t.beta(n).clone() - t.beta(m), t.alpha(ni).clone() - t.alpha(mi)];
    let scale = row[0].abs().max_abs(&row[1]).max_abs(&row[2]);
    if scale.is_zero() {
        return None;
    }
    // Differences such as alpha_n - alpha_m for a constant tail cancel to
    // roundoff; those are zero coefficients, not tiny ones.
    let noise = S::from_f64(&scale.context(), 64.0 * S::unit_roundoff(&scale.context()));
    Some(row.map(|x| {
        let x = x / &scale;
        if x.abs() <= noise {
            S::zero(&x.context())
        } else {
            x
        }
    }))
}

/// One past the highest unknown with a nonzero coefficient. Unknowns above
/// it are invisible to the truncated system (every equation that would fix
/// them lies beyond `K`) and would only add spurious null directions.
fn observed_unknowns<S: Real>(rows: &[(usize, [S; 3])]) -> usize {
    rows.iter().filter_map(|(sum, r)| (0..3).rev().find(|&d| !r[d].is_zero()).map(|d| sum + d)).max().unwrap_or(0)
}

fn equations<S: Real>(t: &JacobiTable<S>, k: usize) -> Vec<(usize, [S; 3])> {
    let mut rows = Vec::new();
    for sum in 1..2 * k {
        for m in 0..=sum / 2 {
            let n = sum - m;
            if m < n && n <= k {
                if let Some(r) = equation(t, m, n) {
                    rows.push((sum, r));
                }
            }
        }
    }
    rows
}

/// Upper triangular factor with band `R[j][j..=j+2]`.
struct BandedQr<S> {
    n: usize,
    rows: Vec<Option<[S; 3]>>,
}

impl<S: Real> BandedQr<S> {
    fn new(n: usize) -> Self {
        BandedQr { n, rows: vec![None; n] }
    }

    /// Rotates a row with support `start..start+3` into the factor.
    fn absorb(&mut self, start: usize, v: [S; 3]) -> Result<()> {
        let mut j = start;
        let mut v = v;
        while j < self.n {
            if v.iter().all(Real::is_zero) {
                return Ok(());
            }
            if v[0].is_zero() {
                let ctx = v[0].context();
                v = [v[1].clone(), v[2].clone(), S::zero(&ctx)];
                j += 1;
                continue;
            }
            let Some(r) = self.rows[j].as_mut() else {
                self.rows[j] = Some(v);
                return Ok(());
            };
            let rho = r[0].hypot(&v[0]);
            let c = r[0].clone() / &rho;
            let s = v[0].clone() / &rho;
            let r1 = c.clone() * &r[1] + &(s.clone() * &v[1]);
            let r2 = c.clone() * &r[2] + &(s.clone() * &v[2]);
            let v1 = c.clone() * &v[1] - &(s.clone() * &r[1]);
            let v2 = c * &v[2] - &(s * &r[2]);
            *r = [rho, r1, r2];
            let ctx = v1.context();
            v = [v1, v2, S::zero(&ctx)];
            j += 1;
        }
        Ok(())
    }

    fn entry(&self, i: usize, j: usize, ctx: &S::Context) -> S {
        match (&self.rows[i], j.checked_sub(i)) {
            (Some(r), Some(d)) if d < 3 => r[d].clone(),
            _ => S::zero(ctx),
        }
    }

    fn dense(&self, ctx: &S::Context) -> DenseMatrix<S> {
        let mut a = DenseMatrix::zeros(ctx, self.n, self.n);
        for i in 0..self.n {
            for j in i..(i + 3).min(self.n) {
                a.set(i, j, self.entry(i, j, ctx));
            }
        }
        a
    }

    /// Solves `R^T R x = b` with diagonal entries below `floor` raised to it.
    fn inverse_step(&self, b: &[S], floor: &S, ctx: &S::Context) -> Vec<S> {
        let n = self.n;
        let diag = |j: usize| {
            let d = self.entry(j, j, ctx);
            if d.abs() < *floor {
                floor.clone()
            } else {
                d
            }
        };
        let mut y = vec![S::zero(ctx); n];
        for j in 0..n {
            let mut acc = b[j].clone();
            for back in 1..=2 {
                if j >= back {
                    acc = acc - &(self.entry(j - back, j, ctx) * &y[j - back]);
                }
            }
            y[j] = acc / &diag(j);
        }
        let mut z = vec![S::zero(ctx); n];
        for j in (0..n).rev() {
            let mut acc = y[j].clone();
            for ahead in 1..=2 {
                if j + ahead < n {
                    acc = acc - &(self.entry(j, j + ahead, ctx) * &z[j + ahead]);
                }
            }
            z[j] = acc / &diag(j);
        }
        z
    }
}

fn orthonormalize<S: Real>(vectors: Vec<Vec<S>>) -> Result<Vec<Vec<S>>> {
    let mut basis: Vec<Vec<S>> = Vec::new();
    for mut w in vectors {
        for _ in 0..2 {
            for q in &basis {
                let c = q.iter().zip(&w).fold(S::zero(&w[0].context()), |acc, (a, b)| acc + &(a.clone() * b));
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = wi.clone() - &(c.clone() * qi);
                }
            }
        }
        let scale = w.iter().fold(S::zero(&w[0].context()), |m, x| m.max_abs(x));
        if scale.is_zero() {
            return Err(Error::NearSingular("inverse iteration collapsed a null vector".into()));
        }
        let w: Vec<S> = w.into_iter().map(|x| x / &scale).collect();
        let nrm = w.iter().fold(S::zero(&scale.context()), |acc, x| acc + &x.square()).sqrt()?;
        basis.push(w.into_iter().map(|x| x / &nrm).collect());
    }
    Ok(basis)
}

/// Numerical nullspace of the equations `r(m,n) = 0`, `0 <= m < n <= K`,
/// in the unknowns `h_0..h_{2K}` that some equation actually involves. Singular values below `tol * sigma_max`
/// count as null; exact scalars use row reduction instead.
pub fn numeric_nullspace<S: Real>(t: &JacobiTable<S>, k: usize, tol: f64) -> Result<Nullspace<S>> {
    if k < 1 || k > t.max_index() {
        return Err(Error::Range(format!("nullspace of order {k}")));
    }
    let ctx = t.beta(0).context();
    let rows = equations(t, k);
    let n = observed_unknowns(&rows).min(2 * k + 1);
    if n == 0 {
        return Err(Error::NearSingular("commutation system is identically zero".into()));
    }
    if S::EXACT {
        let mut a = DenseMatrix::zeros(&ctx, rows.len().max(1), n);
        for (i, (sum, r)) in rows.iter().enumerate() {
            for (d, v) in r.iter().enumerate() {
                match (sum + d).checked_sub(1) {
                    Some(col) if col < n => a.set(i, col, v.clone()),
                    _ => {}
                }
            }
        }
        let vectors = rref_nullspace(&a);
        return Ok(Nullspace {
            dim: vectors.len(),
            vectors,
            sigma_max: 0.0,
            relative_sigma: Vec::new(),
            method: "exact-row-reduction",
        });
    }
    let mut qr = BandedQr::new(n);
    for (sum, r) in rows {
        // the h_{k-1} coefficient sits in column sum - 1 (sum >= 1)
        qr.absorb(sum - 1, r)?;
    }
    let sigma = singular_values(&qr.dense(&ctx))?;
    let sigma_max = sigma[0].clone();
    if sigma_max.is_zero() {
        return Err(Error::NearSingular("commutation system is identically zero".into()));
    }
    let relative_sigma: Vec<f64> = sigma.iter().map(|s| (s.clone() / &sigma_max).to_f64()).collect();
    let dim = relative_sigma.iter().filter(|&&s| s < tol).count();
    let mut vectors = Vec::new();
    if dim > 0 {
        let floor = sigma_max.clone() * &S::from_f64(&ctx, S::unit_roundoff(&ctx).max(1e-300));
        let mut x: Vec<Vec<S>> = (0..dim)
            .map(|i| {
                (0..n).map(|j| S::from_f64(&ctx, ((i * n + j) as f64 * 0.7548776662 + 0.5698402910).sin())).collect()
            })
            .collect();
        for _ in 0..3 {
            x = orthonormalize(x.iter().map(|v| qr.inverse_step(v, &floor, &ctx)).collect())?;
        }
        vectors = x;
    }
    Ok(Nullspace { dim, vectors, sigma_max: sigma_max.to_f64(), relative_sigma, method: "banded-givens-svd" })
}
