//! Commutation of Jacobi and Hankel matrices.
//!
//! A Hankel matrix `H = (h_{m+n})` commutes with a Jacobi matrix with
//! off-diagonal `alpha_n` and diagonal `beta_n` exactly when
//!
//! ```text
//! r(m,n) = (a_n - a_m) h_{n+m+1} + (b_n - b_m) h_{n+m} + (a_{n-1} - a_{m-1}) h_{n+m-1} = 0
//! ```
//!
//! for all `m, n >= 0`, with `a_{-1} = 0`. The `m = 0` rows determine the
//! whole sequence from `(h_0, h_1)`, which is how the primary solver works.

mod claims;
mod commutant;
mod hilbert;
mod nullspace;
mod reduction;

use serde::Serialize;

use crate::families::{Clause, Jacobi};
use crate::numerics::{DenseMatrix, Real};
use crate::{Error, Result};

pub use claims::{default_claim_samples, verify_all_claims, ClaimReport, ClaimSample, VerifyOutcome, VerifySummary};
pub use commutant::{
    commutant_compute, commutant_report, reextension_error, subspace_angle_generic, Agreement, BasisRecord, Commutant,
    CommutantReport, NullspaceSummary, SeedOutcome, MIN_ORDER,
};
pub use hilbert::{hilbert_demo, hilbert_demo_compute, hilbert_sequence, interior_commutator, HilbertDemo};
pub use nullspace::{numeric_nullspace, Nullspace};
pub use reduction::{single_index_recurrence, IndexRecurrence};

/// `alpha_{-1..=max}` and `beta_{0..=max}` evaluated once.
#[derive(Clone, Debug)]
pub struct JacobiTable<S> {
    alpha: Vec<S>,
    beta: Vec<S>,
}

impl<S: Real> JacobiTable<S> {
    pub fn build(j: &Jacobi<S>, max_index: usize) -> Result<Self> {
        let alpha = (-1..=max_index as i64).map(|n| j.alpha(n)).collect::<Result<Vec<_>>>()?;
        let beta = (0..=max_index as i64).map(|n| j.beta(n)).collect::<Result<Vec<_>>>()?;
        Ok(JacobiTable { alpha, beta })
    }

    /// Largest index available for both sequences.
    pub fn max_index(&self) -> usize {
        self.beta.len() - 1
    }

    /// `alpha_n` for `-1 <= n <= max_index`.
    pub fn alpha(&self, n: i64) -> &S {
        &self.alpha[(n + 1) as usize]
    }

    pub fn beta(&self, n: usize) -> &S {
        &self.beta[n]
    }

    /// The leading `size x size` block of the Jacobi matrix.
    pub fn matrix(&self, size: usize) -> Result<DenseMatrix<S>> {
        if size == 0 || size > self.max_index() + 1 {
            return Err(Error::Range(format!("Jacobi block of size {size}")));
        }
        let ctx = self.beta[0].context();
        let mut a = DenseMatrix::zeros(&ctx, size, size);
        for i in 0..size {
            a.set(i, i, self.beta[i].clone());
            if i + 1 < size {
                a.set(i, i + 1, self.alpha(i as i64).clone());
                a.set(i + 1, i, self.alpha(i as i64).clone());
            }
        }
        Ok(a)
    }
}

/// Where a Hankel sequence came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Origin {
    ClosedForm { clause: Clause, component: usize },
    Recurrence { seed: [i64; 2] },
    NumericNullspace,
    User,
}

/// The generating sequence `h_0..h_L` of a Hankel matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelSequence<S> {
    pub values: Vec<S>,
    pub origin: Origin,
}

impl<S: Real> HankelSequence<S> {
    pub fn new(values: Vec<S>, origin: Origin) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Invalid("a Hankel sequence needs at least h_0 and h_1".into()));
        }
        Ok(HankelSequence { values, origin })
    }

    /// Index `L` of the last entry.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    /// The `size x size` Hankel matrix `(h_{m+n})`.
    pub fn matrix(&self, size: usize) -> Result<DenseMatrix<S>> {
        if size == 0 || 2 * size - 2 > self.last_index() {
            return Err(Error::Range(format!("Hankel block of size {size} from h_0..h_{}", self.last_index())));
        }
        let rows = (0..size).map(|m| (0..size).map(|n| self.values[m + n].clone()).collect()).collect();
        DenseMatrix::from_rows(rows)
    }

    /// Scaled so the first entry of largest magnitude equals one.
    pub fn normalized(mut self) -> Self {
        normalize(&mut self.values);
        self
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Real::to_f64).collect()
    }
}

pub(crate) fn normalize<S: Real>(v: &mut [S]) {
    let mut best: Option<usize> = None;
    for (i, x) in v.iter().enumerate() {
        if best.map_or(!x.is_zero(), |b| x.abs() > v[b].abs()) {
            best = Some(i);
        }
    }
    if let Some(b) = best {
        let p = v[b].clone();
        for x in v.iter_mut() {
            *x = x.clone() / &p;
        }
    }
}

/// `r(m,n)` together with the largest magnitude among its three terms.
pub fn residual<S: Real>(t: &JacobiTable<S>, h: &[S], m: usize, n: usize) -> Result<(S, S)> {
    let k = m + n;
    if k + 1 >= h.len() {
        return Err(Error::Range(format!(
            "residual ({m},{n}) needs h_{} but the sequence ends at h_{}",
            k + 1,
            h.len().saturating_sub(1)
        )));
    }
    if m.max(n) > t.max_index() {
        return Err(Error::Range(format!("residual ({m},{n}) exceeds the coefficient table")));
    }
    let (mi, ni) = (m as i64, n as i64);
    let t1 = (t.alpha(ni).clone() - t.alpha(mi)) * &h[k + 1];
    let t2 = (t.beta(n).clone() - t.beta(m)) * &h[k];
    let mut scale = t1.abs().max_abs(&t2);
    let mut r = t1 + &t2;
    if k > 0 {
        let t3 = (t.alpha(ni - 1).clone() - t.alpha(mi - 1)) * &h[k - 1];
        scale = scale.max_abs(&t3);
        r = r + &t3;
    }
    Ok((r, scale))
}

/// All residuals `r(m,n)` for `0 <= m,n <= K`.
#[derive(Clone, Debug)]
pub struct ResidualGrid<S> {
    pub k: usize,
    /// Row-major `(K+1) x (K+1)`.
    pub values: Vec<S>,
    pub scales: Vec<S>,
    /// `max |r| / scale` over entries with nonzero scale.
    pub max_relative: f64,
    pub max_absolute: f64,
}

impl<S: Real> ResidualGrid<S> {
    pub fn get(&self, m: usize, n: usize) -> (&S, &S) {
        let i = m * (self.k + 1) + n;
        (&self.values[i], &self.scales[i])
    }
}

fn relative<S: Real>(r: &S, scale: &S) -> f64 {
    if scale.is_zero() {
        return 0.0;
    }
    (r.abs() / scale).to_f64()
}

pub fn residual_grid<S: Real>(t: &JacobiTable<S>, h: &[S], k: usize) -> Result<ResidualGrid<S>> {
    if 2 * k + 1 >= h.len() {
        return Err(Error::Range(format!(
            "grid of order {k} needs h_0..h_{} but only {} entries are given",
            2 * k + 1,
            h.len()
        )));
    }
    let mut values = Vec::with_capacity((k + 1) * (k + 1));
    let mut scales = Vec::with_capacity((k + 1) * (k + 1));
    let (mut max_relative, mut max_absolute) = (0.0f64, 0.0f64);
    for m in 0..=k {
        for n in 0..=k {
            let (r, s) = residual(t, h, m, n)?;
            max_relative = max_relative.max(relative(&r, &s));
            max_absolute = max_absolute.max(r.abs().to_f64());
            values.push(r);
            scales.push(s);
        }
    }
    Ok(ResidualGrid { k, values, scales, max_relative, max_absolute })
}

/// Maximal relative residual over `0 <= m < n <= K` without storing the grid.
pub fn max_relative_residual<S: Real>(t: &JacobiTable<S>, h: &[S], k: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in 0..=k {
        for n in m + 1..=k {
            let (r, s) = residual(t, h, m, n)?;
            worst = worst.max(relative(&r, &s));
        }
    }
    Ok(worst)
}

/// Extends `(h_0, h_1)` to `h_0..h_L` through the `m = 0` equations
/// `(a_n - a_0) h_{n+1} + (b_n - b_0) h_n + a_{n-1} h_{n-1} = 0`.
///
/// `pivot_tol` guards `|a_n - a_0| > pivot_tol * max(|a_n|, |a_0|)`.
pub fn descend_extend<S: Real>(t: &JacobiTable<S>, h0: S, h1: S, last: usize, pivot_tol: f64) -> Result<Vec<S>> {
    if last < 1 {
        return Err(Error::Range("descend_extend needs L >= 1".into()));
    }
    if last > t.max_index() + 1 {
        return Err(Error::Range(format!("extension to h_{last} exceeds the coefficient table")));
    }
    let mut h = Vec::with_capacity(last + 1);
    h.push(h0);
    h.push(h1);
    let a0 = t.alpha(0).clone();
    let b0 = t.beta(0).clone();
    for n in 1..last {
        let an = t.alpha(n as i64);
        let pivot = an.clone() - &a0;
        let bound = an.abs().max_abs(&a0).to_f64() * pivot_tol;
        if pivot.is_zero() || pivot.abs().to_f64() <= bound {
            return Err(Error::Pivot(n as i64));
        }
        let rhs = (t.beta(n).clone() - &b0) * &h[n] + &(t.alpha(n as i64 - 1).clone() * &h[n - 1]);
        h.push(-(rhs / pivot));
    }
    Ok(h)
}
