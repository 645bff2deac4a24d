//! Richardson extrapolation of limits `n -> infinity`.

use serde::Serialize;

use super::Real;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitOptions {
    /// First sample point.
    pub start: f64,
    /// Ratio between consecutive sample points.
    pub ratio: f64,
    /// Number of extrapolation stages (samples = levels + 1).
    pub levels: usize,
    /// The expansion is assumed to run in powers of `n^{-decay_step}`.
    pub decay_step: f64,
    /// Convergence threshold on the error estimate, relative to `max(1, |limit|)`.
    pub tolerance: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { start: 64.0, ratio: 2.0, levels: 10, decay_step: 1.0, tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct LimitEstimate<S> {
    pub value: S,
    /// Difference between the last two extrapolation stages.
    pub error_estimate: f64,
    pub converged: bool,
}

/// Extrapolates `lim f(n) n^{-scale_power}` from samples on a geometric grid.
pub fn limit_estimate<S, F>(ctx: &S::Context, f: F, scale_power: i32, opts: &LimitOptions) -> Result<LimitEstimate<S>>
where
    S: Real,
    F: Fn(&S) -> Result<S>,
{
    let levels = opts.levels.max(1);
    let mut table: Vec<S> = Vec::with_capacity(levels + 1);
    for j in 0..=levels {
        let n = S::from_f64(ctx, opts.start * opts.ratio.powi(j as i32));
        let g = f(&n)? * &n.powi(-scale_power);
        table.push(g);
    }
    // In-place Neville-style table: after stage k, table[j] holds T_{j,k}.
    let mut prev_diag = table[levels].clone();
    let mut last = table[levels].clone();
    for k in 1..=levels {
        let w = S::from_f64(ctx, opts.ratio.powf(k as f64 * opts.decay_step));
        let denom = w.clone() - &S::one(ctx);
        for j in (k..=levels).rev() {
            table[j] = (w.clone() * &table[j] - &table[j - 1]) / &denom;
        }
        prev_diag = last;
        last = table[levels].clone();
    }
    let error_estimate = (last.clone() - &prev_diag).abs().to_f64();
    let scale = last.abs().to_f64().max(1.0);
    Ok(LimitEstimate { converged: error_estimate <= opts.tolerance * scale, value: last, error_estimate })
}
