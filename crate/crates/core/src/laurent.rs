//! Functions with a double pole at infinity and the regularity test for the
//! matrix
//!
//! ```text
//! M(z,w) = [ p(z+e) - p(w-e)   q(z+e) - q(w-e) ]
//!          [ p(z-e) - p(w+e)   q(z-e) - q(w+e) ]
//! ```
//!
//! `det M = ((z-w)^2 - 4e^2) delta(z,w)`. If `1, p, q` are linearly
//! independent then, for fixed `w`, either `delta(z,w)` tends to a nonzero
//! limit as `z -> infinity` (case i) or it decays and `z delta(z,w)` does
//! (case ii).

use serde::Serialize;

use crate::families::{FamilyId, Jacobi, Param};
use crate::numerics::{limit_estimate, LimitOptions, Real};
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 12;

/// Something that can be evaluated for large `|z|` and behaves like `z^2`.
pub trait DoublePole<S: Real> {
    fn eval(&self, z: &S) -> Result<S>;

    /// Evaluation is only valid for `|z|` strictly above this.
    fn radius(&self) -> f64;

    /// Laurent coefficients `p_{-1}, p_0, p_1, ...` when known.
    fn coefficients(&self) -> Option<&[S]> {
        None
    }

    /// Truncation order `T` of a series.
    fn truncation(&self) -> Option<usize> {
        None
    }

    /// Bound on the dropped terms of a truncated series at `z`.
    fn tail_bound(&self, _z: f64) -> f64 {
        0.0
    }
}

/// `z^2 + p_{-1} z + p_0 + p_1/z + ... + p_T/z^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<S: Real> {
    coeffs: Vec<S>,
    truncation: usize,
    radius: f64,
    /// Largest magnitude among all supplied coefficients, kept or dropped.
    max_coeff: f64,
    truncated: bool,
}

impl<S: Real> LaurentSeries<S> {
    /// Keeps `p_{-1}` through `p_T`; the radius must be at least 1 so the
    /// tail bound is finite.
    pub fn new(mut coeffs: Vec<S>, truncation: usize, radius: f64) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::Invalid("Laurent truncation must be at least 1".into()));
        }
        if !(radius >= 1.0) || !radius.is_finite() {
            return Err(Error::Invalid(format!("radius bound {radius} must be finite and >= 1")));
        }
        let max_coeff = coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        let keep = truncation + 2;
        let truncated = coeffs.len() > keep;
        coeffs.truncate(keep);
        Ok(LaurentSeries { coeffs, truncation, radius, max_coeff, truncated })
    }

    /// Parses coefficient literals (`"1/3"`, `"0.25"`, `"-2"`).
    pub fn parse(ctx: &S::Context, literals: &[String], truncation: usize, radius: f64) -> Result<Self> {
        let coeffs = literals.iter().map(|s| s.parse::<Param>()?.to_real::<S>(ctx)).collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, truncation, radius)
    }

    /// Coefficient of `z^{-k}` for `k >= -1`; zero past the stored terms.
    pub fn coeff(&self, k: i64, ctx: &S::Context) -> S {
        usize::try_from(k + 1).ok().and_then(|i| self.coeffs.get(i).cloned()).unwrap_or_else(|| S::zero(ctx))
    }

    /// Adds `c` to `p_0`.
    pub fn shifted(&self, c: &S) -> Self {
        let ctx = c.context();
        let mut out = self.clone();
        while out.coeffs.len() < 2 {
            out.coeffs.push(S::zero(&ctx));
        }
        out.coeffs[1] = out.coeffs[1].clone() + c;
        out
    }
}

impl<S: Real> DoublePole<S> for LaurentSeries<S> {
    fn eval(&self, z: &S) -> Result<S> {
        if !(z.to_f64().abs() > self.radius) {
            return Err(Error::Domain(format!(
                "|z| = {} is not above the radius bound {}",
                z.to_f64().abs(),
                self.radius
            )));
        }
        let ctx = z.context();
        // Horner in 1/z over p_T..p_1, then the polynomial part.
        let inv = S::one(&ctx) / z;
        let mut tail = S::zero(&ctx);
        for c in self.coeffs.iter().skip(2).rev() {
            tail = (tail + c) * &inv;
        }
        let mut v = z.clone() * z + &tail;
        if let Some(c) = self.coeffs.first() {
            v = v + &(c.clone() * z);
        }
        if let Some(c) = self.coeffs.get(1) {
            v = v + c;
        }
        Ok(v)
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    fn coefficients(&self) -> Option<&[S]> {
        Some(&self.coeffs)
    }

    fn truncation(&self) -> Option<usize> {
        Some(self.truncation)
    }

    fn tail_bound(&self, z: f64) -> f64 {
        if !self.truncated {
            return 0.0;
        }
        let z = z.abs();
        z.powi(-(self.truncation as i32)) * self.max_coeff / (1.0 - 1.0 / z)
    }
}

/// `scale * alpha(x - 1)` or `scale * beta(x)` of a Jacobi family, continued
/// to real `x`.
pub struct JacobiCoefficient<'a, S: Real> {
    jac: &'a Jacobi<S>,
    use_alpha: bool,
    scale: S,
    radius: f64,
}

/// `(4 alpha_{z-1}, 2 beta_z)` for Wilson or `(alpha_{z-1}, beta_z / 2)` for
/// continuous dual Hahn, both normalized to leading term `z^2`.
pub fn jacobi_pair<'a, S: Real>(
    jac: &'a Jacobi<S>,
    params: &[Param],
) -> Result<(JacobiCoefficient<'a, S>, JacobiCoefficient<'a, S>)> {
    let ctx = jac.context();
    let (sa, sb) = match jac.family() {
        FamilyId::W => (S::from_i64(ctx, 4), S::from_i64(ctx, 2)),
        FamilyId::CdH => (S::one(ctx), S::ratio(ctx, 1, 2)),
        other => {
            return Err(Error::Invalid(format!(
                "{} coefficients do not grow like n^2 (expected W or CdH)",
                other.name()
            )))
        }
    };
    // The rational coefficients have their poles within |x| <= 1 + sum |params|.
    let radius = 2.0 + params.iter().map(|p| p.re_f64().hypot(p.im_f64())).sum::<f64>();
    Ok((
        JacobiCoefficient { jac, use_alpha: true, scale: sa, radius },
        JacobiCoefficient { jac, use_alpha: false, scale: sb, radius },
    ))
}

impl<S: Real> DoublePole<S> for JacobiCoefficient<'_, S> {
    fn eval(&self, z: &S) -> Result<S> {
        if !(z.to_f64().abs() > self.radius) {
            return Err(Error::Domain(format!("|z| = {} is not above {}", z.to_f64().abs(), self.radius)));
        }
        let v = if self.use_alpha {
            self.jac.alpha_analytic(&(z.clone() - &S::one(&z.context())))?
        } else {
            self.jac.beta_analytic(z)?
        };
        Ok(v * &self.scale)
    }

    fn radius(&self) -> f64 {
        self.radius
    }
}

fn check_arg<S: Real, P: DoublePole<S> + ?Sized>(f: &P, x: &S, what: &str) -> Result<()> {
    if x.to_f64().abs() > f.radius() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {} is inside the radius bound {}", x.to_f64(), f.radius())))
    }
}

/// The 2x2 matrix `M(z,w)` as rows.
pub fn build_m<S: Real, P: DoublePole<S> + ?Sized, Q: DoublePole<S> + ?Sized>(
    p: &P,
    q: &Q,
    eps: &S,
    z: &S,
    w: &S,
) -> Result<[[S; 2]; 2]> {
    if eps.is_zero() {
        return Err(Error::Invalid("eps must be nonzero".into()));
    }
    let zp = z.clone() + eps;
    let zm = z.clone() - eps;
    let wp = w.clone() + eps;
    let wm = w.clone() - eps;
    for (x, what) in [(&zp, "z+eps"), (&zm, "z-eps"), (&wp, "w+eps"), (&wm, "w-eps")] {
        check_arg(p, x, what)?;
        check_arg(q, x, what)?;
    }
    Ok([
        [p.eval(&zp)? - &p.eval(&wm)?, q.eval(&zp)? - &q.eval(&wm)?],
        [p.eval(&zm)? - &p.eval(&wp)?, q.eval(&zm)? - &q.eval(&wp)?],
    ])
}

pub fn det_m<S: Real, P: DoublePole<S> + ?Sized, Q: DoublePole<S> + ?Sized>(
    p: &P,
    q: &Q,
    eps: &S,
    z: &S,
    w: &S,
) -> Result<S> {
    let [[a, b], [c, d]] = build_m(p, q, eps, z, w)?;
    Ok(a * &d - &(b * &c))
}

/// Relative size of `(z-w)^2 - 4 eps^2` below which `delta_zw` refuses to divide.
pub const FACTOR_GUARD: f64 = 1e-12;

/// `det M(z,w) / ((z-w)^2 - 4 eps^2)`.
pub fn delta_zw<S: Real, P: DoublePole<S> + ?Sized, Q: DoublePole<S> + ?Sized>(
    p: &P,
    q: &Q,
    eps: &S,
    z: &S,
    w: &S,
) -> Result<S> {
    let ctx = z.context();
    let dz = z.clone() - w;
    let e2 = eps.clone() * eps * &S::from_i64(&ctx, 4);
    let factor = dz.clone() * &dz - &e2;
    let size = (dz.clone() * &dz).to_f64().abs().max(e2.to_f64().abs());
    if factor.to_f64().abs() <= FACTOR_GUARD * size {
        return Err(Error::NearSingular(format!(
            "(z-w)^2 - 4 eps^2 = {:e} at z = {}, w = {}",
            factor.to_f64(),
            z.to_f64(),
            w.to_f64()
        )));
    }
    Ok(det_m(p, q, eps, z, w)? / &factor)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitCase {
    /// `lim delta(z,w)` exists and is nonzero.
    FiniteNonzero,
    /// `delta -> 0` and `lim z delta(z,w)` is nonzero.
    DecayingWithNonzeroZLimit,
    /// Both limits vanish at two different `w`: `M` is not regular.
    Degenerate,
}

impl LimitCase {
    pub fn label(self) -> &'static str {
        match self {
            LimitCase::FiniteNonzero => "i",
            LimitCase::DecayingWithNonzeroZLimit => "ii",
            LimitCase::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitClassification {
    pub case: LimitCase,
    /// `lim delta` for case (i), `lim z delta` for case (ii), the larger
    /// in magnitude of the two for a degenerate verdict.
    pub limit_value: f64,
    pub limit_error: f64,
    pub w_used: f64,
    pub tolerance: f64,
    /// Index `k` of the first coefficient `p_k != q_k` that decides the case,
    /// when both inputs are series (`-1` for case ii).
    pub decisive_index: Option<i64>,
    /// False when the decisive index reaches the truncation order.
    pub reliable: bool,
    /// Largest truncation tail bound over the z-grid.
    pub tail_bound: f64,
    /// Both limits at every `w` tried.
    pub probes: Vec<LimitProbe>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitProbe {
    pub w: f64,
    pub delta_limit: f64,
    /// Only extrapolated when `delta` itself tends to zero.
    pub z_delta_limit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyOptions {
    pub tolerance: f64,
    /// The grid is `z = w + start * 2^k`, `k = 0..=levels`.
    pub start: f64,
    pub levels: usize,
    /// Second `w` tried before declaring degeneracy, as `w + offset`.
    pub second_w_offset: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { tolerance: 1e-8, start: 10.0, levels: 12, second_w_offset: 1.5 }
    }
}

fn probe<S: Real, P: DoublePole<S> + ?Sized, Q: DoublePole<S> + ?Sized>(
    p: &P,
    q: &Q,
    eps: &S,
    w: &S,
    opts: &ClassifyOptions,
) -> Result<(LimitProbe, f64, Option<f64>)> {
    let ctx = w.context();
    let lo =
        LimitOptions { start: opts.start, ratio: 2.0, levels: opts.levels, decay_step: 1.0, tolerance: opts.tolerance };
    let f = |n: &S| delta_zw(p, q, eps, &(w.clone() + n), w);
    let d0 = limit_estimate(&ctx, f, 0, &lo)?;
    let delta_limit = d0.value.to_f64();
    // z delta and n delta share their limit when delta -> 0, with n = z - w.
    let d1 = if delta_limit.abs() <= opts.tolerance { Some(limit_estimate(&ctx, f, -1, &lo)?) } else { None };
    Ok((
        LimitProbe { w: w.to_f64(), delta_limit, z_delta_limit: d1.as_ref().map(|d| d.value.to_f64()) },
        d0.error_estimate,
        d1.map(|d| d.error_estimate),
    ))
}

fn decisive_index<S: Real>(p: &[S], q: &[S], case: LimitCase) -> Option<i64> {
    match case {
        LimitCase::DecayingWithNonzeroZLimit => Some(-1),
        LimitCase::FiniteNonzero => {
            let n = p.len().max(q.len());
            let at = |v: &[S], i: usize| v.get(i).map(|x| x.to_f64()).unwrap_or(0.0);
            (2..n).find(|&i| at(p, i) != at(q, i)).map(|i| i as i64 - 1)
        }
        LimitCase::Degenerate => None,
    }
}

/// Classifies `z -> infinity` behaviour of `delta(z,w)`.
pub fn classify_limit<S: Real, P: DoublePole<S> + ?Sized, Q: DoublePole<S> + ?Sized>(
    p: &P,
    q: &Q,
    eps: &S,
    w: &S,
    opts: &ClassifyOptions,
) -> Result<LimitClassification> {
    let tol = opts.tolerance;
    let ws = [w.clone(), w.clone() + &S::from_f64(&w.context(), opts.second_w_offset)];
    // The smallest |z| on the grid gives the largest tail bound.
    let tail_bound = p.tail_bound(opts.start).max(q.tail_bound(opts.start));
    let mut probes = Vec::new();
    for w in &ws {
        let (pr, e0, e1) = probe(p, q, eps, w, opts)?;
        let found = if pr.delta_limit.abs() > tol {
            Some((LimitCase::FiniteNonzero, pr.delta_limit, e0))
        } else {
            match (pr.z_delta_limit, e1) {
                (Some(v), Some(e)) if v.abs() > tol => Some((LimitCase::DecayingWithNonzeroZLimit, v, e)),
                _ => None,
            }
        };
        probes.push(pr);
        if let Some((case, limit_value, limit_error)) = found {
            let decisive = match (p.coefficients(), q.coefficients()) {
                (Some(a), Some(b)) => decisive_index(a, b, case),
                _ => None,
            };
            let truncation = p.truncation().into_iter().chain(q.truncation()).min();
            let reliable = match (decisive, truncation) {
                (Some(k), Some(t)) => k < t as i64,
                _ => true,
            };
            return Ok(LimitClassification {
                case,
                limit_value,
                limit_error,
                w_used: w.to_f64(),
                tolerance: tol,
                decisive_index: decisive,
                reliable,
                tail_bound,
                probes,
            });
        }
    }
    let biggest = probes.iter().flat_map(|p| [Some(p.delta_limit), p.z_delta_limit]).flatten().fold(0.0f64, |a, b| {
        if b.abs() > a.abs() {
            b
        } else {
            a
        }
    });
    Ok(LimitClassification {
        case: LimitCase::Degenerate,
        limit_value: biggest,
        limit_error: 0.0,
        w_used: ws[1].to_f64(),
        tolerance: tol,
        decisive_index: None,
        reliable: true,
        tail_bound,
        probes,
    })
}
