//! Evaluation of the Jacobi coefficients `alpha_n`, `beta_n`.

use super::{FamilyId, ValidatedFamily};
use crate::numerics::{Complex, Real};
use crate::{Error, Result};

/// Evaluator for one validated family in a fixed scalar type.
///
/// `alpha(n)` and `beta(n)` follow the matrix conventions (`alpha(-1) = 0`,
/// `C_0 = 0`); the `*_analytic` variants accept any real argument in the
/// analyticity domain. An optional affine map `(alpha, beta) -> (a alpha,
/// a beta + b)` is applied to every value.
#[derive(Clone, Debug)]
pub struct Jacobi<S: Real> {
    id: FamilyId,
    ctx: S::Context,
    p: Vec<Complex<S>>,
    /// `(sin phi, cos phi)` for Meixner-Pollaczek.
    trig: Option<(S, S)>,
    scale: S,
    shift: S,
    eps: f64,
}

impl<S: Real> Jacobi<S> {
    pub fn new(fam: &ValidatedFamily, ctx: &S::Context) -> Result<Self> {
        let id = fam.id();
        let (p, trig) = if id == FamilyId::MP {
            let lambda = fam.params()[0].to_complex::<S>(ctx)?;
            (vec![lambda], Some(fam.params()[1].sin_cos::<S>(ctx)?))
        } else {
            let mut p = fam.params().iter().map(|x| x.to_complex::<S>(ctx)).collect::<Result<Vec<_>>>()?;
            if id == FamilyId::CH {
                let (a, b) = (p[0].conj(), p[1].conj());
                p.push(a);
                p.push(b);
            }
            (p, None)
        };
        Ok(Jacobi {
            id,
            ctx: ctx.clone(),
            p,
            trig,
            scale: S::one(ctx),
            shift: S::zero(ctx),
            eps: 1e3 * S::unit_roundoff(ctx),
        })
    }

    pub fn with_affine(mut self, scale: S, shift: S) -> Self {
        self.shift = scale.clone() * &self.shift + &shift;
        self.scale = scale * &self.scale;
        self
    }

    pub fn family(&self) -> FamilyId {
        self.id
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    /// Matrix entry `alpha_n` for `n >= -1`, with `alpha_{-1} = 0`.
    pub fn alpha(&self, n: i64) -> Result<S> {
        match n {
            -1 => Ok(S::zero(&self.ctx)),
            n if n < -1 => Err(Error::Range(format!("alpha index {n}"))),
            n => self.alpha_analytic(&S::from_i64(&self.ctx, n)),
        }
    }

    /// Matrix entry `beta_n` for `n >= 0`.
    pub fn beta(&self, n: i64) -> Result<S> {
        if n < 0 {
            return Err(Error::Range(format!("beta index {n}")));
        }
        self.beta_analytic(&S::from_i64(&self.ctx, n))
    }

    pub fn alpha_analytic(&self, x: &S) -> Result<S> {
        Ok(self.raw_alpha(x)? * &self.scale)
    }

    /// `beta` at a real argument; at `x = 0` the `C` term is dropped as in
    /// the matrix convention.
    pub fn beta_analytic(&self, x: &S) -> Result<S> {
        Ok(self.raw_beta(x)? * &self.scale + &self.shift)
    }

    fn k(&self, v: i64) -> S {
        S::from_i64(&self.ctx, v)
    }

    fn ck(&self, v: i64) -> Complex<S> {
        Complex::from_i64(&self.ctx, v)
    }

    fn nonzero(&self, d: &Complex<S>, what: &str) -> Result<()> {
        if d.is_zero() {
            return Err(Error::DegenerateDenominator(format!("{} {what}", self.id.name())));
        }
        Ok(())
    }

    fn real_value(&self, z: Complex<S>, what: &str) -> Result<S> {
        let mag = z.abs().to_f64().max(1.0);
        if z.im.abs().to_f64() > self.eps * mag {
            return Err(Error::Domain(format!("{} {what} has imaginary part {:e}", self.id.name(), z.im.to_f64())));
        }
        Ok(z.re)
    }

    /// Square root with tiny negative radicands clamped to zero.
    fn root(&self, r: S) -> Result<S> {
        if r.is_negative() {
            if r.abs().to_f64() <= self.eps {
                return Ok(S::zero(&self.ctx));
            }
            return Err(Error::NegativeRadicand(r.to_f64()));
        }
        r.sqrt()
    }

    fn sum(&self) -> Complex<S> {
        self.p.iter().fold(self.ck(0), |acc, z| acc + z)
    }

    /// `A(x)` of the Wilson (`hahn = false`) or continuous Hahn family.
    fn upper(&self, x: &Complex<S>, hahn: bool) -> Result<Complex<S>> {
        let (a, b, c, d) = (&self.p[0], &self.p[1], &self.p[2], &self.p[3]);
        let s = self.sum();
        let two_x = x.clone() + x;
        let den = (two_x.clone() + &s - self.ck(1)) * (two_x + &s);
        self.nonzero(&den, "A denominator")?;
        let mut num = (x.clone() + &s - self.ck(1)) * (x.clone() + a + c) * (x.clone() + a + d);
        if hahn {
            num = -num;
        } else {
            num = num * (x.clone() + a + b);
        }
        Ok(num / den)
    }

    /// `C(x)`, identically zero at `x = 0`.
    fn lower(&self, x: &Complex<S>, hahn: bool) -> Result<Complex<S>> {
        if x.is_zero() {
            return Ok(self.ck(0));
        }
        let (b, c, d) = (&self.p[1], &self.p[2], &self.p[3]);
        let s = self.sum();
        let one = self.ck(1);
        let two_x = x.clone() + x;
        let den = (two_x.clone() + &s - self.ck(2)) * (two_x + &s - &one);
        self.nonzero(&den, "C denominator")?;
        let mut num = x.clone() * (x.clone() + b + c - &one) * (x.clone() + b + d - &one);
        if !hahn {
            num = num * (x.clone() + c + d - &one);
        }
        Ok(num / den)
    }

    fn raw_alpha(&self, x: &S) -> Result<S> {
        let cx = Complex::real(x.clone());
        let x1 = x.clone() + &self.k(1);
        let cx1 = Complex::real(x1.clone());
        let p = &self.p;
        match self.id {
            FamilyId::W => {
                let rad = self.upper(&cx, false)? * self.lower(&cx1, false)?;
                self.root(self.real_value(rad, "alpha^2")?)
            }
            FamilyId::CH => {
                let rad = -(self.upper(&cx, true)? * self.lower(&cx1, true)?);
                self.root(self.real_value(rad, "alpha^2")?)
            }
            FamilyId::CdH => {
                let rad = cx1 * (cx.clone() + &p[0] + &p[1]) * (cx.clone() + &p[0] + &p[2]) * (cx + &p[1] + &p[2]);
                self.root(self.real_value(rad, "alpha^2")?)
            }
            FamilyId::J => {
                let (al, be) = (&p[0].re, &p[1].re);
                let c = al.clone() + be;
                let four = self.k(4);
                let rad = if x.is_zero() {
                    // (n + c + 1) / (2n + c + 1) cancels at n = 0
                    let c2 = c.clone() + &self.k(2);
                    four * &(al.clone() + &self.k(1)) * &(be.clone() + &self.k(1)) / (c2.square() * &(c + &self.k(3)))
                } else {
                    let two_x = x.clone() + x;
                    let den = (two_x.clone() + &c + &self.k(1))
                        * &(two_x.clone() + &c + &self.k(2)).square()
                        * &(two_x + &c + &self.k(3));
                    self.nonzero(&Complex::real(den.clone()), "alpha denominator")?;
                    four * &x1 * &(x1.clone() + al) * &(x1.clone() + be) * &(x1 + &c) / den
                };
                self.root(rad)
            }
            FamilyId::MP => {
                let (sin, _) = self.trig.as_ref().expect("MP carries its angle");
                let two_lambda = p[0].re.clone() + &p[0].re;
                let r = self.root(x1 * &(x.clone() + &two_lambda))?;
                Ok(r / (sin.clone() + sin))
            }
            FamilyId::M => {
                let (c, beta) = (&p[0].re, &p[1].re);
                let r = self.root(c.clone() * &x1 * &(x.clone() + beta))?;
                Ok(r / (self.k(1) - c))
            }
            FamilyId::L => self.root(x1.clone() * &(x1 + &p[0].re)),
            FamilyId::C => self.root(p[0].re.clone() * &x1),
            FamilyId::H => self.root(x1 / self.k(2)),
            FamilyId::HilbertJt => Ok(x1 * &(x.clone() + &p[0].re)),
        }
    }

    fn raw_beta(&self, x: &S) -> Result<S> {
        let cx = Complex::real(x.clone());
        let p = &self.p;
        match self.id {
            FamilyId::W => {
                let v = self.upper(&cx, false)? + self.lower(&cx, false)? - p[0].clone() * &p[0];
                self.real_value(v, "beta")
            }
            FamilyId::CH => {
                let v = (self.upper(&cx, true)? + self.lower(&cx, true)? + &p[0]) * Complex::i(&self.ctx);
                self.real_value(v, "beta")
            }
            FamilyId::CdH => {
                let s = self.sum();
                let st = p[0].clone() * &p[1] + p[0].clone() * &p[2] + p[1].clone() * &p[2];
                let two = self.ck(2);
                let v = two.clone() * &cx * &cx + (two * &s - self.ck(1)) * &cx + st;
                self.real_value(v, "beta")
            }
            FamilyId::J => {
                let (al, be) = (&p[0].re, &p[1].re);
                let c = al.clone() + be;
                if x.is_zero() {
                    // (beta^2 - alpha^2) / c cancels at n = 0
                    return Ok((be.clone() - al) / (c + &self.k(2)));
                }
                let two_x = x.clone() + x;
                let den = (two_x.clone() + &c) * &(two_x + &c + &self.k(2));
                self.nonzero(&Complex::real(den.clone()), "beta denominator")?;
                Ok((be.square() - &al.square()) / den)
            }
            FamilyId::MP => {
                let (sin, cos) = self.trig.as_ref().expect("MP carries its angle");
                if cos.is_zero() {
                    return Ok(S::zero(&self.ctx));
                }
                Ok(-((x.clone() + &p[0].re) * cos / sin))
            }
            FamilyId::M => {
                let (c, beta) = (&p[0].re, &p[1].re);
                Ok((x.clone() + &((x.clone() + beta) * c)) / (self.k(1) - c))
            }
            FamilyId::L => Ok(x.clone() + x + &p[0].re + &self.k(1)),
            FamilyId::C => Ok(x.clone() + &p[0].re),
            FamilyId::H => Ok(S::zero(&self.ctx)),
            FamilyId::HilbertJt => Ok((x.clone() + x) * &(x.clone() + &p[0].re)),
        }
    }
}
