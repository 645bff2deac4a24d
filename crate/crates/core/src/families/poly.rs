//! Exact decision of whether `alpha_n` and `beta_n` are polynomials in `n`.
//!
//! Every family's `alpha_n^2` and `beta_n` is a rational function of `n`
//! whose denominator splits into known linear factors. With exact
//! (Gaussian) rational parameters we divide those factors out, then test
//! `alpha^2` for being a perfect square. Meixner-Pollaczek carries the
//! transcendental `sin(phi)`, `cot(phi)` only as overall constants and is
//! handled in closed form.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{FamilyId, Param, ValidatedFamily};
use crate::numerics::exact_sqrt;

/// Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq)]
struct G {
    re: BigRational,
    im: BigRational,
}

impl G {
    fn new(re: BigRational, im: BigRational) -> Self {
        G { re, im }
    }

    fn int(n: i64) -> Self {
        G::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    fn frac(n: i64, d: i64) -> Self {
        G::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    fn i() -> Self {
        G::new(BigRational::zero(), BigRational::one())
    }

    fn from_param(p: &Param) -> Self {
        let (re, im) = p.gaussian().expect("validated parameters are Gaussian rationals");
        G::new(re, im)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        G::new(self.re.clone(), -self.im.clone())
    }

    fn inv(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        G::new(&self.re / &n, -(&self.im / &n))
    }

    fn to_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for G {
    type Output = G;
    fn add(self, o: G) -> G {
        G::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for G {
    type Output = G;
    fn sub(self, o: G) -> G {
        G::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for G {
    type Output = G;
    fn mul(self, o: G) -> G {
        G::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for G {
    type Output = G;
    fn neg(self) -> G {
        G::new(-self.re, -self.im)
    }
}

/// Polynomial with coefficients from lowest to highest degree.
#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<G>);

impl Poly {
    fn constant(c: G) -> Self {
        Poly(vec![c]).trim()
    }

    /// `x + c`.
    fn shifted(c: G) -> Self {
        Poly(vec![c, G::int(1)])
    }

    fn product(factors: &[Poly]) -> Self {
        factors.iter().fold(Poly::constant(G::int(1)), |acc, f| acc.mul(f))
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(G::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let get = |p: &Poly, i: usize| p.0.get(i).cloned().unwrap_or_else(|| G::int(0));
        Poly((0..n).map(|i| get(self, i) + get(o, i)).collect()).trim()
    }

    fn scale(&self, c: &G) -> Poly {
        Poly(self.0.iter().map(|x| x.clone() * c.clone()).collect()).trim()
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![G::int(0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly(out).trim()
    }

    fn eval(&self, x: &G) -> G {
        self.0.iter().rev().fold(G::int(0), |acc, c| acc * x.clone() + c.clone())
    }

    /// Divides by `x - r`, returning the quotient when the remainder vanishes.
    fn divide_root(&self, r: &G) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly(Vec::new()));
        }
        let n = self.degree();
        let mut q = vec![G::int(0); n];
        let mut carry = G::int(0);
        for k in (0..=n).rev() {
            let v = self.0[k].clone() + carry.clone() * r.clone();
            if k == 0 {
                return v.is_zero().then(|| Poly(q).trim());
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Monic square root of a monic polynomial, if one exists.
    fn monic_sqrt(&self) -> Option<Poly> {
        let n = self.degree();
        if n % 2 != 0 {
            return None;
        }
        let k = n / 2;
        let mut r = vec![G::int(0); k + 1];
        r[k] = G::int(1);
        let half = G::frac(1, 2);
        for j in 1..=k {
            // coefficient of x^{2k-j} in r^2, excluding the unknown r[k-j]
            let deg = 2 * k - j;
            let mut acc = G::int(0);
            for a in (k - j + 1)..=k {
                let b = deg - a;
                if b > k - j && b <= k {
                    acc = acc + r[a].clone() * r[b].clone();
                }
            }
            r[k - j] = (self.0[deg].clone() - acc) * half.clone();
        }
        let root = Poly(r);
        (root.mul(&root) == *self).then_some(root)
    }
}

/// A rational function `num / (lead * prod (x - root))`.
struct RationalFn {
    num: Poly,
    lead: G,
    roots: Vec<G>,
}

impl RationalFn {
    fn poly(num: Poly) -> Self {
        RationalFn { num, lead: G::int(1), roots: Vec::new() }
    }

    fn reduce(self) -> Option<Poly> {
        let mut num = self.num;
        for r in &self.roots {
            num = num.divide_root(r)?;
        }
        Some(num.scale(&self.lead.inv()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialCase {
    /// Coefficients of `alpha(n)`, lowest degree first.
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(skip)]
    pub alpha_exact: Option<Vec<BigRational>>,
    #[serde(skip)]
    pub beta_exact: Option<Vec<BigRational>>,
    /// Whether the alpha polynomial vanishes at `n = -1` (decided exactly).
    pub alpha_vanishes_at_minus_one: bool,
}

impl PolynomialCase {
    pub fn alpha_degree(&self) -> usize {
        self.alpha.len().saturating_sub(1)
    }

    pub fn beta_degree(&self) -> usize {
        self.beta.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "polynomial", rename_all = "kebab-case")]
pub enum PolynomialDecision {
    Yes(PolynomialCase),
    No { alpha_polynomial: bool, beta_polynomial: bool },
}

impl PolynomialDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, PolynomialDecision::Yes(_))
    }

    pub fn case(&self) -> Option<&PolynomialCase> {
        match self {
            PolynomialDecision::Yes(c) => Some(c),
            PolynomialDecision::No { .. } => None,
        }
    }
}

fn lin(c: G) -> Poly {
    Poly::shifted(c)
}

fn real_coeffs(p: &Poly) -> Option<Vec<BigRational>> {
    p.0.iter().map(|g| g.im.is_zero().then(|| g.re.clone())).collect::<Option<Vec<_>>>().map(|v| {
        if v.is_empty() {
            vec![BigRational::zero()]
        } else {
            v
        }
    })
}

fn to_f64s(p: &Poly) -> Vec<f64> {
    if p.is_zero() {
        return vec![0.0];
    }
    p.0.iter().map(G::to_f64).collect()
}

/// `alpha^2` and `beta` as rational functions, or `None` for Meixner-Pollaczek.
fn rational_forms(fam: &ValidatedFamily) -> Option<(RationalFn, RationalFn)> {
    let id = fam.id();
    if id == FamilyId::MP {
        return None;
    }
    let p: Vec<G> = fam.params().iter().map(G::from_param).collect();
    let one = G::int(1);
    let x1 = lin(one.clone());
    Some(match id {
        FamilyId::W | FamilyId::CH => {
            let hahn = id == FamilyId::CH;
            let (a, b) = (p[0].clone(), p[1].clone());
            let (c, d) = if hahn { (a.conj(), b.conj()) } else { (p[2].clone(), p[3].clone()) };
            let s = a.clone() + b.clone() + c.clone() + d.clone();
            let half = G::frac(1, 2);
            let r1 = (one.clone() - s.clone()) * half.clone();
            let r2 = -(s.clone() * half.clone());
            let r3 = (G::int(2) - s.clone()) * half.clone();
            let r4 = -((s.clone() + one.clone()) * half);
            let mut upper = vec![lin(s.clone() - one.clone()), lin(a.clone() + c.clone()), lin(a.clone() + d.clone())];
            let mut lower = vec![
                Poly(vec![G::int(0), G::int(1)]),
                lin(b.clone() + c.clone() - one.clone()),
                lin(b.clone() + d.clone() - one.clone()),
            ];
            if !hahn {
                upper.push(lin(a.clone() + b.clone()));
                lower.push(lin(c.clone() + d.clone() - one.clone()));
            }
            // C(x + 1) has the same factors shifted by one
            let lower_shift: Vec<Poly> = {
                let mut v = vec![x1.clone(), lin(b.clone() + c.clone()), lin(b.clone() + d.clone())];
                if !hahn {
                    v.push(lin(c.clone() + d.clone()));
                }
                v
            };
            let n_a = Poly::product(&upper);
            let n_c = Poly::product(&lower);
            let alpha_sq = RationalFn {
                num: n_a.mul(&Poly::product(&lower_shift)),
                lead: G::int(16),
                roots: vec![r1.clone(), r2.clone(), r2.clone(), r4],
            };
            // A + C over the common denominator 4 (x-r1)(x-r2)(x-r3)
            let sign = if hahn { G::int(-1) } else { G::int(1) };
            let common = n_a.mul(&lin(-r3.clone())).scale(&sign).add(&n_c.mul(&lin(-r2.clone())));
            let cubic = Poly::product(&[lin(-r1.clone()), lin(-r2.clone()), lin(-r3.clone())]);
            let beta_num = if hahn {
                common.add(&cubic.scale(&(G::int(4) * a))).scale(&G::i())
            } else {
                common.add(&cubic.scale(&(G::int(-4) * a.clone() * a)))
            };
            let beta = RationalFn { num: beta_num, lead: G::int(4), roots: vec![r1, r2, r3] };
            (alpha_sq, beta)
        }
        FamilyId::CdH => {
            let (a, b, c) = (p[0].clone(), p[1].clone(), p[2].clone());
            let alpha_sq = Poly::product(&[
                x1.clone(),
                lin(a.clone() + b.clone()),
                lin(a.clone() + c.clone()),
                lin(b.clone() + c.clone()),
            ]);
            let s = a.clone() + b.clone() + c.clone();
            let st = a.clone() * b.clone() + a * c.clone() + b * c;
            let beta = Poly(vec![st, G::int(2) * s - one, G::int(2)]).trim();
            (RationalFn::poly(alpha_sq), RationalFn::poly(beta))
        }
        FamilyId::J => {
            let (al, be) = (p[0].clone(), p[1].clone());
            let c = al.clone() + be.clone();
            let half = G::frac(1, 2);
            let alpha_sq = RationalFn {
                num: Poly::product(&[
                    x1.clone(),
                    lin(al.clone() + one.clone()),
                    lin(be.clone() + one.clone()),
                    lin(c.clone() + one.clone()),
                ])
                .scale(&G::int(4)),
                lead: G::int(16),
                roots: vec![
                    -((c.clone() + one.clone()) * half.clone()),
                    -((c.clone() + G::int(2)) * half.clone()),
                    -((c.clone() + G::int(2)) * half.clone()),
                    -((c.clone() + G::int(3)) * half.clone()),
                ],
            };
            let beta = RationalFn {
                num: Poly::constant(be.clone() * be - al.clone() * al),
                lead: G::int(4),
                roots: vec![-(c.clone() * half.clone()), -((c + G::int(2)) * half)],
            };
            (alpha_sq, beta)
        }
        FamilyId::M => {
            let (c, beta) = (p[0].clone(), p[1].clone());
            let k = (one.clone() - c.clone()).inv();
            let alpha_sq = Poly::product(&[x1.clone(), lin(beta.clone())]).scale(&(c.clone() * k.clone() * k.clone()));
            let b = Poly(vec![beta * c.clone(), one + c]).scale(&k);
            (RationalFn::poly(alpha_sq), RationalFn::poly(b))
        }
        FamilyId::L => {
            let al = p[0].clone();
            let alpha_sq = Poly::product(&[x1.clone(), lin(al.clone() + one.clone())]);
            (RationalFn::poly(alpha_sq), RationalFn::poly(Poly(vec![al + one, G::int(2)])))
        }
        FamilyId::C => {
            let a = p[0].clone();
            (RationalFn::poly(x1.scale(&a)), RationalFn::poly(lin(a)))
        }
        FamilyId::H => (RationalFn::poly(x1.scale(&G::frac(1, 2))), RationalFn::poly(Poly(Vec::new()))),
        FamilyId::HilbertJt => {
            let t = p[0].clone();
            let alpha = Poly::product(&[x1.clone(), lin(t.clone())]);
            let beta = Poly(vec![G::int(0), G::int(2), G::int(0)]).mul(&lin(t));
            (RationalFn::poly(alpha.mul(&alpha)), RationalFn::poly(beta))
        }
        FamilyId::MP => unreachable!(),
    })
}

fn meixner_pollaczek(fam: &ValidatedFamily) -> PolynomialDecision {
    let lambda = fam.params()[0].as_rational().cloned().expect("validated lambda is rational");
    if lambda != BigRational::new(1.into(), 2.into()) {
        return PolynomialDecision::No { alpha_polynomial: false, beta_polynomial: true };
    }
    let phi = &fam.params()[1];
    let right_angle = *phi == Param::PiMultiple(BigRational::new(1.into(), 2.into()));
    let (sin, cos) = phi.sin_cos::<f64>(&()).expect("binary64 trigonometry");
    let (alpha, alpha_exact) = if right_angle {
        let h = BigRational::new(1.into(), 2.into());
        (vec![0.5, 0.5], Some(vec![h.clone(), h]))
    } else {
        let k = 1.0 / (2.0 * sin);
        (vec![k, k], None)
    };
    let (beta, beta_exact) = if right_angle {
        (vec![0.0], Some(vec![BigRational::zero()]))
    } else {
        let cot = cos / sin;
        (vec![-lambda.to_f64().unwrap_or(f64::NAN) * cot, -cot], None)
    };
    PolynomialDecision::Yes(PolynomialCase { alpha, beta, alpha_exact, beta_exact, alpha_vanishes_at_minus_one: true })
}

/// Decides polynomiality of `alpha_n` and `beta_n` exactly from the closed
/// forms. When both are polynomials the coefficients are returned.
pub fn is_polynomial_case(fam: &ValidatedFamily) -> PolynomialDecision {
    let Some((alpha_sq, beta)) = rational_forms(fam) else {
        return meixner_pollaczek(fam);
    };
    let beta = beta.reduce();
    let alpha = alpha_sq.reduce().and_then(|p| {
        let lead = p.0.last()?.clone();
        if !lead.im.is_zero() || !lead.re.is_positive() {
            return None;
        }
        let root = p.scale(&lead.inv()).monic_sqrt()?;
        Some((lead.re, root))
    });
    let (Some((lead, root)), Some(beta)) = (alpha.as_ref(), beta.as_ref()) else {
        return PolynomialDecision::No { alpha_polynomial: alpha.is_some(), beta_polynomial: beta.is_some() };
    };
    let lead_sqrt_exact = exact_sqrt(lead);
    let lead_sqrt = lead_sqrt_exact
        .as_ref()
        .and_then(ToPrimitive::to_f64)
        .unwrap_or_else(|| lead.to_f64().unwrap_or(f64::NAN).sqrt());
    let alpha_exact =
        lead_sqrt_exact.and_then(|l| real_coeffs(root).map(|v| v.into_iter().map(|c| c * &l).collect::<Vec<_>>()));
    PolynomialDecision::Yes(PolynomialCase {
        alpha: to_f64s(root).into_iter().map(|c| c * lead_sqrt).collect(),
        beta: to_f64s(beta),
        alpha_exact,
        beta_exact: real_coeffs(beta),
        alpha_vanishes_at_minus_one: root.eval(&G::int(-1)).is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn decide(id: FamilyId, lits: &[&str]) -> PolynomialDecision {
        let f = FamilySpec::from_literals(id, lits).unwrap().validate().unwrap();
        is_polynomial_case(&f)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn continuous_dual_hahn_special_point() {
        let d = decide(FamilyId::CdH, &["1/2", "1/2", "1.7"]);
        let c = d.case().expect("polynomial");
        // (n+1)(n+1/2+c) = n^2 + 16/5 n + 11/5
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(11, 5), q(16, 5), q(1, 1)][..]));
        assert_eq!((c.alpha_degree(), c.beta_degree()), (2, 2));
        assert!(c.alpha_vanishes_at_minus_one);
        assert!(!decide(FamilyId::CdH, &["0.7", "0.9", "1.1"]).is_yes());
    }

    #[test]
    fn non_polynomial_families() {
        assert_eq!(decide(FamilyId::H, &[]), PolynomialDecision::No { alpha_polynomial: false, beta_polynomial: true });
        assert!(!decide(FamilyId::C, &["1"]).is_yes());
        assert!(!decide(FamilyId::J, &["0.3", "0.7"]).is_yes());
        assert!(!decide(FamilyId::M, &["1/2", "2"]).is_yes());
        assert!(!decide(FamilyId::L, &["0.5"]).is_yes());
        assert!(!decide(FamilyId::MP, &["0.8", "1.0"]).is_yes());
        assert!(!decide(FamilyId::W, &["1", "2", "3", "4"]).is_yes());
    }

    #[test]
    fn wilson_configurations() {
        let d = decide(FamilyId::W, &["3/4", "3/4", "1/4", "1/4"]);
        let c = d.case().unwrap();
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(1, 4), q(1, 2), q(1, 4)][..]));
        assert!(c.alpha_vanishes_at_minus_one);
        // clause (i) with t = 2, permuted
        let d = decide(FamilyId::W, &["3/4", "1/4", "5/4", "3/4"]);
        let c = d.case().unwrap();
        assert!(c.alpha_vanishes_at_minus_one);
        assert_eq!(c.alpha_degree(), 2);
    }

    #[test]
    fn continuous_hahn_special_point() {
        let d = decide(FamilyId::CH, &["1/4+0.3i", "3/4+0.3i"]);
        let c = d.case().unwrap();
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(1, 4), q(1, 4)][..]));
        assert_eq!(c.beta_exact.as_deref(), Some(&[q(-3, 10)][..]));
        assert!(!decide(FamilyId::CH, &["1/2+0.3i", "1+0.1i"]).is_yes());
    }

    #[test]
    fn chebyshev_is_constant_but_not_vanishing() {
        let d = decide(FamilyId::J, &["1/2", "1/2"]);
        let c = d.case().unwrap();
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(1, 2)][..]));
        assert!(!c.alpha_vanishes_at_minus_one);
    }

    #[test]
    fn lower_families() {
        let c = decide(FamilyId::L, &["0"]).case().cloned().unwrap();
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(1, 1), q(1, 1)][..]));
        let c = decide(FamilyId::M, &["1/4", "1"]).case().cloned().unwrap();
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(2, 3), q(2, 3)][..]));
        let c = decide(FamilyId::MP, &["1/2", "pi/2"]).case().cloned().unwrap();
        assert_eq!(c.beta, vec![0.0]);
        let c = decide(FamilyId::MP, &["1/2", "pi/3"]).case().cloned().unwrap();
        assert!((c.alpha[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let c = decide(FamilyId::HilbertJt, &["-1/2"]).case().cloned().unwrap();
        assert_eq!(c.alpha_exact.as_deref(), Some(&[q(-1, 2), q(1, 2), q(1, 1)][..]));
    }

    #[test]
    fn synthetic_division_and_square_roots() {
        let p = Poly::product(&[lin(G::int(1)), lin(G::int(1)), lin(G::frac(1, 3))]);
        assert!(p.divide_root(&G::int(-1)).is_some());
        assert!(p.divide_root(&G::int(1)).is_none());
        let sq = p.mul(&p);
        assert_eq!(sq.monic_sqrt(), Some(p.clone()));
        assert!(p.monic_sqrt().is_none());
    }
}
