//! Predicted Hankel commutants and their closed-form bases.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{is_polynomial_case, FamilyId, Param, ValidatedFamily};
use crate::numerics::Real;
use crate::{Error, Result};

/// One clause per family of the dimension theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl Clause {
    pub const ALL: [Clause; 9] =
        [Clause::I, Clause::II, Clause::III, Clause::IV, Clause::V, Clause::VI, Clause::VII, Clause::VIII, Clause::IX];

    pub fn label(self) -> &'static str {
        match self {
            Clause::I => "i",
            Clause::II => "ii",
            Clause::III => "iii",
            Clause::IV => "iv",
            Clause::V => "v",
            Clause::VI => "vi",
            Clause::VII => "vii",
            Clause::VIII => "viii",
            Clause::IX => "ix",
        }
    }

    /// The clause governing a family; `J_t` is read through the continuous
    /// dual Hahn clause it specializes.
    pub fn for_family(id: FamilyId) -> Clause {
        match id {
            FamilyId::W => Clause::I,
            FamilyId::CdH | FamilyId::HilbertJt => Clause::II,
            FamilyId::CH => Clause::III,
            FamilyId::J => Clause::IV,
            FamilyId::MP => Clause::V,
            FamilyId::M => Clause::VI,
            FamilyId::L => Clause::VII,
            FamilyId::C => Clause::VIII,
            FamilyId::H => Clause::IX,
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Clause {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Clause::ALL
            .into_iter()
            .find(|c| c.label() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown clause {s:?} (expected i..ix)")))
    }
}

impl Serialize for Clause {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// Pairs of closed-form sequences spanning a two-dimensional commutant.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BasisKind {
    /// `(-1)^k / (k + t)` and `(-1)^k`.
    AlternatingHarmonic { t: Param },
    /// `sin(k pi/2)` and `cos(k pi/2)`.
    QuarterTurn,
    /// `sin(k phi)` and `cos(k phi)`.
    Trigonometric { phi: Param },
    /// `(-1)^k c^{k/2}` and `(-1)^k c^{-k/2}`.
    Geometric { c: Param },
    /// `(-1)^k` and `(-1)^k k`.
    LinearAlternating,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormBasis {
    #[serde(flatten)]
    pub kind: BasisKind,
    pub clause: Clause,
}

impl ClosedFormBasis {
    pub fn formulas(&self) -> (String, String) {
        match &self.kind {
            BasisKind::AlternatingHarmonic { t } => (format!("(-1)^k/(k+{t})"), "(-1)^k".into()),
            BasisKind::QuarterTurn => ("sin(k pi/2)".into(), "cos(k pi/2)".into()),
            BasisKind::Trigonometric { phi } => (format!("sin(k*{phi})"), format!("cos(k*{phi})")),
            BasisKind::Geometric { c } => (format!("(-1)^k ({c})^(k/2)"), format!("(-1)^k ({c})^(-k/2)")),
            BasisKind::LinearAlternating => ("(-1)^k".into(), "(-1)^k k".into()),
        }
    }

    /// The first `len` entries of both sequences.
    pub fn materialize<S: Real>(&self, ctx: &S::Context, len: usize) -> Result<(Vec<S>, Vec<S>)> {
        let mut h1 = Vec::with_capacity(len);
        let mut h2 = Vec::with_capacity(len);
        for k in 0..len {
            let (a, b) = closed_form_eval::<S>(self, k, ctx)?;
            h1.push(a);
            h2.push(b);
        }
        Ok((h1, h2))
    }
}

/// `(h1_k, h2_k)` of a closed-form basis.
pub fn closed_form_eval<S: Real>(basis: &ClosedFormBasis, k: usize, ctx: &S::Context) -> Result<(S, S)> {
    let ki = k as i64;
    let sign = if k % 2 == 0 { S::one(ctx) } else { -S::one(ctx) };
    match &basis.kind {
        BasisKind::AlternatingHarmonic { t } => {
            let denom = S::from_i64(ctx, ki) + &t.to_real::<S>(ctx)?;
            if denom.is_zero() {
                return Err(Error::DegenerateDenominator(format!("k + t = 0 at k = {k}")));
            }
            Ok((sign.clone() / denom, sign))
        }
        BasisKind::QuarterTurn => {
            let quarter = Param::PiMultiple(BigRational::new(1.into(), 2.into()));
            quarter.scaled_sin_cos::<S>(ctx, ki)
        }
        BasisKind::Trigonometric { phi } => phi.scaled_sin_cos::<S>(ctx, ki),
        BasisKind::Geometric { c } => {
            let root = c.to_real::<S>(ctx)?.sqrt()?;
            let up = root.powi(k as i32);
            let down = S::one(ctx) / &up;
            Ok((sign.clone() * &up, sign * &down))
        }
        BasisKind::LinearAlternating => Ok((sign.clone(), sign * &S::from_i64(ctx, ki))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremPrediction {
    pub clause: Clause,
    pub dim: usize,
    pub basis: Option<ClosedFormBasis>,
    /// False when the parameters match the clause only algebraically.
    pub in_stated_domain: bool,
    /// Dimension implied by the polynomial criterion: both coefficient
    /// sequences polynomial in `n` and `alpha` vanishing at `n = -1`.
    pub polynomial_criterion_dim: usize,
    pub note: Option<String>,
}

const MATCH_TOL: f64 = 1e-9;

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= MATCH_TOL * y.abs().max(1.0)
}

fn real_f64s(fam: &ValidatedFamily) -> Option<Vec<f64>> {
    fam.params()
        .iter()
        .map(|p| {
            let (re, im) = p.to_complex_f64();
            close(im, 0.0).then_some(re)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn rational_of(p: &Param) -> BigRational {
    p.as_rational().cloned().unwrap_or_else(BigRational::zero)
}

/// Finds `t` for the Wilson clause: a permutation of
/// `(3/4, t/2 + 1/4, t/2 - 1/4, 1/4)`.
fn match_wilson(fam: &ValidatedFamily) -> Option<BigRational> {
    let v = real_f64s(fam)?;
    let quarter = BigRational::new(1.into(), 4.into());
    permutations(4).into_iter().find_map(|perm| {
        let (a, b, c, d) = (v[perm[0]], v[perm[1]], v[perm[2]], v[perm[3]]);
        let t = 2.0 * b - 0.5;
        (close(a, 0.75) && close(d, 0.25) && close(c, t / 2.0 - 0.25))
            .then(|| (rational_of(&fam.params()[perm[1]]) - &quarter) * BigRational::from_integer(2.into()))
    })
}

/// Finds `t` for the continuous dual Hahn clause `(1/2, 1/2, t - 1/2)`.
fn match_dual_hahn(fam: &ValidatedFamily) -> Option<BigRational> {
    let v = real_f64s(fam)?;
    let half = BigRational::new(1.into(), 2.into());
    permutations(3).into_iter().find_map(|perm| {
        (close(v[perm[0]], 0.5) && close(v[perm[1]], 0.5)).then(|| rational_of(&fam.params()[perm[2]]) + &half)
    })
}

fn match_continuous_hahn(fam: &ValidatedFamily) -> bool {
    let (ar, ai) = fam.params()[0].to_complex_f64();
    let (br, bi) = fam.params()[1].to_complex_f64();
    close(ai, bi) && ((close(ar, 0.25) && close(br, 0.75)) || (close(ar, 0.75) && close(br, 0.25)))
}

/// Matches the family against the clauses of the dimension theorem.
pub fn theorem_prediction(fam: &ValidatedFamily) -> TheoremPrediction {
    let id = fam.id();
    let clause = Clause::for_family(id);
    let poly = is_polynomial_case(fam);
    let polynomial_criterion_dim = match poly.case() {
        Some(c) if c.alpha_vanishes_at_minus_one => 2,
        _ => 0,
    };
    let p = fam.params();
    let mut in_stated_domain = true;
    let mut note = None;
    let kind = match id {
        FamilyId::W => match_wilson(fam).map(|t| {
            in_stated_domain = t.is_positive();
            BasisKind::AlternatingHarmonic { t: Param::Real(t) }
        }),
        FamilyId::CdH => match_dual_hahn(fam).map(|t| {
            in_stated_domain = t.is_positive();
            BasisKind::AlternatingHarmonic { t: Param::Real(t) }
        }),
        FamilyId::HilbertJt => {
            let t = rational_of(&p[0]);
            in_stated_domain = t.is_positive();
            note = Some(
                "J_t is the continuous dual Hahn matrix at (1/2, 1/2, t - 1/2) shifted by a multiple of the identity"
                    .into(),
            );
            Some(BasisKind::AlternatingHarmonic { t: Param::Real(t) })
        }
        FamilyId::CH => match_continuous_hahn(fam).then_some(BasisKind::QuarterTurn),
        FamilyId::MP => close(p[0].re_f64(), 0.5).then(|| BasisKind::Trigonometric { phi: p[1].clone() }),
        FamilyId::M => close(p[1].re_f64(), 1.0).then(|| BasisKind::Geometric { c: p[0].clone() }),
        FamilyId::L => close(p[0].re_f64(), 0.0).then_some(BasisKind::LinearAlternating),
        FamilyId::J | FamilyId::C => None,
        FamilyId::H => {
            note = Some(
                "the printed clause claims dimension 2, but alpha_n = sqrt((n+1)/2) is not polynomial in n".into(),
            );
            Some(BasisKind::QuarterTurn)
        }
    };
    if !in_stated_domain && note.is_none() {
        note = Some("parameters match the clause algebraically but lie outside its stated domain".into());
    }
    TheoremPrediction {
        clause,
        dim: if kind.is_some() { 2 } else { 0 },
        basis: kind.map(|kind| ClosedFormBasis { kind, clause }),
        in_stated_domain,
        polynomial_criterion_dim,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::numerics::Rational;

    fn predict(id: FamilyId, lits: &[&str]) -> TheoremPrediction {
        let f = FamilySpec::from_literals(id, lits).unwrap().validate().unwrap();
        theorem_prediction(&f)
    }

    #[test]
    fn wilson_clause_any_order() {
        for lits in [["3/4", "3/4", "1/4", "1/4"], ["1/4", "3/4", "1/4", "3/4"], ["1/4", "1/4", "3/4", "3/4"]] {
            let p = predict(FamilyId::W, &lits);
            assert_eq!(p.dim, 2);
            assert_eq!(p.polynomial_criterion_dim, 2);
            let b = p.basis.unwrap();
            assert_eq!(b.kind, BasisKind::AlternatingHarmonic { t: Param::integer(1) });
        }
        let p = predict(FamilyId::W, &["3/4", "5/4", "3/4", "1/4"]);
        assert_eq!(p.basis.unwrap().kind, BasisKind::AlternatingHarmonic { t: Param::integer(2) });
        assert_eq!(predict(FamilyId::W, &["1", "2", "3", "4"]).dim, 0);
    }

    #[test]
    fn family_clauses() {
        assert_eq!(predict(FamilyId::J, &["0.3", "0.7"]).dim, 0);
        assert_eq!(predict(FamilyId::C, &["1"]).dim, 0);
        let p = predict(FamilyId::M, &["1/4", "1"]);
        assert_eq!(p.dim, 2);
        assert_eq!(p.basis.unwrap().kind, BasisKind::Geometric { c: Param::rational(1, 4) });
        assert_eq!(predict(FamilyId::CH, &["3/4+0.3i", "1/4+0.3i"]).dim, 2);
        assert_eq!(predict(FamilyId::CH, &["3/4+0.3i", "1/4+0.2i"]).dim, 0);
        assert_eq!(predict(FamilyId::MP, &["1/2", "pi/3"]).dim, 2);
        assert_eq!(predict(FamilyId::MP, &["0.8", "1.0"]).dim, 0);
        assert_eq!(predict(FamilyId::L, &["0"]).dim, 2);
        assert_eq!(predict(FamilyId::CdH, &["1/2", "1.5", "1/2"]).dim, 2);
    }

    #[test]
    fn hermite_claim_conflicts_with_criterion() {
        let p = predict(FamilyId::H, &[]);
        assert_eq!(p.dim, 2);
        assert_eq!(p.polynomial_criterion_dim, 0);
        assert!(p.note.is_some());
        let mp = predict(FamilyId::MP, &["1/2", "pi/2"]);
        assert_eq!(mp.polynomial_criterion_dim, 2);
    }

    #[test]
    fn hilbert_companion_outside_domain() {
        let p = predict(FamilyId::HilbertJt, &["-0.5"]);
        assert_eq!(p.dim, 2);
        assert!(!p.in_stated_domain);
        assert!(predict(FamilyId::HilbertJt, &["2.7"]).in_stated_domain);
    }

    #[test]
    fn closed_form_values() {
        let b = ClosedFormBasis { kind: BasisKind::AlternatingHarmonic { t: Param::integer(2) }, clause: Clause::II };
        assert_eq!(closed_form_eval::<Rational>(&b, 1, &()).unwrap(), (Rational::new(-1, 3), Rational::new(-1, 1)));
        let b = ClosedFormBasis { kind: BasisKind::Trigonometric { phi: "pi/3".parse().unwrap() }, clause: Clause::V };
        let (s, c) = closed_form_eval::<f64>(&b, 2, &()).unwrap();
        assert!((s - 3f64.sqrt() / 2.0).abs() < 1e-15 && (c + 0.5).abs() < 1e-15);
        let b = ClosedFormBasis { kind: BasisKind::LinearAlternating, clause: Clause::VII };
        assert_eq!(closed_form_eval::<f64>(&b, 0, &()).unwrap(), (1.0, 0.0));
        assert_eq!(closed_form_eval::<f64>(&b, 3, &()).unwrap(), (-1.0, -3.0));
        let b = ClosedFormBasis { kind: BasisKind::Geometric { c: Param::rational(1, 4) }, clause: Clause::VI };
        assert_eq!(closed_form_eval::<Rational>(&b, 3, &()).unwrap(), (Rational::new(-1, 8), Rational::new(-8, 1)));
        let b = ClosedFormBasis { kind: BasisKind::QuarterTurn, clause: Clause::III };
        assert_eq!(closed_form_eval::<Rational>(&b, 3, &()).unwrap(), (Rational::new(-1, 1), Rational::new(0, 1)));
    }

    #[test]
    fn clause_labels_parse() {
        for c in Clause::ALL {
            assert_eq!(c.label().parse::<Clause>().unwrap(), c);
        }
        assert!("x".parse::<Clause>().is_err());
    }
}
