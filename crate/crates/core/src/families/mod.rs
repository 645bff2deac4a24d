//! The nine Askey-scheme families, the Hilbert-matrix companion `J_t`, their
//! parameter domains, and evaluators for the Jacobi coefficients.

mod eval;
mod param;
mod poly;
mod theorem;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub use eval::Jacobi;
pub use param::{parse_rational, Param};
pub use poly::{is_polynomial_case, PolynomialCase, PolynomialDecision};
pub use theorem::{closed_form_eval, theorem_prediction, BasisKind, Clause, ClosedFormBasis, TheoremPrediction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    W,
    CdH,
    CH,
    J,
    MP,
    M,
    L,
    C,
    H,
    HilbertJt,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::W,
        FamilyId::CdH,
        FamilyId::CH,
        FamilyId::J,
        FamilyId::MP,
        FamilyId::M,
        FamilyId::L,
        FamilyId::C,
        FamilyId::H,
        FamilyId::HilbertJt,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FamilyId::W => "W",
            FamilyId::CdH => "CdH",
            FamilyId::CH => "CH",
            FamilyId::J => "J",
            FamilyId::MP => "MP",
            FamilyId::M => "M",
            FamilyId::L => "L",
            FamilyId::C => "C",
            FamilyId::H => "H",
            FamilyId::HilbertJt => "HilbertJt",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::W => "Wilson",
            FamilyId::CdH => "continuous dual Hahn",
            FamilyId::CH => "continuous Hahn",
            FamilyId::J => "Jacobi",
            FamilyId::MP => "Meixner-Pollaczek",
            FamilyId::M => "Meixner",
            FamilyId::L => "Laguerre",
            FamilyId::C => "Charlier",
            FamilyId::H => "Hermite",
            FamilyId::HilbertJt => "generalized Hilbert companion J_t",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyId::W => &["a", "b", "c", "d"],
            FamilyId::CdH => &["a", "b", "c"],
            FamilyId::CH => &["a", "b"],
            FamilyId::J => &["alpha", "beta"],
            FamilyId::MP => &["lambda", "phi"],
            FamilyId::M => &["c", "beta"],
            FamilyId::L => &["alpha"],
            FamilyId::C => &["a"],
            FamilyId::H => &[],
            FamilyId::HilbertJt => &["t"],
        }
    }

    /// Human-readable parameter domain.
    pub fn constraint_text(self) -> &'static str {
        match self {
            FamilyId::W => {
                "Re a,b,c,d > 0 with non-real parameters in conjugate pairs; or, up to permutation, \
                 a < 0 with a+b, a+c, a+d positive or conjugate with positive real parts"
            }
            FamilyId::CdH => {
                "a,b,c > 0 except possibly one conjugate pair with positive real parts; or, up to \
                 permutation, a < 0 with a+b, a+c positive or conjugate with positive real parts"
            }
            FamilyId::CH => "Re a > 0, Re b > 0; c = conj(a), d = conj(b)",
            FamilyId::J => "alpha > -1, beta > -1",
            FamilyId::MP => "lambda > 0, 0 < phi < pi",
            FamilyId::M => "beta > 0, 0 < c < 1",
            FamilyId::L => "alpha > -1",
            FamilyId::C => "a > 0",
            FamilyId::H => "no parameters",
            FamilyId::HilbertJt => "real t, not 0, -1, -2, ...",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        FamilyId::ALL
            .into_iter()
            .find(|id| id.code().to_ascii_lowercase() == key || id.name().to_ascii_lowercase() == key)
            .ok_or_else(|| {
                let codes: Vec<_> = FamilyId::ALL.iter().map(|id| id.code()).collect();
                Error::Invalid(format!("unknown family {s:?}; valid ids: {}", codes.join(", ")))
            })
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// A family together with its parameters in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub params: Vec<Param>,
}

impl FamilySpec {
    pub fn new(id: FamilyId, params: Vec<Param>) -> Result<Self> {
        let want = id.param_names().len();
        if params.len() != want {
            return Err(Error::Invalid(format!(
                "{id} takes {want} parameter(s) ({}), got {}",
                id.param_names().join(", "),
                params.len()
            )));
        }
        Ok(FamilySpec { id, params })
    }

    /// Builds a spec from literal strings in canonical order.
    pub fn from_literals(id: FamilyId, literals: &[&str]) -> Result<Self> {
        let params = literals.iter().map(|s| s.parse()).collect::<Result<Vec<Param>>>()?;
        Self::new(id, params)
    }

    /// Parses `"a=3/4,b=0.75,c=1/4,d=1/4"` (named, any order) or
    /// `"3/4,3/4,1/4,1/4"` (positional).
    pub fn parse(id: FamilyId, text: &str) -> Result<Self> {
        let items: Vec<&str> = text.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.iter().all(|s| !s.contains('=')) {
            return Self::from_literals(id, &items);
        }
        let mut named = BTreeMap::new();
        for item in items {
            let (k, v) =
                item.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {item:?}")))?;
            named.insert(k.trim().to_string(), v.parse::<Param>()?);
        }
        Self::from_named(id, named)
    }

    pub fn from_named(id: FamilyId, mut named: BTreeMap<String, Param>) -> Result<Self> {
        let mut params = Vec::new();
        for name in id.param_names() {
            let p = named.remove(*name).ok_or_else(|| Error::Invalid(format!("{id} is missing parameter {name}")))?;
            params.push(p);
        }
        if let Some(extra) = named.keys().next() {
            return Err(Error::Invalid(format!(
                "{id} has no parameter {extra:?} (expected {})",
                id.param_names().join(", ")
            )));
        }
        Self::new(id, params)
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.id.param_names().iter().position(|n| *n == name).map(|i| &self.params[i])
    }

    pub fn validate(&self) -> Result<ValidatedFamily> {
        validate(self)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.id)?;
        for (i, (name, p)) in self.id.param_names().iter().zip(&self.params).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={p}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Params<'a>(&'a FamilySpec);
        impl Serialize for Params<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let names = self.0.id.param_names();
                let mut map = serializer.serialize_map(Some(names.len()))?;
                for (name, p) in names.iter().zip(&self.0.params) {
                    map.serialize_entry(name, p)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("family", &self.id)?;
        map.serialize_entry("params", &Params(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            family: FamilyId,
            #[serde(default)]
            params: BTreeMap<String, Param>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FamilySpec::from_named(raw.family, raw.params).map_err(D::Error::custom)
    }
}

/// A spec that satisfies its family's parameter domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidatedFamily {
    spec: FamilySpec,
}

impl ValidatedFamily {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn id(&self) -> FamilyId {
        self.spec.id
    }

    pub fn params(&self) -> &[Param] {
        &self.spec.params
    }
}

impl fmt::Display for ValidatedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

type Gaussian = (BigRational, BigRational);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn violation(id: FamilyId, detail: impl Into<String>) -> Error {
    Error::constraint(&format!("{}: {}", id.name(), id.constraint_text()), detail)
}

fn gaussian_params(spec: &FamilySpec) -> Result<Vec<Gaussian>> {
    spec.params
        .iter()
        .zip(spec.id.param_names())
        .map(|(p, name)| {
            p.gaussian().ok_or_else(|| Error::Invalid(format!("{name}={p}: multiples of pi are only accepted for phi")))
        })
        .collect()
}

fn real_params(spec: &FamilySpec) -> Result<Vec<BigRational>> {
    gaussian_params(spec)?
        .into_iter()
        .zip(spec.id.param_names())
        .map(
            |((re, im), name)| {
                if im.is_zero() {
                    Ok(re)
                } else {
                    Err(violation(spec.id, format!("{name} must be real")))
                }
            },
        )
        .collect()
}

/// True when the non-real entries can be paired off as complex conjugates
/// with positive real parts (when `positive_re` is set).
fn conjugate_paired(values: &[Gaussian], positive_re: bool) -> bool {
    let mut open: Vec<&Gaussian> = values.iter().filter(|(_, im)| !im.is_zero()).collect();
    while let Some(z) = open.pop() {
        if positive_re && !z.0.is_positive() {
            return false;
        }
        match open.iter().position(|w| w.0 == z.0 && w.1 == -z.1.clone()) {
            Some(i) => {
                open.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Up to permutation: one real negative parameter whose sums with the others
/// are positive or conjugate pairs with positive real part.
fn negative_alternative(p: &[Gaussian]) -> bool {
    (0..p.len()).any(|i| {
        let (re, im) = &p[i];
        if !im.is_zero() || !re.is_negative() {
            return false;
        }
        let sums: Vec<Gaussian> = (0..p.len()).filter(|&j| j != i).map(|j| (re + &p[j].0, p[j].1.clone())).collect();
        sums.iter().all(|(sr, si)| !si.is_zero() || sr.is_positive()) && conjugate_paired(&sums, true)
    })
}

/// `s` must keep every denominator `2n+s-2, 2n+s-1, 2n+s` away from zero.
fn check_denominator_sum(id: FamilyId, s: &Gaussian) -> Result<()> {
    if s.1.is_zero() && s.0.is_integer() && s.0 <= q(1) {
        return Err(Error::DegenerateDenominator(format!(
            "{}: parameter sum {} makes 2n+s-1 or 2n+s vanish",
            id.name(),
            s.0
        )));
    }
    Ok(())
}

pub fn validate(spec: &FamilySpec) -> Result<ValidatedFamily> {
    let id = spec.id;
    let ok = || Ok(ValidatedFamily { spec: spec.clone() });
    match id {
        FamilyId::W => {
            let p = gaussian_params(spec)?;
            let cond1 = p.iter().all(|(re, _)| re.is_positive()) && conjugate_paired(&p, false);
            if !(cond1 || negative_alternative(&p)) {
                return Err(violation(id, format!("{spec} satisfies neither parameter condition")));
            }
            let s = p.iter().fold((q(0), q(0)), |acc, z| (acc.0 + &z.0, acc.1 + &z.1));
            check_denominator_sum(id, &s)?;
            ok()
        }
        FamilyId::CdH => {
            let p = gaussian_params(spec)?;
            let cond1 = p.iter().all(|(re, im)| !im.is_zero() || re.is_positive()) && conjugate_paired(&p, true);
            if !(cond1 || negative_alternative(&p)) {
                return Err(violation(id, format!("{spec} satisfies neither parameter condition")));
            }
            ok()
        }
        FamilyId::CH => {
            let p = gaussian_params(spec)?;
            if !(p[0].0.is_positive() && p[1].0.is_positive()) {
                return Err(violation(id, "real parts of a and b must be positive"));
            }
            let s = ((&p[0].0 + &p[1].0) * q(2), q(0));
            check_denominator_sum(id, &s)?;
            ok()
        }
        FamilyId::J => {
            let r = real_params(spec)?;
            if r.iter().any(|x| *x <= q(-1)) {
                return Err(violation(id, format!("{spec}")));
            }
            ok()
        }
        FamilyId::MP => {
            let lambda = spec.params[0]
                .gaussian()
                .filter(|(_, im)| im.is_zero())
                .ok_or_else(|| violation(id, "lambda must be a real number"))?
                .0;
            if !lambda.is_positive() {
                return Err(violation(id, format!("lambda = {lambda}")));
            }
            let phi_ok = match &spec.params[1] {
                Param::PiMultiple(k) => k.is_positive() && *k < BigRational::one(),
                Param::Real(x) => x.is_positive() && x.to_f64().is_some_and(|v| v < std::f64::consts::PI),
                Param::Complex { .. } => false,
            };
            if !phi_ok {
                return Err(violation(id, format!("phi = {}", spec.params[1])));
            }
            ok()
        }
        FamilyId::M => {
            let r = real_params(spec)?;
            let (c, beta) = (&r[0], &r[1]);
            if !(c.is_positive() && *c < q(1)) || !beta.is_positive() {
                return Err(violation(id, format!("{spec}")));
            }
            ok()
        }
        FamilyId::L => {
            let r = real_params(spec)?;
            if r[0] <= q(-1) {
                return Err(violation(id, format!("{spec}")));
            }
            ok()
        }
        FamilyId::C => {
            let r = real_params(spec)?;
            if !r[0].is_positive() {
                return Err(violation(id, format!("{spec}")));
            }
            ok()
        }
        FamilyId::H => ok(),
        FamilyId::HilbertJt => {
            let r = real_params(spec)?;
            if r[0].is_integer() && !r[0].is_positive() {
                return Err(violation(id, format!("t = {} is a non-positive integer", r[0])));
            }
            ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(id: FamilyId, lits: &[&str]) -> FamilySpec {
        FamilySpec::from_literals(id, lits).unwrap()
    }

    #[test]
    fn ids_round_trip() {
        assert_eq!(FamilyId::ALL.len(), 10);
        for id in FamilyId::ALL {
            assert_eq!(id.code().parse::<FamilyId>().unwrap(), id);
        }
        assert_eq!("wilson".parse::<FamilyId>().unwrap(), FamilyId::W);
        let err = "Q".parse::<FamilyId>().unwrap_err().to_string();
        assert!(err.contains("HilbertJt"));
    }

    #[test]
    fn parse_named_and_positional() {
        let a = FamilySpec::parse(FamilyId::W, "d=1/4, c=1/4, b=3/4, a=0.75").unwrap();
        let b = FamilySpec::parse(FamilyId::W, "3/4,3/4,1/4,1/4").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.param("b"), Some(&Param::rational(3, 4)));
        assert!(FamilySpec::parse(FamilyId::L, "alpha=0,beta=1").is_err());
        assert!(FamilySpec::parse(FamilyId::L, "").is_err());
        assert_eq!(FamilySpec::parse(FamilyId::H, "").unwrap().params.len(), 0);
    }

    #[test]
    fn serde_round_trip() {
        let s = spec(FamilyId::CH, &["1/4+3/10i", "3/4+3/10i"]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"family":"CH","params":{"a":"1/4+3/10i","b":"3/4+3/10i"}}"#);
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn accepts_documented_points() {
        for (id, lits) in [
            (FamilyId::L, vec!["0"]),
            (FamilyId::CH, vec!["1/4+0.3i", "3/4+0.3i"]),
            (FamilyId::W, vec!["3/4", "3/4", "1/4", "1/4"]),
            (FamilyId::W, vec!["1", "2", "3", "4"]),
            (FamilyId::W, vec!["1+i", "1-i", "2", "3"]),
            (FamilyId::W, vec!["-1/2", "1", "2", "3"]),
            (FamilyId::CdH, vec!["1/2", "1/2", "1.7"]),
            (FamilyId::CdH, vec!["1+i", "1-i", "2"]),
            (FamilyId::MP, vec!["1/2", "pi/3"]),
            (FamilyId::MP, vec!["0.8", "1.0"]),
            (FamilyId::HilbertJt, vec!["-0.5"]),
            (FamilyId::J, vec!["-1/2", "-1/2"]),
        ] {
            let s = spec(id, &lits);
            assert!(s.validate().is_ok(), "{s} rejected: {:?}", s.validate());
        }
    }

    #[test]
    fn signed_alternative_with_conjugate_sums() {
        // a = -1/4, b and c conjugate with positive real parts after shifting
        let s = spec(FamilyId::CdH, &["-1/4", "1+i", "1-i"]);
        assert!(s.validate().is_ok());
        let s = spec(FamilyId::CdH, &["-1", "1/2+i", "1/2-i"]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn rejects_out_of_domain() {
        let err = spec(FamilyId::M, &["1.5", "1"]).validate().unwrap_err();
        match err {
            Error::Constraint { clause, .. } => assert!(clause.contains("Meixner")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(spec(FamilyId::HilbertJt, &["-2"]).validate().is_err());
        assert!(spec(FamilyId::HilbertJt, &["0"]).validate().is_err());
        assert!(spec(FamilyId::J, &["-1", "0"]).validate().is_err());
        assert!(spec(FamilyId::MP, &["1/2", "pi"]).validate().is_err());
        assert!(spec(FamilyId::MP, &["1/2", "3.2"]).validate().is_err());
        assert!(spec(FamilyId::C, &["0"]).validate().is_err());
        assert!(spec(FamilyId::L, &["1+i"]).validate().is_err());
        assert!(spec(FamilyId::W, &["1+i", "1", "2", "3"]).validate().is_err());
        assert!(spec(FamilyId::CH, &["-1/4+i", "1"]).validate().is_err());
        assert!(spec(FamilyId::C, &["pi"]).validate().is_err());
    }

    #[test]
    fn degenerate_denominators() {
        // a = b = 1/4 + it gives a+b+c+d = 1
        let err = spec(FamilyId::CH, &["1/4+0.3i", "1/4+0.3i"]).validate().unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator(_)));
        let err = spec(FamilyId::W, &["-1/4", "5/12", "5/12", "5/12"]).validate().unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator(_)));
    }
}
