//! One function per subcommand. Each returns the text to emit and an exit code.

use std::path::Path;

use askey_hankel::commutation::{
    commutant_report, default_claim_samples, hilbert_demo, verify_all_claims, Agreement, CommutantReport,
};
use askey_hankel::families::{Clause, FamilyId, FamilySpec, Jacobi, Param, ValidatedFamily};
use askey_hankel::laurent::{classify_limit, ClassifyOptions, LaurentSeries, LimitClassification};
use askey_hankel::numerics::{PrecisionContext, PrecisionVisitor, Real};
use askey_hankel::obstructions::{
    asymptotic_claims_check, decay_study, obstruction_grid_report, omega_decay_fit, AsymptoticClaim, DecayStudy,
    GridSpec, OmegaDecay, Quantity, DEFAULT_DECAY_MS,
};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::report::{cell, csv_table, opt_cell, ReportDocument};
use crate::{CliError, Output, EXIT_NUMERICAL, EXIT_OK};

fn emit(cfg: &RunConfig, command: &str, results: impl Serialize, csv: impl FnOnce() -> String) -> String {
    match cfg.format {
        Some(Format::Csv) => csv(),
        _ => ReportDocument::new(command, cfg, results).to_json(),
    }
}

pub fn family_from(cfg: &RunConfig) -> Result<FamilySpec, CliError> {
    let id: FamilyId = cfg.family.as_deref().ok_or_else(|| CliError::input("--family is required"))?.parse()?;
    Ok(FamilySpec::parse(id, cfg.params.as_deref().unwrap_or(""))?)
}

fn validated(cfg: &RunConfig) -> Result<ValidatedFamily, CliError> {
    Ok(family_from(cfg)?.validate()?)
}

/// Inclusive `a..b`.
pub fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::input(format!("expected an inclusive range a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Serialize)]
struct FamilyRow {
    id: FamilyId,
    name: &'static str,
    params: &'static [&'static str],
    domain: &'static str,
}

pub fn families(cfg: &RunConfig, filter: Option<&str>) -> Result<Output, CliError> {
    let ids: Vec<FamilyId> = match filter {
        Some(f) => vec![f.parse()?],
        None => FamilyId::ALL.to_vec(),
    };
    let rows: Vec<FamilyRow> = ids
        .iter()
        .map(|&id| FamilyRow { id, name: id.name(), params: id.param_names(), domain: id.constraint_text() })
        .collect();
    let text = match cfg.format {
        None => {
            let mut s = format!("{:<10} {:<36} {:<14} {}\n", "id", "name", "params", "domain");
            for r in &rows {
                s += &format!("{:<10} {:<36} {:<14} {}\n", r.id.code(), r.name, r.params.join(","), r.domain);
            }
            s
        }
        Some(_) => emit(cfg, "families", &rows, || {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.id.code().into(), r.name.into(), r.params.join(","), r.domain.into()])
                .collect();
            csv_table(&["id", "name", "params", "domain"], &body)
        }),
    };
    Ok(Output::ok(text))
}

pub const COMMUTANT_CSV_HEADER: [&str; 11] = [
    "family",
    "precision",
    "K",
    "measured_dim",
    "nullspace_dim",
    "predicted_dim",
    "clause",
    "agreement",
    "instability",
    "max_relative_residual",
    "subspace_angle",
];

fn agreement_label(a: Agreement) -> &'static str {
    match a {
        Agreement::Agrees => "agrees",
        Agreement::Disagrees => "disagrees",
        Agreement::OutsideDomain => "outside-domain",
    }
}

pub fn commutant_row(r: &CommutantReport) -> Vec<String> {
    vec![
        r.family.to_string(),
        r.precision.to_string(),
        r.k.to_string(),
        r.measured_dim.to_string(),
        r.nullspace.dim.to_string(),
        r.prediction.dim.to_string(),
        r.prediction.clause.to_string(),
        agreement_label(r.agreement).into(),
        r.instability.to_string(),
        opt_cell(r.max_relative_residual),
        opt_cell(r.subspace_angle),
    ]
}

fn discrepancy_note(r: &CommutantReport) -> Option<String> {
    (r.agreement == Agreement::Disagrees).then(|| {
        format!(
            "{}: measured dimension {} but clause ({}) predicts {}{}",
            r.family,
            r.measured_dim,
            r.prediction.clause,
            r.prediction.dim,
            r.prediction.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        )
    })
}

pub fn commutant(cfg: &RunConfig) -> Result<Output, CliError> {
    let fam = validated(cfg)?;
    let precision = cfg.precision_context()?;
    let r = commutant_report(&fam, cfg.order(), cfg.tol, &precision)?;
    let text = emit(cfg, "commutant", &r, || csv_table(&COMMUTANT_CSV_HEADER, &[commutant_row(&r)]));
    let mut notes: Vec<String> = discrepancy_note(&r).into_iter().collect();
    let code = if r.instability {
        notes.push(format!(
            "solver disagreement: recurrence gives dimension {}, nullspace gives {}",
            r.measured_dim, r.nullspace.dim
        ));
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    };
    Ok(Output { text, code, notes })
}

pub fn verify(cfg: &RunConfig, clauses: Option<&[String]>) -> Result<Output, CliError> {
    let precision = cfg.precision_context()?;
    let filter = clauses
        .map(|cs| cs.iter().map(|c| c.parse::<Clause>()).collect::<askey_hankel::Result<Vec<_>>>())
        .transpose()?;
    let out =
        verify_all_claims(cfg.order(), cfg.tol, &precision, &default_claim_samples(), filter.as_deref(), cfg.jobs())?;
    let text = emit(cfg, "verify", &out, || {
        let rows: Vec<Vec<String>> = out.reports.iter().map(|r| commutant_row(&r.report)).collect();
        csv_table(&COMMUTANT_CSV_HEADER, &rows)
    });
    let mut notes = vec![out.summary.line()];
    notes.extend(out.reports.iter().filter_map(|r| discrepancy_note(&r.report)));
    let code = if out.summary.instabilities > 0 { EXIT_NUMERICAL } else { EXIT_OK };
    Ok(Output { text, code, notes })
}

pub struct ObstructOptions<'a> {
    pub quantity: &'a str,
    /// Defaults to `0..8` for grids and a geometric m-grid up to 64 for decay fits.
    pub m: Option<&'a str>,
    pub n: &'a str,
    pub omega: Option<&'a str>,
    pub decay: bool,
    pub expansions: bool,
}

#[derive(Serialize)]
struct Expansions {
    claims: Vec<AsymptoticClaim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_decay: Option<OmegaDecay>,
}

struct ExpansionRun<'a> {
    fam: &'a ValidatedFamily,
    omega: Option<&'a str>,
}

impl PrecisionVisitor for ExpansionRun<'_> {
    type Output = askey_hankel::Result<Expansions>;
    fn visit<S: Real>(self, ctx: &S::Context, _: &PrecisionContext) -> Self::Output {
        let claims = asymptotic_claims_check::<S>(self.fam, ctx)?;
        let omega_decay = match self.omega {
            Some(w) => {
                let jac = Jacobi::<S>::new(self.fam, ctx)?;
                let omega = w.parse::<Param>()?.to_real::<S>(ctx)?;
                Some(omega_decay_fit(&jac, &omega, 1e3, 1e6, 30)?)
            }
            None => None,
        };
        Ok(Expansions { claims, omega_decay })
    }
}

struct DecayRun<'a> {
    fam: &'a ValidatedFamily,
    ms: Vec<i64>,
}

impl PrecisionVisitor for DecayRun<'_> {
    type Output = askey_hankel::Result<DecayStudy>;
    fn visit<S: Real>(self, ctx: &S::Context, _: &PrecisionContext) -> Self::Output {
        decay_study(&Jacobi::<S>::new(self.fam, ctx)?, self.fam, &self.ms)
    }
}

pub fn obstruct(cfg: &RunConfig, o: &ObstructOptions) -> Result<Output, CliError> {
    let fam = validated(cfg)?;
    let precision = cfg.precision_context()?;
    if o.expansions {
        let e = precision.dispatch(ExpansionRun { fam: &fam, omega: o.omega })?;
        let text = emit(cfg, "obstruct", &e, || {
            let mut rows = Vec::new();
            for c in &e.claims {
                for k in &c.coefficients {
                    rows.push(vec![
                        c.id.clone(),
                        k.power.to_string(),
                        cell(k.expected),
                        cell(k.measured),
                        cell(k.error),
                        c.pass.to_string(),
                        c.flagged.to_string(),
                    ]);
                }
            }
            csv_table(&["claim", "power", "expected", "measured", "error", "pass", "flagged"], &rows)
        });
        let notes = e.claims.iter().filter(|c| c.flagged).filter_map(|c| c.note.clone()).collect();
        return Ok(Output { text, code: EXIT_OK, notes });
    }
    if o.decay {
        let ms: Vec<i64> = match o.m {
            Some(r) => {
                let m = parse_range(r)?;
                (m.0..=m.1).collect()
            }
            None => DEFAULT_DECAY_MS.to_vec(),
        };
        let s = precision.dispatch(DecayRun { fam: &fam, ms })?;
        let text = emit(cfg, "obstruct", &s, || {
            let rows: Vec<Vec<String>> =
                s.ms.iter()
                    .zip(&s.values)
                    .zip(&s.errors)
                    .map(|((m, v), e)| vec![m.to_string(), cell(*v), cell(*e)])
                    .collect();
            csv_table(&["m", "limit", "error_estimate"], &rows)
        });
        let notes = s
            .power_law
            .as_ref()
            .map(|p| {
                format!(
                    "fitted exponent {:.4}, coefficient {:.6e} (predicted m^{} with {:.6e})",
                    p.exponent, s.fitted_coefficient, s.prediction.exponent, s.prediction.coefficient
                )
            })
            .into_iter()
            .collect();
        return Ok(Output { text, code: EXIT_OK, notes });
    }
    let quantity: Quantity = o.quantity.parse()?;
    let m = parse_range(o.m.unwrap_or("0..8"))?;
    let n = parse_range(o.n)?;
    let spec = match quantity {
        Quantity::Omega => {
            let w = o.omega.ok_or_else(|| CliError::input("the omega test needs --omega"))?;
            GridSpec { n_min: n.0, ..GridSpec::omega(w, n.1) }
        }
        q => GridSpec::new(q, m, n),
    };
    let g = obstruction_grid_report(&fam, &spec, &precision)?;
    let text = emit(cfg, "obstruct", &g, || {
        let rows: Vec<Vec<String>> = g
            .samples
            .iter()
            .map(|s| {
                vec![s.m.map(|m| m.to_string()).unwrap_or_default(), s.n.to_string(), cell(s.value), cell(s.scale)]
            })
            .collect();
        csv_table(&["m", "n", "value", "scale"], &rows)
    });
    let notes = vec![format!("{} over {} points: max relative {:e}", g.quantity, g.samples.len(), g.max_relative)];
    Ok(Output { text, code: EXIT_OK, notes })
}

pub fn hilbert(cfg: &RunConfig, t: &str, grid: usize) -> Result<Output, CliError> {
    let precision = cfg.precision_context()?;
    let d = hilbert_demo(t, cfg.k.unwrap_or(64), grid, &precision)?;
    let text = emit(cfg, "hilbert-demo", &d, || {
        csv_table(
            &["t", "precision", "K", "commutator_max_relative", "grid_order", "grid_max_relative"],
            &[vec![
                d.family.params()[0].to_string(),
                d.precision.clone(),
                d.k.to_string(),
                cell(d.commutator_max_relative),
                d.grid_order.to_string(),
                cell(d.grid_max_relative),
            ]],
        )
    });
    Ok(Output::ok(text))
}

pub struct LaurentOptions<'a> {
    pub file: &'a Path,
    pub eps: Option<&'a str>,
    pub w: &'a str,
    pub truncation: usize,
    pub radius: f64,
}

/// Coefficients may be JSON numbers or literal strings such as `"1/3"`.
fn literal(v: &serde_json::Value) -> Result<String, CliError> {
    match v {
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::String(s) => Ok(s.clone()),
        other => Err(CliError::input(format!("expected a number or literal string, got {other}"))),
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesFile {
    p: Vec<serde_json::Value>,
    q: Vec<serde_json::Value>,
    eps: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LaurentInput {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub eps: String,
    pub w: String,
    pub truncation: usize,
    pub radius: f64,
}

#[derive(Serialize)]
struct LaurentResult {
    input: LaurentInput,
    classification: LimitClassification,
}

struct LaurentRun<'a> {
    input: &'a LaurentInput,
    tolerance: f64,
}

impl PrecisionVisitor for LaurentRun<'_> {
    type Output = askey_hankel::Result<LimitClassification>;
    fn visit<S: Real>(self, ctx: &S::Context, _: &PrecisionContext) -> Self::Output {
        let i = self.input;
        let p = LaurentSeries::<S>::parse(ctx, &i.p, i.truncation, i.radius)?;
        let q = LaurentSeries::<S>::parse(ctx, &i.q, i.truncation, i.radius)?;
        let eps = i.eps.parse::<Param>()?.to_real::<S>(ctx)?;
        let w = i.w.parse::<Param>()?.to_real::<S>(ctx)?;
        let opts = ClassifyOptions { tolerance: self.tolerance, ..ClassifyOptions::default() };
        classify_limit(&p, &q, &eps, &w, &opts)
    }
}

pub fn read_series(o: &LaurentOptions) -> Result<LaurentInput, CliError> {
    let text = std::fs::read_to_string(o.file)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", o.file.display())))?;
    let f: SeriesFile =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", o.file.display())))?;
    let eps = match (o.eps, &f.eps) {
        (Some(e), _) => e.to_string(),
        (None, Some(v)) => literal(v)?,
        (None, None) => return Err(CliError::input("eps is neither in the series file nor given with --eps")),
    };
    Ok(LaurentInput {
        p: f.p.iter().map(literal).collect::<Result<_, _>>()?,
        q: f.q.iter().map(literal).collect::<Result<_, _>>()?,
        eps,
        w: o.w.to_string(),
        truncation: o.truncation,
        radius: o.radius,
    })
}

pub fn laurent(cfg: &RunConfig, o: &LaurentOptions) -> Result<Output, CliError> {
    let input = read_series(o)?;
    let precision = cfg.precision_context()?;
    let tolerance = cfg.tol.unwrap_or(ClassifyOptions::default().tolerance);
    let c = precision.dispatch(LaurentRun { input: &input, tolerance })?;
    let text = emit(cfg, "laurent-classify", LaurentResult { input: input.clone(), classification: c.clone() }, || {
        csv_table(
            &["case", "limit_value", "limit_error", "w_used", "decisive_index", "reliable"],
            &[vec![
                c.case.label().into(),
                cell(c.limit_value),
                cell(c.limit_error),
                cell(c.w_used),
                c.decisive_index.map(|k| k.to_string()).unwrap_or_default(),
                c.reliable.to_string(),
            ]],
        )
    });
    Ok(Output::ok(text))
}
