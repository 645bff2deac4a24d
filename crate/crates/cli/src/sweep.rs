//! Parameter sweeps. Grid values are exact rationals, so a grid with step
//! `0.1` lands exactly on `1/2`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use askey_hankel::commutation::commutant_report;
use askey_hankel::families::{parse_rational, FamilyId, FamilySpec, Param};
use askey_hankel::numerics::PrecisionContext;
use askey_hankel::obstructions::{obstruction_grid_report, GridSpec, Quantity};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::report::{cell, csv_table, ReportDocument};
use crate::{CliError, Output, EXIT_NUMERICAL, EXIT_OK};

const MAX_POINTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Metric {
    /// Measured commutant dimension.
    #[value(name = "commutant-dim")]
    #[serde(rename = "commutant-dim")]
    CommutantDim,
    /// Smallest relative singular value of the commutation system.
    #[value(name = "min-singular-value")]
    #[serde(rename = "min-singular-value")]
    MinSingularValue,
    /// Largest relative `|D(m,n)|` over `0 <= m <= 10`, `2 <= n <= 60`.
    #[value(name = "max-D", alias = "max-d")]
    #[serde(rename = "max-D")]
    MaxD,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::CommutantDim => "commutant-dim",
            Metric::MinSingularValue => "min-singular-value",
            Metric::MaxD => "max-D",
        }
    }
}

/// One varied parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<BigRational>,
}

/// Parses `name=start..stop:step` (inclusive, step > 0).
pub fn parse_axis(s: &str) -> Result<Axis, CliError> {
    let bad = |why: &str| CliError::input(format!("bad --vary {s:?}: {why} (expected name=start..stop:step)"));
    let (name, range) = s.split_once('=').ok_or_else(|| bad("missing '='"))?;
    let (span, step) = range.split_once(':').ok_or_else(|| bad("missing ':step'"))?;
    let (a, b) = span.split_once("..").ok_or_else(|| bad("missing '..'"))?;
    let q = |t: &str| parse_rational(t.trim()).map_err(|_| bad(&format!("{t:?} is not a real number")));
    let (start, stop, step) = (q(a)?, q(b)?, q(step)?);
    if !step.is_positive() {
        return Err(bad("step must be positive"));
    }
    let mut values = Vec::new();
    let mut x = start;
    while x <= stop {
        if values.len() == MAX_POINTS {
            return Err(bad("too many points"));
        }
        values.push(x.clone());
        x += &step;
    }
    Ok(Axis { name: name.trim().to_string(), values })
}

fn fixed_params(text: Option<&str>) -> Result<BTreeMap<String, Param>, CliError> {
    let mut out = BTreeMap::new();
    for item in text.unwrap_or("").split([',', ';']).map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("sweep parameters must be named, got {item:?}")))?;
        out.insert(k.trim().to_string(), v.parse::<Param>()?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub point: BTreeMap<String, f64>,
    pub value: Option<f64>,
    pub note: Option<String>,
    #[serde(skip)]
    instability: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub family: FamilyId,
    pub axes: Vec<String>,
    pub metric: Metric,
    pub rows: Vec<SweepRow>,
}

fn evaluate(
    spec: &FamilySpec,
    metric: Metric,
    cfg: &RunConfig,
    precision: &PrecisionContext,
) -> (Option<f64>, Option<String>, bool) {
    let fam = match spec.validate() {
        Ok(f) => f,
        Err(e) => return (None, Some(e.to_string()), false),
    };
    let run = || -> askey_hankel::Result<(Option<f64>, Option<String>, bool)> {
        Ok(match metric {
            Metric::CommutantDim | Metric::MinSingularValue => {
                let r = commutant_report(&fam, cfg.order(), cfg.tol, precision)?;
                let note = r.instability.then(|| format!("nullspace dimension {}", r.nullspace.dim));
                let v = match metric {
                    Metric::CommutantDim => Some(r.measured_dim as f64),
                    _ => r.nullspace.smallest_sigma,
                };
                (v, note, r.instability)
            }
            Metric::MaxD => {
                let g = obstruction_grid_report(&fam, &GridSpec::new(Quantity::D, (0, 10), (2, 60)), precision)?;
                (Some(g.max_relative), None, false)
            }
        })
    };
    run().unwrap_or_else(|e| (None, Some(e.to_string()), false))
}

/// Mixed-radix enumeration: the last axis varies fastest.
fn point_at(axes: &[Axis], mut index: usize) -> Vec<usize> {
    let mut idx = vec![0; axes.len()];
    for (i, a) in axes.iter().enumerate().rev() {
        idx[i] = index % a.values.len();
        index /= a.values.len();
    }
    idx
}

pub fn sweep(cfg: &RunConfig, vary: &[String], metric: Metric) -> Result<SweepResult, CliError> {
    let family: FamilyId = cfg.family.as_deref().ok_or_else(|| CliError::input("--family is required"))?.parse()?;
    let axes = vary.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
    let fixed = fixed_params(cfg.params.as_deref())?;
    for a in &axes {
        if !family.param_names().contains(&a.name.as_str()) {
            return Err(CliError::input(format!(
                "{family} has no parameter {:?} (expected {})",
                a.name,
                family.param_names().join(", ")
            )));
        }
        if fixed.contains_key(&a.name) {
            return Err(CliError::input(format!("{} is both fixed and varied", a.name)));
        }
    }
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    if axes.is_empty() || total == 0 {
        return Err(CliError::input("the sweep grid is empty"));
    }
    if total > MAX_POINTS {
        return Err(CliError::input(format!("the sweep grid has {total} points (limit {MAX_POINTS})")));
    }
    let precision = cfg.precision_context()?;
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(usize, SweepRow)>> = Mutex::new(Vec::with_capacity(total));
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= total {
            break;
        }
        let idx = point_at(&axes, i);
        let mut named = fixed.clone();
        let mut point = BTreeMap::new();
        for (a, &k) in axes.iter().zip(&idx) {
            let v = &a.values[k];
            named.insert(a.name.clone(), Param::Real(v.clone()));
            point.insert(a.name.clone(), v.to_f64().unwrap_or(f64::NAN));
        }
        let row = match FamilySpec::from_named(family, named) {
            Ok(spec) => {
                let (value, note, instability) = evaluate(&spec, metric, cfg, &precision);
                SweepRow { point, value, note, instability }
            }
            Err(e) => SweepRow { point, value: None, note: Some(e.to_string()), instability: false },
        };
        done.lock().expect("sweep worker panicked").push((i, row));
    };
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs().min(total) {
            s.spawn(work);
        }
    });
    let mut rows = done.into_inner().expect("sweep worker panicked");
    rows.sort_by_key(|(i, _)| *i);
    Ok(SweepResult {
        family,
        axes: axes.iter().map(|a| a.name.clone()).collect(),
        metric,
        rows: rows.into_iter().map(|(_, r)| r).collect(),
    })
}

pub fn run(cfg: &RunConfig, vary: &[String], metric: Metric) -> Result<Output, CliError> {
    let res = sweep(cfg, vary, metric)?;
    let text = match cfg.format {
        Some(Format::Json) => ReportDocument::new("sweep", cfg, &res).to_json(),
        _ => {
            let mut header: Vec<&str> = res.axes.iter().map(String::as_str).collect();
            header.push(metric.label());
            header.push("note");
            let rows: Vec<Vec<String>> = res
                .rows
                .iter()
                .map(|r| {
                    let mut v: Vec<String> = res.axes.iter().map(|a| format!("{}", r.point[a])).collect();
                    v.push(
                        r.value
                            .map(|x| if metric == Metric::CommutantDim { format!("{x}") } else { cell(x) })
                            .unwrap_or_default(),
                    );
                    v.push(r.note.clone().unwrap_or_default());
                    v
                })
                .collect();
            csv_table(&header, &rows)
        }
    };
    let unstable = res.rows.iter().filter(|r| r.instability).count();
    let mut notes = Vec::new();
    let code = if unstable > 0 {
        notes.push(format!("{unstable} grid point(s) where the two solvers disagree"));
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    };
    Ok(Output { text, code, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn axis_is_exact() {
        let a = parse_axis("lambda=0.1..1.0:0.1").unwrap();
        assert_eq!(a.values.len(), 10);
        assert_eq!(a.values[4], BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_axis("alpha=-0.5..1.0:0.5").unwrap().values.len(), 4);
        assert!(parse_axis("alpha=1..0:0.5").unwrap().values.is_empty());
        assert!(parse_axis("alpha=0..1:0").is_err());
        assert!(parse_axis("alpha=0..1").is_err());
    }

    #[test]
    fn enumeration_order() {
        let ax = |n: usize| Axis { name: String::new(), values: vec![BigRational::zero(); n] };
        let axes = [ax(2), ax(3)];
        let order: Vec<Vec<usize>> = (0..6).map(|i| point_at(&axes, i)).collect();
        assert_eq!(order[0], vec![0, 0]);
        assert_eq!(order[1], vec![0, 1]);
        assert_eq!(order[3], vec![1, 0]);
    }
}
