//! Batch comparison of measured commutants with the dimension theorem.

use serde::Serialize;

use super::commutant::{commutant_report, Agreement, CommutantReport};
use crate::families::{Clause, FamilyId, FamilySpec};
use crate::numerics::PrecisionContext;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimSample {
    pub clause: Clause,
    pub family: FamilySpec,
    /// Whether the point lies on the clause's dimension-two variety.
    pub on_variety: bool,
}

impl ClaimSample {
    fn new(id: FamilyId, lits: &[&str], on_variety: bool) -> Self {
        ClaimSample {
            clause: Clause::for_family(id),
            family: FamilySpec::from_literals(id, lits).expect("built-in sample parses"),
            on_variety,
        }
    }
}

/// At least one point on and off the special variety for every clause.
pub fn default_claim_samples() -> Vec<ClaimSample> {
    use FamilyId::*;
    vec![
        ClaimSample::new(W, &["3/4", "3/4", "1/4", "1/4"], true),
        ClaimSample::new(W, &["3/4", "5/4", "3/4", "1/4"], true),
        ClaimSample::new(W, &["1", "2", "3", "4"], false),
        ClaimSample::new(CdH, &["1/2", "1/2", "1.5"], true),
        ClaimSample::new(CdH, &["0.7", "0.9", "1.1"], false),
        ClaimSample::new(CH, &["1/4+0.3i", "3/4+0.3i"], true),
        ClaimSample::new(CH, &["1/2+0.3i", "1+0.1i"], false),
        ClaimSample::new(J, &["0.3", "0.7"], false),
        ClaimSample::new(J, &["-1/2", "-1/2"], false),
        ClaimSample::new(MP, &["1/2", "pi/3"], true),
        ClaimSample::new(MP, &["1/2", "pi/2"], true),
        ClaimSample::new(MP, &["0.8", "1.0"], false),
        ClaimSample::new(M, &["1/2", "1"], true),
        ClaimSample::new(M, &["1/4", "1"], true),
        ClaimSample::new(M, &["0.5", "2"], false),
        ClaimSample::new(L, &["0"], true),
        ClaimSample::new(L, &["0.5"], false),
        ClaimSample::new(C, &["2.0"], false),
        ClaimSample::new(C, &["1"], false),
        ClaimSample::new(H, &[], true),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub clause: Clause,
    pub on_variety: bool,
    pub report: CommutantReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub agreements: usize,
    pub disagreements: usize,
    pub outside_domain: usize,
    pub instabilities: usize,
    /// Clauses with at least one disagreement, in order.
    pub disagreeing_clauses: Vec<Clause>,
}

impl VerifySummary {
    pub fn line(&self) -> String {
        format!("agreements {} / disagreements {}", self.agreements, self.disagreements)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub reports: Vec<ClaimReport>,
    pub summary: VerifySummary,
}

/// Runs one commutant per sample whose clause passes `clauses` (all when
/// `None`), on up to `jobs` threads. Report order follows `samples`.
pub fn verify_all_claims(
    k: usize,
    tol: Option<f64>,
    precision: &PrecisionContext,
    samples: &[ClaimSample],
    clauses: Option<&[Clause]>,
    jobs: usize,
) -> Result<VerifyOutcome> {
    let selected: Vec<&ClaimSample> =
        samples.iter().filter(|s| clauses.map_or(true, |c| c.contains(&s.clause))).collect();
    let run = |s: &ClaimSample| -> Result<ClaimReport> {
        let fam = s.family.validate()?;
        Ok(ClaimReport {
            clause: s.clause,
            on_variety: s.on_variety,
            report: commutant_report(&fam, k, tol, precision)?,
        })
    };
    let jobs = jobs.max(1).min(selected.len().max(1));
    let results: Vec<Result<ClaimReport>> = if jobs == 1 {
        selected.iter().map(|s| run(s)).collect()
    } else {
        let chunk = selected.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = selected
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(|s| run(s)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("claim worker panicked")).collect()
        })
    };
    let reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut summary = VerifySummary::default();
    for r in &reports {
        match r.report.agreement {
            Agreement::Agrees => summary.agreements += 1,
            Agreement::Disagrees => {
                summary.disagreements += 1;
                if !summary.disagreeing_clauses.contains(&r.clause) {
                    summary.disagreeing_clauses.push(r.clause);
                }
            }
            Agreement::OutsideDomain => summary.outside_domain += 1,
        }
        summary.instabilities += usize::from(r.report.instability);
    }
    Ok(VerifyOutcome { reports, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_cover_every_clause_both_ways() {
        let s = default_claim_samples();
        for c in Clause::ALL {
            assert!(s.iter().any(|x| x.clause == c), "clause {c} missing");
        }
        for c in [Clause::I, Clause::II, Clause::III, Clause::V, Clause::VI, Clause::VII] {
            assert!(s.iter().any(|x| x.clause == c && x.on_variety));
            assert!(s.iter().any(|x| x.clause == c && !x.on_variety));
        }
        for x in &s {
            x.family.validate().unwrap();
        }
    }

    #[test]
    fn filtered_run_in_binary64() {
        let p = PrecisionContext::binary64();
        let out =
            verify_all_claims(16, None, &p, &default_claim_samples(), Some(&[Clause::VII, Clause::VIII]), 2).unwrap();
        assert_eq!(out.reports.len(), 4);
        assert_eq!(out.summary.agreements, 4);
        assert_eq!(out.reports[0].report.family.id(), FamilyId::L);
    }
}
