//! Run configuration: a flat JSON file whose keys the command-line flags override.

use std::path::{Path, PathBuf};

use askey_hankel::numerics::{PrecisionContext, PrecisionMode};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_K: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Every key is optional; absent keys fall back to defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `f64`, `rational`, or a decimal digit count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<String>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// `name=value` pairs separated by commas, e.g. `"lambda=1/2,phi=pi/3"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Values set in `other` replace ours.
    pub fn overridden_by(mut self, other: &RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$(if other.$f.is_some() { self.$f = other.$f.clone(); })*};
        }
        take!(precision, k, tol, family, params, out, format, jobs);
        self
    }

    pub fn precision_context(&self) -> Result<PrecisionContext, CliError> {
        let ctx = match &self.precision {
            None => PrecisionContext::default(),
            Some(p) => PrecisionContext::new(p.parse::<PrecisionMode>()?)?,
        };
        Ok(match self.tol {
            Some(t) => ctx.with_tolerance(t),
            None => ctx,
        })
    }

    pub fn order(&self) -> usize {
        self.k.unwrap_or(DEFAULT_K)
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"precision": "80", "K": 24, "tol": 1e-12, "family": "MP",
                       "params": "lambda=1/2,phi=pi/3", "format": "csv", "jobs": 3}"#;
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(RunConfig::parse(&c.to_json()).unwrap(), c);
        assert_eq!(c.order(), 24);
    }

    #[test]
    fn flags_win() {
        let file = RunConfig { k: Some(16), tol: Some(1e-9), ..Default::default() };
        let flags = RunConfig { k: Some(40), ..Default::default() };
        let c = file.overridden_by(&flags);
        assert_eq!((c.k, c.tol), (Some(40), Some(1e-9)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse(r#"{"K": 8, "colour": "red"}"#).is_err());
    }
}
