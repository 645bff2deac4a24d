use thiserror::Error as ThisError;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    #[error("negative radicand {0:e}")]
    NegativeRadicand(f64),
    #[error("square root of {0} is not rational")]
    Irrational(String),
    #[error("{0} is not available in exact rational arithmetic")]
    NotExact(&'static str),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("constraint violation [{clause}]: {detail}")]
    Constraint { clause: String, detail: String },
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("near-degenerate pivot alpha_n ~ alpha_0 at n = {0}")]
    Pivot(i64),
    #[error("near-singular factor: {0}")]
    NearSingular(String),
    #[error("unsupported precision: {0}")]
    Precision(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn constraint(clause: &str, detail: impl Into<String>) -> Self {
        Error::Constraint { clause: clause.to_string(), detail: detail.into() }
    }

    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Constraint { .. }
                | Error::DegenerateDenominator(_)
                | Error::Invalid(_)
                | Error::Precision(_)
                | Error::Range(_)
        )
    }
}
