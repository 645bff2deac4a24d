//! Precision-aware scalars and the generic numeric kernels built on them.

mod complex;
pub mod fit;
pub mod limit;
pub mod linalg;
mod mp;
mod precision;
mod rational;
mod real;

pub use complex::Complex;
pub use fit::{fit_asymptotic, fit_power_law, AsymptoticFit, FitRecord, PowerLawFit};
pub use limit::{limit_estimate, LimitEstimate, LimitOptions};
pub use linalg::DenseMatrix;
pub use mp::{MpContext, MpFloat};
pub use precision::{PrecisionContext, PrecisionMode, PrecisionVisitor, DEFAULT_DECIMAL_DIGITS};
pub use rational::{exact_sqrt, Rational};
pub use real::Real;
