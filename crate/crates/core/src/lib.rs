//! Pareto tail fitting for ranked top-k income and wealth lists.
//!
//! - [`pareto`]: density, survival function, quantiles, moments, sampling.
//! - [`empirical`]: ranked lists, empirical CCDF, log-log plot points.
//! - [`estimators`]: rank-size regression, Hill estimator, bootstrap CIs.
//! - [`aggregate`]: exponent tables and region/year summaries.
//! - [`synth`]: synthetic rank lists.

pub mod aggregate;
pub mod empirical;
pub mod error;
pub mod estimators;
pub mod pareto;
pub mod synth;

pub use aggregate::{Comparison, ExponentRow, ExponentTable, SummaryStats};
pub use empirical::{EmpiricalCcdf, GroupKey, Kind, RankList};
pub use error::{Error, Result};
pub use estimators::{bootstrap_ci, fit_hill, fit_rank_regression, BootstrapCi, HillFit, Method, RankFit};
pub use pareto::{Moment, ParetoParams, STRONGEST_ALPHA};
pub use synth::{generate_exact_ranksize, generate_ranklist};
