use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Pareto parameters: m0 = {m0}, alpha = {alpha} (both must be positive and finite)")]
    InvalidParams { m0: f64, alpha: f64 },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid value {value} at index {index}: values must be positive and finite")]
    InvalidValue { index: usize, value: f64 },

    #[error("values are not sorted in nonincreasing order at index {index}")]
    Unsorted { index: usize },

    #[error("degenerate input: need at least 2 distinct values, found {distinct}")]
    DegenerateInput { distinct: usize },

    #[error("degenerate fit: log-log slope {slope} is not negative")]
    DegenerateFit { slope: f64 },

    #[error("value {value} at index {index} lies below m_min = {m_min}")]
    BelowThreshold { index: usize, value: f64, m_min: f64 },

    #[error("divergent estimate: all values equal m_min, log-sum is zero")]
    DivergentEstimate,

    #[error("bootstrap failed: {failed} of {replicates} replicates could not be fitted")]
    BootstrapFailure { failed: usize, replicates: usize },

    #[error("empty selection: {0}")]
    EmptySelection(String),

    #[error("duplicate row for {0}")]
    DuplicateRow(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
