use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: expected step {expected}, found {found}")]
    GridMismatch { expected: f64, found: f64 },

    #[error("underdetermined system: {rows} data rows for {unknowns} unknown coefficients")]
    Underdetermined { rows: usize, unknowns: usize },

    #[error("design matrix is rank deficient (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("no frequency-response data blocks supplied")]
    NoData,

    #[error("frequency {omega} lies outside the band [-{omega_max}, {omega_max}]")]
    OutOfBand { omega: f64, omega_max: f64 },

    #[error("insufficient oscillation: {crossings} mean crossings found, at least 4 required")]
    InsufficientOscillation { crossings: usize },

    #[error("integration blew up at t = {time}")]
    BlowUp { time: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
