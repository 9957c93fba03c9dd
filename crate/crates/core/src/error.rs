use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time {t} ns outside schedule window [0, {t_max}] ns")]
    TimeOutOfRange { t: f64, t_max: f64 },

    #[error("degenerate eigensystem: both couplings vanish")]
    DegenerateCouplings,

    #[error("degenerate geometry: donors {pair} are coincident")]
    DegenerateGeometry { pair: &'static str },

    #[error("no CTAP pathway: couplings must be positive (w12={w12}, w23={w23})")]
    NoPathway { w12: f64, w23: f64 },

    #[error("integration failed: norm drift {drift:e} exceeds {limit:e}; increase the step count (was {steps})")]
    IntegrationFailure {
        drift: f64,
        limit: f64,
        steps: usize,
    },

    #[error("empty population")]
    EmptyPopulation,

    #[error("empirical straggle source has no samples")]
    EmptySource,

    #[error("SRIM parse error: no data rows found (first rejected line: {first_rejected:?})")]
    SrimNoRows { first_rejected: Option<String> },

    #[error("SRIM parse error at line {line}: {reason}")]
    SrimRow { line: usize, reason: String },

    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },

    #[error("unknown config key `{key}`")]
    UnknownKey { key: String },

    #[error("invalid value {value:?} for `{key}`")]
    InvalidValue { key: String, value: String },

    #[error("missing config key `{key}`")]
    MissingKey { key: String },

    #[error("unknown strategy `{name}` (available: {available})")]
    UnknownStrategy { name: String, available: String },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
