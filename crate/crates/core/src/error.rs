use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{what}: no convergence after {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("tolerance {requested:e} not met, best certified bound {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },

    #[error("tail bound failure: {0}")]
    TailBound(String),

    #[error("level {y} is not below the block-{k} maximum {y_max}")]
    LevelAboveMax { y: f64, k: usize, y_max: f64 },

    #[error("level {y} coincides with the block-{k} extremum value")]
    LevelCollision { y: f64, k: usize },

    #[error("{what}: size {size} exceeds limit {limit}")]
    Size {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{0}: intermediate values overflow binary64")]
    Overflow(&'static str),

    #[error("invalid weights: {0}")]
    Weights(String),

    #[error("certificate failure at p = {p}: {reason}; offending y: {offending:?}")]
    Certificate {
        p: f64,
        reason: String,
        offending: Vec<f64>,
    },
}

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
