use thiserror::Error;

/// Errors raised by the numeric primitives and the geometry built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("extremal or naked configuration (mass {mass}, charge {charge}): interior region is empty")]
    Extremal { mass: f64, charge: f64 },

    #[error("root is not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    NotBracketed { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("no convergence after {iterations} iterations (estimate {estimate}, error bound {error_bound})")]
    Convergence {
        iterations: usize,
        estimate: f64,
        error_bound: f64,
    },

    #[error("metric is singular at {point:?} (det = {det})")]
    SingularMetric { point: [f64; 4], det: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
