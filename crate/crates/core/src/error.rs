use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point {0} is not inside the open unit disk")]
    NotInDisk(Complex64),

    #[error("value {0} is not unimodular (|value| = {1})")]
    NotUnimodular(Complex64, f64),

    #[error("degree {found} not allowed here (expected {expected})")]
    Degree { expected: &'static str, found: usize },

    #[error("order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootsNotConverged {
        iterations: usize,
        best: Vec<Complex64>,
        residual: f64,
    },

    #[error("expected {expected} critical points in the disk, found {found}")]
    CriticalCount { expected: usize, found: usize },

    #[error("rational map is not a Blaschke product: {0}")]
    NotBlaschke(String),

    #[error("normal form residual {residual:e} exceeds tolerance")]
    NormalForm {
        residual: f64,
        candidate: Vec<Complex64>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
