//! Shared numerical tolerances.

/// Points with `|z| < 1 - INTERIOR` count as interior.
pub const INTERIOR: f64 = 1e-12;

/// Points with `||z| - 1| < BOUNDARY` count as lying on the unit circle.
pub const BOUNDARY: f64 = 1e-9;

/// Allowed deviation of a unimodular constant from modulus one at construction.
pub const UNIMODULAR: f64 = 1e-12;

/// Relative size below which trailing polynomial coefficients are dropped.
pub const TRIM: f64 = 1e-14;

/// Root clusters closer than this are reported as one multiple root.
pub const ROOT_CLUSTER: f64 = 1e-7;

/// Relative threshold for a Schur transform to count as identically zero.
pub const SCHUR_COLLAPSE: f64 = 1e-12;

/// Relative parabolic band on the Schur-Cohn constants.
pub const PARABOLIC_DELTA: f64 = 1e-9;

/// Parabolic band on the boundary multiplier `|B'(w0) - 1|`.
pub const PARABOLIC_MULTIPLIER: f64 = 1e-6;

/// Relative tolerance for normal-form reconstruction.
pub const NORMAL_FORM: f64 = 1e-8;
