//! Finite Blaschke products on the unit disk.
//!
//! The crate is organised bottom-up:
//!
//! - [`hypgeo`]: points of the disk, Möbius automorphisms, hyperbolic
//!   distance and geodesic midpoints.
//! - [`poly`]: complex polynomials, reciprocal/self-inversive structure,
//!   Schur transforms and an Aberth-Ehrlich root finder.
//! - [`blaschke`]: finite Blaschke products, critical points, conjugation
//!   and the cubic/quadratic normal forms.
//! - [`hypcalc`]: hyperbolic divided differences and hyperbolic derivatives.
//! - [`dynamics`]: elliptic/parabolic/hyperbolic classification through
//!   Schur-Cohn and through the Denjoy-Wolff point.
//! - [`slice`]: parameter-space rasters written as PPM + CSV.

pub mod blaschke;
pub mod dynamics;
pub mod error;
pub mod hypcalc;
pub mod hypgeo;
pub mod poly;
pub mod slice;
pub mod tol;

pub use num_complex::Complex64;

pub use blaschke::{CubicParameters, FiniteBlaschkeProduct, QuadraticParameter};
pub use dynamics::{ClassificationResult, Route, Verdict};
pub use error::{Error, Result};
pub use hypgeo::{DiskAutomorphism, DiskPoint, UnitModulus};
pub use poly::{ComplexPolynomial, SchurReport};
