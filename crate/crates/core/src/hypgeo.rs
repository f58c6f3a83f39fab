//! Hyperbolic geometry of the unit disk.
//!
//! All functions here are pure; [`DiskPoint`] and [`UnitModulus`] enforce
//! their modulus constraints at construction.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(value: Complex64) -> Result<Self> {
        if value.norm() < 1.0 && value.is_finite() {
            Ok(DiskPoint(value))
        } else {
            Err(Error::NotInDisk(value))
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(Complex64::new(re, 0.0))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

impl std::ops::Neg for DiskPoint {
    type Output = DiskPoint;

    fn neg(self) -> Self {
        DiskPoint(-self.0)
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;
    fn try_from(value: Complex64) -> Result<Self> {
        DiskPoint::new(value)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A complex number of modulus one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct UnitModulus(Complex64);

impl UnitModulus {
    pub const ONE: UnitModulus = UnitModulus(Complex64::new(1.0, 0.0));

    /// Accepts values within `1e-12` of the unit circle and renormalizes them.
    pub fn new(value: Complex64) -> Result<Self> {
        Self::with_tolerance(value, tol::UNIMODULAR)
    }

    pub fn with_tolerance(value: Complex64, tolerance: f64) -> Result<Self> {
        let m = value.norm();
        if (m - 1.0).abs() <= tolerance && m.is_finite() {
            Ok(UnitModulus(value / m))
        } else {
            Err(Error::NotUnimodular(value, m))
        }
    }

    /// `e^{i angle}`.
    pub fn from_angle(angle: f64) -> Self {
        UnitModulus(Complex64::from_polar(1.0, angle))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn conj(self) -> Self {
        UnitModulus(self.0.conj())
    }

    pub fn arg(self) -> f64 {
        self.0.arg()
    }
}

impl TryFrom<Complex64> for UnitModulus {
    type Error = Error;
    fn try_from(value: Complex64) -> Result<Self> {
        UnitModulus::new(value)
    }
}

impl From<UnitModulus> for Complex64 {
    fn from(u: UnitModulus) -> Self {
        u.0
    }
}

impl std::ops::Mul for UnitModulus {
    type Output = UnitModulus;
    fn mul(self, rhs: Self) -> Self {
        let v = self.0 * rhs.0;
        UnitModulus(v / v.norm())
    }
}

/// `[z, w] = (z - w) / (1 - conj(w) z)`.
#[inline]
pub fn mobius_quotient(z: DiskPoint, w: DiskPoint) -> Complex64 {
    mobius_quotient_raw(z.0, w.0)
}

#[inline]
pub(crate) fn mobius_quotient_raw(z: Complex64, w: Complex64) -> Complex64 {
    (z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)
}

/// Pseudo-hyperbolic distance `|[z, w]|`, in `[0, 1)`.
#[inline]
pub fn pseudo_hyperbolic(z: DiskPoint, w: DiskPoint) -> f64 {
    mobius_quotient(z, w).norm()
}

/// Hyperbolic distance `log((1 + d) / (1 - d))` with `d` the pseudo-hyperbolic distance.
pub fn hyperbolic_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    let d = pseudo_hyperbolic(z, w);
    // 2 atanh(d) == log((1+d)/(1-d)), better conditioned for small d
    2.0 * d.atanh()
}

/// Hyperbolic midpoint of `z` and `w`.
///
/// Uses the closed form
/// `c = (|zw|^2 - 1 + sqrt((1-|z|^2)(1-|w|^2)|1-conj(w)z|^2)) / (conj(zw)(z+w) - conj(z+w))`.
/// Near `z = -w` that quotient is 0/0, so below a denominator threshold the
/// midpoint is taken along the geodesic after translating `z` to the origin.
pub fn hyperbolic_midpoint(z: DiskPoint, w: DiskPoint) -> DiskPoint {
    let (a, b) = (z.0, w.0);
    if a == -b {
        return DiskPoint::ORIGIN;
    }
    if pseudo_hyperbolic(z, w) < 1e-14 {
        return z;
    }
    let den = (a * b).conj() * (a + b) - (a + b).conj();
    if den.norm() < 1e-4 {
        return geodesic_midpoint(z, w);
    }
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    let radicand = (1.0 - na) * (1.0 - nb) * (Complex64::new(1.0, 0.0) - b.conj() * a).norm_sqr();
    let num = na * nb - 1.0 + radicand.max(0.0).sqrt();
    let c = Complex64::new(num, 0.0) / den;
    // |c| < 1 holds analytically; guard against rounding at the rim
    DiskPoint::new(c).unwrap_or_else(|_| geodesic_midpoint(z, w))
}

/// Midpoint by translating `z` to 0, halving along the diameter, and translating back.
pub fn geodesic_midpoint(z: DiskPoint, w: DiskPoint) -> DiskPoint {
    let moved = mobius_quotient(w, z);
    let t = moved.norm();
    // tanh(atanh(t) / 2) / t
    let half = moved / (1.0 + (1.0 - t * t).sqrt());
    let c = (half + z.0) / (Complex64::new(1.0, 0.0) + z.0.conj() * half);
    DiskPoint(clamp_into_disk(c))
}

pub(crate) fn clamp_into_disk(c: Complex64) -> Complex64 {
    let m = c.norm();
    if m < 1.0 {
        c
    } else {
        c * ((1.0 - f64::EPSILON) / m)
    }
}

/// `A(z) = rotation * (z - center) / (1 - conj(center) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskAutomorphism {
    pub rotation: UnitModulus,
    pub center: DiskPoint,
}

impl DiskAutomorphism {
    pub const IDENTITY: DiskAutomorphism = DiskAutomorphism {
        rotation: UnitModulus::ONE,
        center: DiskPoint::ORIGIN,
    };

    pub fn new(rotation: UnitModulus, center: DiskPoint) -> Self {
        DiskAutomorphism { rotation, center }
    }

    pub fn rotation(rotation: UnitModulus) -> Self {
        DiskAutomorphism::new(rotation, DiskPoint::ORIGIN)
    }

    /// The automorphism sending `point` to 0 with no extra rotation.
    pub fn moving_to_origin(point: DiskPoint) -> Self {
        DiskAutomorphism::new(UnitModulus::ONE, point)
    }

    /// The automorphism sending 0 to `point`: `z -> (z + p) / (1 + conj(p) z)`.
    pub fn from_origin(point: DiskPoint) -> Self {
        DiskAutomorphism::new(UnitModulus::ONE, -point)
    }

    pub fn apply(&self, z: DiskPoint) -> DiskPoint {
        DiskPoint(clamp_into_disk(self.apply_complex(z.0)))
    }

    /// Evaluates the Möbius map at any point off its pole.
    #[inline]
    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        self.rotation.0 * mobius_quotient_raw(z, self.center.0)
    }

    pub fn inverse(&self) -> Self {
        // (rotation, c) -> (conj(rotation), -rotation * c)
        let lambda = self.rotation.0;
        DiskAutomorphism {
            rotation: self.rotation.conj(),
            center: DiskPoint(clamp_into_disk(-lambda * self.center.0)),
        }
    }

    /// Coefficients `(a, b, c, d)` of `z -> (a z + b) / (c z + d)`.
    pub fn matrix(&self) -> [Complex64; 4] {
        let lambda = self.rotation.0;
        let c = self.center.0;
        [lambda, -lambda * c, -c.conj(), Complex64::new(1.0, 0.0)]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiskAutomorphism) -> Self {
        let [a1, b1, c1, d1] = self.matrix();
        let [a2, b2, c2, d2] = other.matrix();
        let a = a1 * a2 + b1 * c2;
        let b = a1 * b2 + b1 * d2;
        let d = c1 * b2 + d1 * d2;
        let center = clamp_into_disk(-b / a);
        let rot = a / d;
        DiskAutomorphism {
            rotation: UnitModulus(rot / rot.norm()),
            center: DiskPoint(center),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn disk_point_rejects_boundary_and_outside() {
        assert!(DiskPoint::from_re_im(1.0, 0.0).is_err());
        assert!(DiskPoint::from_re_im(0.8, 0.8).is_err());
        assert!(DiskPoint::from_re_im(f64::NAN, 0.0).is_err());
        assert!(DiskPoint::from_re_im(0.999_999, 0.0).is_ok());
    }

    #[test]
    fn unit_modulus_renormalizes() {
        let u = UnitModulus::new(Complex64::new(1.0 + 5e-13, 0.0)).unwrap();
        assert_eq!(u.value().norm(), 1.0);
        assert!(UnitModulus::new(Complex64::new(1.0 + 1e-9, 0.0)).is_err());
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let w = dp(0.3, -0.4);
        assert_eq!(pseudo_hyperbolic(w, w), 0.0);
        assert!((pseudo_hyperbolic(DiskPoint::ORIGIN, w) - 0.5).abs() < 1e-15);
        assert!((pseudo_hyperbolic(dp(0.5, 0.0), dp(0.8, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mobius_quotient_examples() {
        let w = dp(0.1, 0.7);
        assert_eq!(mobius_quotient(w, w), Complex64::new(0.0, 0.0));
        assert_eq!(mobius_quotient(dp(0.5, 0.0), DiskPoint::ORIGIN), Complex64::new(0.5, 0.0));
        assert_eq!(mobius_quotient(DiskPoint::ORIGIN, dp(0.5, 0.0)), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn hyperbolic_distance_examples() {
        let ln3 = 3f64.ln();
        let z = dp(-0.2, 0.6);
        assert_eq!(hyperbolic_distance(z, z), 0.0);
        assert!((hyperbolic_distance(DiskPoint::ORIGIN, dp(0.5, 0.0)) - ln3).abs() < 1e-14);
        assert!((hyperbolic_distance(dp(0.5, 0.0), dp(0.8, 0.0)) - ln3).abs() < 1e-14);
    }

    #[test]
    fn midpoint_examples() {
        let a = dp(0.37, -0.21);
        assert_eq!(hyperbolic_midpoint(a, -a), DiskPoint::ORIGIN);
        assert_eq!(hyperbolic_midpoint(a, a), a);
        let c = hyperbolic_midpoint(DiskPoint::ORIGIN, dp(0.8, 0.0));
        assert!((c.value() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn midpoint_near_antipodal_pair_is_continuous() {
        let a = dp(0.6, 0.3);
        let b = DiskPoint::new(-a.value() + Complex64::new(1e-9, -2e-9)).unwrap();
        let c = hyperbolic_midpoint(a, b);
        let d1 = hyperbolic_distance(a, c);
        let d2 = hyperbolic_distance(c, b);
        assert!((d1 - d2).abs() < 1e-10, "{d1} vs {d2}");
        assert!(c.norm() < 1e-8);
    }

    #[test]
    fn automorphism_examples() {
        let z = dp(0.2, 0.3);
        assert_eq!(DiskAutomorphism::IDENTITY.apply(z), z);
        let a = DiskAutomorphism::moving_to_origin(dp(0.5, 0.0));
        assert_eq!(a.apply(dp(0.5, 0.0)).value(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inverse_and_compose() {
        let a = DiskAutomorphism::new(UnitModulus::from_angle(1.1), dp(0.4, -0.5));
        let b = DiskAutomorphism::new(UnitModulus::from_angle(-2.3), dp(-0.7, 0.1));
        let c = DiskAutomorphism::new(UnitModulus::from_angle(0.4), dp(0.05, 0.9));
        for k in 0..16 {
            let t = 2.0 * PI * k as f64 / 16.0;
            let z = DiskPoint::new(Complex64::from_polar(0.9 * (k as f64 / 16.0), t)).unwrap();
            let back = a.inverse().apply(a.apply(z));
            assert!((back.value() - z.value()).norm() < 1e-12);
            let ab = a.compose(&b).apply(z);
            assert!((ab.value() - a.apply(b.apply(z)).value()).norm() < 1e-12);
            let left = a.compose(&b).compose(&c).apply(z);
            let right = a.compose(&b.compose(&c)).apply(z);
            assert!((left.value() - right.value()).norm() < 1e-12);
        }
    }

    #[test]
    fn from_origin_sends_zero_to_point() {
        let p = dp(-0.3, 0.45);
        let a = DiskAutomorphism::from_origin(p);
        assert!((a.apply(DiskPoint::ORIGIN).value() - p.value()).norm() < 1e-15);
    }
}
