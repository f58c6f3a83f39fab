//! Finite Blaschke products.
//!
//! A product is held in two forms at once: its zeros with a unimodular
//! factor, `B(z) = mu * prod (z - w_i) / (1 - conj(w_i) z)`, and the rational
//! form `N / D` with `N = mu * prod (z - w_i)` and `D = prod (1 - conj(w_i) z)`.
//! The denominator is always normalized to `D(0) = 1`, so `D = mu * N*`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypgeo::{hyperbolic_midpoint, DiskAutomorphism, DiskPoint, UnitModulus};
use crate::poly::{ComplexPolynomial, RationalFunction};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteBlaschkeProduct {
    zeros: Vec<DiskPoint>,
    mu: UnitModulus,
    rational: RationalFunction,
}

impl FiniteBlaschkeProduct {
    /// `mu * prod (z - w_i) / (1 - conj(w_i) z)`.
    pub fn new(zeros: Vec<DiskPoint>, mu: UnitModulus) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::Degree {
                expected: ">= 1",
                found: 0,
            });
        }
        let values: Vec<Complex64> = zeros.iter().map(|w| w.value()).collect();
        let numerator = ComplexPolynomial::from_roots(&values).scale(mu.value());
        let denominator = values.iter().fold(ComplexPolynomial::constant(ONE), |acc, w| {
            &acc * &ComplexPolynomial::new(vec![ONE, -w.conj()])
        });
        Ok(FiniteBlaschkeProduct {
            zeros,
            mu,
            rational: RationalFunction::new(numerator, denominator),
        })
    }

    /// Builds a product from a rational map `N / D`, recovering zeros with the root finder.
    ///
    /// `D` must be a unimodular multiple of the reciprocal of `N`; the pair is
    /// rescaled to `D(0) = 1`.
    pub fn from_rational(numerator: ComplexPolynomial, denominator: ComplexPolynomial) -> Result<Self> {
        let d0 = denominator.coeff(0);
        if d0 == ZERO || !d0.is_finite() {
            return Err(Error::NotBlaschke("denominator vanishes at the origin".into()));
        }
        let numerator = numerator.scale(d0.inv());
        let denominator = denominator.scale(d0.inv());
        let d = numerator.degree();
        if d == 0 {
            return Err(Error::Degree {
                expected: ">= 1",
                found: 0,
            });
        }
        if denominator.degree() > d {
            return Err(Error::NotBlaschke("denominator degree exceeds numerator degree".into()));
        }
        let mu = UnitModulus::with_tolerance(numerator.leading(), 1e-8)
            .map_err(|_| Error::NotBlaschke(format!("leading coefficient {} is not unimodular", numerator.leading())))?;
        let expected_den = numerator.reciprocal().scale(mu.value());
        let scale = numerator.max_abs_coeff().max(1.0);
        let mismatch = (0..=d)
            .map(|k| (expected_den.coeff(k) - denominator.coeff(k)).norm())
            .fold(0.0, f64::max);
        if mismatch > 1e-8 * scale {
            return Err(Error::NotBlaschke(format!(
                "denominator differs from the reciprocal numerator by {mismatch:e}"
            )));
        }
        let zeros = numerator
            .roots()?
            .into_iter()
            .map(|w| DiskPoint::new(w).map_err(|_| Error::NotBlaschke(format!("zero {w} outside the disk"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteBlaschkeProduct {
            zeros,
            mu,
            rational: RationalFunction::new(numerator, denominator),
        })
    }

    /// `((z - w) / (1 - conj(w) z))^d`.
    pub fn unicritical(w: DiskPoint, d: usize) -> Result<Self> {
        Self::new(vec![w; d], UnitModulus::ONE)
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[DiskPoint] {
        &self.zeros
    }

    pub fn mu(&self) -> UnitModulus {
        self.mu
    }

    pub fn rational(&self) -> &RationalFunction {
        &self.rational
    }

    pub fn numerator(&self) -> &ComplexPolynomial {
        &self.rational.numerator
    }

    pub fn denominator(&self) -> &ComplexPolynomial {
        &self.rational.denominator
    }

    /// Product of Möbius factors; intended for `|z| <= 1`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.mu.value(), |acc, w| {
            let w = w.value();
            acc * (z - w) / (ONE - w.conj() * z)
        })
    }

    /// Evaluation through `N / D`.
    pub fn evaluate_rational(&self, z: Complex64) -> Complex64 {
        self.rational.eval(z)
    }

    /// `B'(z)` from the rational form.
    pub fn derivative_eval(&self, z: Complex64) -> Complex64 {
        self.rational.eval_jet(z).1
    }

    /// `(B(z), B'(z), B''(z))` from the rational form.
    pub fn jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        self.rational.eval_jet(z)
    }

    /// `|B'(zeta)| = sum (1 - |w_i|^2) / |zeta - w_i|^2` on the unit circle.
    pub fn boundary_derivative_modulus(&self, zeta: UnitModulus) -> f64 {
        let z = zeta.value();
        self.zeros
            .iter()
            .map(|w| (1.0 - w.value().norm_sqr()) / (z - w.value()).norm_sqr())
            .sum()
    }

    /// Numerator of `B'`: `N' D - N D'`.
    pub fn critical_polynomial(&self) -> ComplexPolynomial {
        let n = self.numerator();
        let d = self.denominator();
        &(&n.derivative() * d) - &(n * &d.derivative())
    }

    /// The `d - 1` critical points in the disk, with multiplicity.
    pub fn critical_points(&self) -> Result<Vec<DiskPoint>> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::Degree {
                expected: ">= 2",
                found: d,
            });
        }
        let poly = self.critical_polynomial();
        let mut inside: Vec<Complex64> = poly.roots()?.into_iter().filter(|z| z.norm() < 1.0).collect();
        if inside.len() != d - 1 {
            return Err(Error::CriticalCount {
                expected: d - 1,
                found: inside.len(),
            });
        }
        inside.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
        inside.into_iter().map(DiskPoint::new).collect()
    }

    fn compose_with(&self, outer: Option<&DiskAutomorphism>, inner: Option<&DiskAutomorphism>) -> Result<Self> {
        let d = self.degree();
        let (mut n, mut den) = (self.numerator().clone(), self.denominator().clone());
        if let Some(a) = inner {
            let m = a.matrix();
            n = n.compose_mobius(d, m);
            den = den.compose_mobius(d, m);
        }
        if let Some(a) = outer {
            let [p, q, r, s] = a.matrix();
            let new_n = &n.scale(p) + &den.scale(q);
            let new_d = &n.scale(r) + &den.scale(s);
            n = new_n;
            den = new_d;
        }
        Self::from_rational(n, den)
    }

    /// `B ∘ A`.
    pub fn pre_compose(&self, a: &DiskAutomorphism) -> Result<Self> {
        self.compose_with(None, Some(a))
    }

    /// `A ∘ B`.
    pub fn post_compose(&self, a: &DiskAutomorphism) -> Result<Self> {
        self.compose_with(Some(a), None)
    }

    /// `A^{-1} ∘ B ∘ A`, computed on coefficients.
    pub fn conjugate(&self, a: &DiskAutomorphism) -> Result<Self> {
        self.compose_with(Some(&a.inverse()), Some(a))
    }

    /// Reduces a cubic to `(z^3 - s r z^2 - conj(s) z + r) / (conj(r) z^3 - s z^2 - conj(s r) z + 1)`.
    ///
    /// The critical points are first moved symmetrically onto the real axis
    /// about the origin, which gives `mu (z^3 - s0^2 r0 z^2 - s0^2 z + r0) / (...)`;
    /// a rotation by half the argument of `mu` then removes `mu`. The two
    /// half-angles give `r` and `-r`; the canonical one is returned.
    pub fn normal_form_cubic(&self) -> Result<CubicNormalForm> {
        if self.degree() != 3 {
            return Err(Error::Degree {
                expected: "3",
                found: self.degree(),
            });
        }
        let crit = self.critical_points()?;
        let mid = hyperbolic_midpoint(crit[0], crit[1]);
        let to_mid = DiskAutomorphism::from_origin(mid);
        let e = to_mid.inverse().apply(crit[0]).value();
        let align = if e.norm() > 0.0 {
            UnitModulus::new(e / e.norm())?
        } else {
            UnitModulus::ONE
        };
        let stage_a_map = to_mid.compose(&DiskAutomorphism::rotation(align));
        let stage_a = self.conjugate(&stage_a_map)?;

        // mu (z^3 - s0^2 r0 z^2 - s0^2 z + r0) / (conj(r0) z^3 - s0^2 z^2 - s0^2 conj(r0) z + 1)
        let n = stage_a.numerator();
        let den = stage_a.denominator();
        let mu = n.coeff(3);
        let r0 = n.coeff(0) / mu;
        let s0_sq_num = -n.coeff(1) / mu;
        let s0_sq_den = -den.coeff(2);
        let scale = n.max_abs_coeff().max(1.0);
        let self_check = [
            (s0_sq_num - s0_sq_den).norm(),
            s0_sq_num.im.abs(),
            (n.coeff(2) + mu * s0_sq_num * r0).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
            / scale;

        let theta = -mu.arg() / 2.0;
        let mut best: Option<CubicNormalForm> = None;
        for branch in [theta, theta + std::f64::consts::PI] {
            let map = stage_a_map.compose(&DiskAutomorphism::rotation(UnitModulus::from_angle(branch)));
            let reduced = self.conjugate(&map)?;
            let r = reduced.numerator().coeff(0);
            let s = -reduced.denominator().coeff(2);
            let candidate = vec![r, s];
            let params = match CubicParameters::new(r, s) {
                Ok(p) => p,
                Err(_) => {
                    return Err(Error::NormalForm {
                        residual: f64::INFINITY,
                        candidate,
                    })
                }
            };
            let residual = coefficient_residual(&reduced, &params.numerator(), &params.denominator()).max(self_check);
            let form = CubicNormalForm {
                params,
                automorphism: map,
                residual,
            };
            let canonical = params.is_canonical();
            if canonical || best.is_none() {
                best = Some(form);
                if canonical {
                    break;
                }
            }
        }
        let form = best.expect("two branches evaluated");
        if form.residual > tol::NORMAL_FORM {
            return Err(Error::NormalForm {
                residual: form.residual,
                candidate: vec![form.params.r.value(), form.params.s.value()],
            });
        }
        Ok(form)
    }

    /// Reduces a quadratic to `(z^2 - u) / (1 - conj(u) z^2)`.
    pub fn normal_form_quadratic(&self) -> Result<QuadraticNormalForm> {
        if self.degree() != 2 {
            return Err(Error::Degree {
                expected: "2",
                found: self.degree(),
            });
        }
        let crit = self.critical_points()?[0];
        let centering = DiskAutomorphism::from_origin(crit);
        let centered = self.conjugate(&centering)?;
        // mu (z^2 - a) / (1 - conj(a) z^2)
        let mu = UnitModulus::with_tolerance(centered.numerator().coeff(2), 1e-8)?;
        let map = centering.compose(&DiskAutomorphism::rotation(mu.conj()));
        let reduced = self.conjugate(&map)?;
        let u = -reduced.numerator().coeff(0);
        let param = QuadraticParameter::new(u).map_err(|_| Error::NormalForm {
            residual: f64::INFINITY,
            candidate: vec![u],
        })?;
        let residual = coefficient_residual(&reduced, &param.numerator(), &param.denominator());
        if residual > tol::NORMAL_FORM {
            return Err(Error::NormalForm {
                residual,
                candidate: vec![u],
            });
        }
        Ok(QuadraticNormalForm {
            param,
            automorphism: map,
            residual,
        })
    }

    /// Plain-text record: `degree`, one `zero` line per zero, then `mu`.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree {}", self.degree());
        for w in &self.zeros {
            let _ = writeln!(out, "zero {:.17e} {:.17e}", w.value().re, w.value().im);
        }
        let _ = writeln!(out, "mu {:.17e} {:.17e}", self.mu.value().re, self.mu.value().im);
        out
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut zeros = Vec::new();
        let mut mu = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let nums: Vec<f64> = parts
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1))))
                .collect::<Result<_>>()?;
            match (key, nums.as_slice()) {
                ("degree", [d]) if *d >= 1.0 && d.fract() == 0.0 => degree = Some(*d as usize),
                ("zero", [re, im]) => zeros.push(DiskPoint::from_re_im(*re, *im)?),
                ("mu", [re, im]) => mu = Some(UnitModulus::with_tolerance(Complex64::new(*re, *im), 1e-12)?),
                _ => return Err(Error::Parse(format!("line {}: unrecognized `{line}`", lineno + 1))),
            }
        }
        let degree = degree.ok_or_else(|| Error::Parse("missing `degree` line".into()))?;
        if degree != zeros.len() {
            return Err(Error::Parse(format!("degree {degree} but {} zeros", zeros.len())));
        }
        let mu = mu.ok_or_else(|| Error::Parse("missing `mu` line".into()))?;
        Self::new(zeros, mu)
    }
}

/// Max coefficient difference between `b` (normalized `D(0) = 1`) and a target `N / D`,
/// relative to the target's largest coefficient.
fn coefficient_residual(b: &FiniteBlaschkeProduct, num: &ComplexPolynomial, den: &ComplexPolynomial) -> f64 {
    let scale = num.max_abs_coeff().max(den.max_abs_coeff()).max(1.0);
    let len = num.degree().max(den.degree()).max(b.degree()) + 1;
    (0..len)
        .map(|k| {
            (b.numerator().coeff(k) - num.coeff(k))
                .norm()
                .max((b.denominator().coeff(k) - den.coeff(k)).norm())
        })
        .fold(0.0, f64::max)
        / scale
}

/// Parameters `(r, s)` of the cubic normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicParameters {
    pub r: DiskPoint,
    pub s: DiskPoint,
}

impl CubicParameters {
    pub fn new(r: Complex64, s: Complex64) -> Result<Self> {
        Ok(CubicParameters {
            r: DiskPoint::new(r)?,
            s: DiskPoint::new(s)?,
        })
    }

    /// `z^3 - s r z^2 - conj(s) z + r`.
    pub fn numerator(&self) -> ComplexPolynomial {
        let (r, s) = (self.r.value(), self.s.value());
        ComplexPolynomial::new(vec![r, -s.conj(), -s * r, ONE])
    }

    /// `conj(r) z^3 - s z^2 - conj(s r) z + 1`.
    pub fn denominator(&self) -> ComplexPolynomial {
        let (r, s) = (self.r.value(), self.s.value());
        ComplexPolynomial::new(vec![ONE, -(s * r).conj(), -s, r.conj()])
    }

    pub fn rational(&self) -> RationalFunction {
        RationalFunction::new(self.numerator(), self.denominator())
    }

    pub fn to_blaschke(&self) -> Result<FiniteBlaschkeProduct> {
        FiniteBlaschkeProduct::from_rational(self.numerator(), self.denominator())
    }

    /// `arg(r)` in `[0, pi)`; `r = 0` and positive reals are canonical.
    pub fn is_canonical(&self) -> bool {
        let r = self.r.value();
        let tiny = 1e-12 * r.norm();
        if r.im.abs() <= tiny {
            r.re >= 0.0
        } else {
            r.im > 0.0
        }
    }

    /// The representative of `{(r, s), (-r, s)}` with `arg(r)` in `[0, pi)`.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            *self
        } else {
            CubicParameters {
                r: -self.r,
                s: self.s,
            }
        }
    }
}

/// Parameter `u` of the quadratic normal form `(z^2 - u) / (1 - conj(u) z^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticParameter {
    pub u: DiskPoint,
}

impl QuadraticParameter {
    pub fn new(u: Complex64) -> Result<Self> {
        Ok(QuadraticParameter { u: DiskPoint::new(u)? })
    }

    pub fn numerator(&self) -> ComplexPolynomial {
        ComplexPolynomial::new(vec![-self.u.value(), ZERO, ONE])
    }

    pub fn denominator(&self) -> ComplexPolynomial {
        ComplexPolynomial::new(vec![ONE, ZERO, -self.u.value().conj()])
    }

    pub fn rational(&self) -> RationalFunction {
        RationalFunction::new(self.numerator(), self.denominator())
    }

    pub fn to_blaschke(&self) -> Result<FiniteBlaschkeProduct> {
        FiniteBlaschkeProduct::from_rational(self.numerator(), self.denominator())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicNormalForm {
    pub params: CubicParameters,
    /// `A` with `A^{-1} ∘ B ∘ A` equal to the normal form.
    pub automorphism: DiskAutomorphism,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticNormalForm {
    pub param: QuadraticParameter,
    pub automorphism: DiskAutomorphism,
    pub residual: f64,
}
