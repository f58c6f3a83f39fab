//! Complex polynomials.
//!
//! Coefficients are stored lowest degree first: `coeffs[k]` multiplies `z^k`.
//! Besides the usual algebra this module carries the reciprocal polynomial
//! `p*(z) = z^d conj(p(1/conj(z)))`, the Schur transform and the Schur-Cohn
//! test, and an Aberth-Ehrlich simultaneous root finder.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypgeo::UnitModulus;
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Builds a polynomial, trimming trailing coefficients below `1e-14 * max|a_k|`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = ComplexPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexPolynomial { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    /// `prod (z - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(ONE), |acc, &r| &acc * &Self::new(vec![-r, ONE]))
    }

    fn trim(&mut self) {
        if self.coeffs.is_empty() {
            self.coeffs.push(ZERO);
            return;
        }
        let max = self.max_abs_coeff();
        let cutoff = tol::TRIM * max;
        while self.coeffs.len() > 1 {
            let last = *self.coeffs.last().unwrap();
            if last.norm() <= cutoff {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    /// `(p(z), p'(z), p''(z))`.
    pub fn eval_jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        horner_jet(&self.coeffs, z)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Reciprocal polynomial with respect to the actual degree.
    pub fn reciprocal(&self) -> Self {
        self.reciprocal_formal(self.degree())
    }

    /// Reciprocal polynomial treating `self` as having formal degree `degree`:
    /// the coefficient of `z^k` is `conj(a_{degree-k})`.
    pub fn reciprocal_formal(&self, degree: usize) -> Self {
        assert!(degree >= self.degree(), "formal degree below actual degree");
        Self::new(
            (0..=degree)
                .map(|k| self.coeff(degree - k).conj())
                .collect(),
        )
    }

    /// Returns `mu` with `p* = mu p` coefficient-wise, when one exists.
    pub fn self_inversive_factor(&self) -> Option<UnitModulus> {
        if self.is_zero() {
            return None;
        }
        let star = self.reciprocal();
        let max = self.max_abs_coeff();
        let (k, ak) = self
            .coeffs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(k, &a)| (k, a))?;
        let mu = star.coeff(k) / ak;
        let tol = 1e-10;
        let fits = (0..=self.degree()).all(|j| (star.coeff(j) - mu * self.coeff(j)).norm() <= tol * max);
        if fits {
            UnitModulus::with_tolerance(mu, tol).ok()
        } else {
            None
        }
    }

    /// Schur transform `Tp = conj(p(0)) p - conj(p*(0)) p*`.
    pub fn schur_transform(&self) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::Degree {
                expected: ">= 1",
                found: 0,
            });
        }
        Ok(Self::new(schur_step(&self.coeffs)))
    }

    /// Schur-Cohn constants `delta_k = T^k p(0)` for `k = 1..=d`.
    ///
    /// Transforms are carried at their formal degree `d - k`, so a transform
    /// whose leading coefficient cancels keeps its place in the chain.
    pub fn schur_cohn(&self) -> SchurReport {
        let d = self.degree();
        let mut cur = self.coeffs.clone();
        let mut deltas = Vec::with_capacity(d);
        let mut scales = Vec::with_capacity(d);
        let mut degenerate = d == 0;
        let scale0 = self.max_abs_coeff();
        if d > 0 && cur[0].norm() <= tol::SCHUR_COLLAPSE * scale0 {
            degenerate = true;
        }
        for k in 1..=d {
            let prev_max = cur.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let scale = prev_max * prev_max;
            let next = schur_step(&cur);
            let delta = next[0].re;
            let cutoff = tol::SCHUR_COLLAPSE * scale;
            if next.iter().all(|c| c.norm() <= cutoff) || (k < d && delta.abs() <= cutoff) {
                degenerate = true;
            }
            deltas.push(delta);
            scales.push(scale);
            cur = next;
        }
        SchurReport {
            deltas,
            scales,
            degenerate,
        }
    }

    /// All `d` roots, with multiplicity, by Aberth-Ehrlich iteration.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        self.roots_with(&RootOptions::default())
    }

    pub fn roots_with(&self, opts: &RootOptions) -> Result<Vec<Complex64>> {
        find_roots(self, opts)
    }

    /// `sum_k a_k (alpha z + beta)^k (gamma z + delta)^(n - k)` for formal degree `n`,
    /// i.e. the numerator of `p(M(z))` after clearing `(gamma z + delta)^n`.
    pub fn compose_mobius(&self, degree: usize, m: [Complex64; 4]) -> Self {
        assert!(degree >= self.degree());
        let [a, b, c, d] = m;
        let lin_num = Self::new(vec![b, a]);
        let lin_den = Self::new(vec![d, c]);
        let mut num_pows = vec![Self::constant(ONE)];
        let mut den_pows = vec![Self::constant(ONE)];
        for k in 1..=degree {
            num_pows.push(&num_pows[k - 1] * &lin_num);
            den_pows.push(&den_pows[k - 1] * &lin_den);
        }
        let mut out = vec![ZERO; degree + 1];
        for k in 0..=degree {
            let ak = self.coeff(k);
            if ak == ZERO {
                continue;
            }
            let term = &num_pows[k] * &den_pows[degree - k];
            for (j, &t) in term.coeffs.iter().enumerate() {
                out[j] += ak * t;
            }
        }
        Self::new(out)
    }

    /// Quotient of `self` by `(z - w)`, discarding the remainder.
    pub fn deflate_root(&self, w: Complex64) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero();
        }
        let mut q = vec![ZERO; n];
        q[n - 1] = self.coeffs[n];
        for k in (1..n).rev() {
            q[k - 1] = self.coeffs[k] + w * q[k];
        }
        Self::new(q)
    }

    /// Quotient of `self` (formal degree `n`) by `(1 - c z)`, discarding the remainder.
    ///
    /// Runs from the constant term upward, which is stable for `|c| <= 1`.
    pub fn deflate_reflected(&self, n: usize, c: Complex64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut q = vec![ZERO; n];
        q[0] = self.coeff(0);
        for k in 1..n {
            q[k] = self.coeff(k) + c * q[k - 1];
        }
        Self::new(q)
    }
}

impl fmt::Display for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn neg(self) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

#[inline]
fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

#[inline]
fn horner_jet(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    let mut ddp = ZERO;
    for &c in coeffs.iter().rev() {
        ddp = ddp * z + dp;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, 2.0 * ddp)
}

/// One Schur step at formal degree `coeffs.len() - 1`.
fn schur_step(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let a0c = coeffs[0].conj();
    let an = coeffs[n];
    (0..n).map(|k| a0c * coeffs[k] - an * coeffs[n - k].conj()).collect()
}

/// Schur-Cohn constants of a polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    /// `delta_k = T^k p(0)`, `k = 1..=d`.
    pub deltas: Vec<f64>,
    /// Reference magnitude of each delta (`max |coeff|^2` of the transform it came from).
    pub scales: Vec<f64>,
    /// The chain lost information: `p(0)` or an intermediate delta vanished,
    /// or a transform collapsed to zero.
    pub degenerate: bool,
}

impl SchurReport {
    /// Every delta strictly positive beyond `rel_tol * scale`.
    pub fn all_positive(&self, rel_tol: f64) -> bool {
        !self.deltas.is_empty()
            && self
                .deltas
                .iter()
                .zip(&self.scales)
                .all(|(d, s)| *d > rel_tol * s)
    }
}

/// Options for [`ComplexPolynomial::roots_with`].
#[derive(Debug, Clone)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Acceptance bound on `max |p(root)| / (max|a_k| max(1,|root|)^d)`.
    pub residual_tolerance: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_iterations: 500,
            residual_tolerance: 1e-10,
        }
    }
}

/// Scaled residual `max_k |p(z_k)| / (max|a| * max(1, |z_k|)^d)`.
pub fn root_residual(p: &ComplexPolynomial, roots: &[Complex64]) -> f64 {
    let d = p.degree() as i32;
    let max = p.max_abs_coeff();
    roots
        .iter()
        .map(|&z| p.eval(z).norm() / (max * z.norm().max(1.0).powi(d)))
        .fold(0.0, f64::max)
}

/// Groups roots closer than `radius` (single linkage); returns cluster means with multiplicities.
pub fn group_roots(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        let mut j = i;
        while label[j] != r {
            let next = label[j];
            label[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &root) in roots.iter().enumerate() {
        let l = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == l) {
            Some(g) => {
                g.1 += root;
                g.2 += 1;
            }
            None => groups.push((l, root, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, count)| (sum / count as f64, count))
        .collect()
}

fn find_roots(p: &ComplexPolynomial, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::Degree {
            expected: ">= 1",
            found: 0,
        });
    }
    let mut roots = Vec::with_capacity(d);
    // exact zero roots first
    let zeros = p.coeffs.iter().take_while(|c| **c == ZERO).count();
    roots.extend(std::iter::repeat_n(ZERO, zeros));
    let lead = p.leading();
    let monic: Vec<Complex64> = p.coeffs[zeros..].iter().map(|&c| c / lead).collect();
    let m = monic.len() - 1;
    match m {
        0 => {}
        1 => roots.push(-monic[0]),
        2 => {
            let (r1, r2) = quadratic_roots(monic[1], monic[0]);
            roots.push(r1);
            roots.push(r2);
        }
        _ => roots.extend(aberth(&monic, opts)?),
    }
    Ok(roots)
}

/// Roots of `z^2 + b z + c`, avoiding cancellation.
fn quadratic_roots(b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 * c).sqrt();
    let s = if (b.conj() * disc).re >= 0.0 { b + disc } else { b - disc };
    let q = -0.5 * s;
    if q == ZERO {
        (ZERO, ZERO)
    } else {
        (q, c / q)
    }
}

fn aberth(monic: &[Complex64], opts: &RootOptions) -> Result<Vec<Complex64>> {
    const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
    const PHASE: f64 = 0.4;
    let d = monic.len() - 1;
    let abs_coeffs: Vec<f64> = monic.iter().map(|c| c.norm()).collect();
    let radius = 1.0 + monic[0].norm().powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, PHASE + GOLDEN_ANGLE * k as f64))
        .collect();
    let mut converged = vec![false; d];
    let eps = f64::EPSILON;
    let mut iterations = 0;
    let mut polish_left = 1;
    while iterations < opts.max_iterations {
        iterations += 1;
        let all_done = converged.iter().all(|&c| c);
        for k in 0..d {
            if converged[k] && !all_done {
                continue;
            }
            let zk = z[k];
            let (pv, dpv) = {
                let (a, b, _) = horner_jet(monic, zk);
                (a, b)
            };
            let bound = 4.0 * eps * d as f64 * horner_abs(&abs_coeffs, zk.norm());
            if pv.norm() <= bound && !all_done {
                converged[k] = true;
                continue;
            }
            let ratio = if dpv == ZERO { pv } else { pv / dpv };
            let mut sum = ZERO;
            for (j, &zj) in z.iter().enumerate() {
                if j != k {
                    let diff = zk - zj;
                    if diff != ZERO {
                        sum += diff.inv();
                    }
                }
            }
            let denom = ONE - ratio * sum;
            let step = if denom == ZERO { ratio } else { ratio / denom };
            if step.is_finite() {
                z[k] = zk - step;
                if step.norm() <= eps * z[k].norm() {
                    converged[k] = true;
                }
            }
        }
        if all_done {
            polish_left -= 1;
            if polish_left < 0 {
                break;
            }
        }
    }
    let poly = ComplexPolynomial {
        coeffs: monic.to_vec(),
    };
    let residual = root_residual(&poly, &z);
    if residual < opts.residual_tolerance && z.iter().all(|c| c.is_finite()) {
        Ok(z)
    } else {
        Err(Error::RootsNotConverged {
            iterations,
            best: z,
            residual,
        })
    }
}

#[inline]
fn horner_abs(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

/// A quotient of two polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub numerator: ComplexPolynomial,
    pub denominator: ComplexPolynomial,
}

impl RationalFunction {
    pub fn new(numerator: ComplexPolynomial, denominator: ComplexPolynomial) -> Self {
        RationalFunction {
            numerator,
            denominator,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    /// `(f(z), f'(z), f''(z))` by the quotient rule.
    pub fn eval_jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let (n, dn, ddn) = self.numerator.eval_jet(z);
        let (d, dd, ddd) = self.denominator.eval_jet(z);
        let f = n / d;
        let f1 = (dn - dd * f) / d;
        let f2 = (ddn - 2.0 * dd * f1 - ddd * f) / d;
        (f, f1, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn eval_derivative_and_product() {
        let p = ComplexPolynomial::from_real(&[-0.25, 0.0, 1.0]);
        assert_eq!(p.eval(c(0.5, 0.0)), c(0.0, 0.0));
        let q = ComplexPolynomial::from_real(&[2.8, -3.0, 0.0, 1.0]);
        assert_eq!(q.derivative(), ComplexPolynomial::from_real(&[-3.0, 0.0, 3.0]));
        let a = ComplexPolynomial::from_real(&[-1.0, 1.0]);
        let b = ComplexPolynomial::from_real(&[1.0, 1.0]);
        assert_eq!(&a * &b, ComplexPolynomial::from_real(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn trimming_drops_negligible_leading_terms() {
        let p = ComplexPolynomial::from_real(&[1.0, 2.0, 1e-16]);
        assert_eq!(p.degree(), 1);
        assert_eq!(ComplexPolynomial::new(vec![]).degree(), 0);
    }

    #[test]
    fn reciprocal_examples() {
        let w = c(0.3, -0.2);
        let p = ComplexPolynomial::new(vec![-w, c(1.0, 0.0)]);
        let star = p.reciprocal();
        assert_eq!(star.coeffs(), &[c(1.0, 0.0), -w.conj()]);

        let u = c(0.3, 0.0);
        let p = ComplexPolynomial::new(vec![-u, c(-1.0, 0.0), c(1.0, 0.0), u.conj()]);
        assert_eq!(p.reciprocal(), -&p);

        let p = ComplexPolynomial::new(vec![c(0.5, 1.0), c(-2.0, 0.1), c(0.0, 3.0)]);
        assert_eq!(p.reciprocal().reciprocal(), p);
    }

    #[test]
    fn reciprocal_formal_keeps_degree() {
        let p = ComplexPolynomial::from_real(&[1.0, 2.0]);
        let star = p.reciprocal_formal(3);
        assert_eq!(star.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn self_inversive_examples() {
        let u = c(0.3, 0.0);
        let p = ComplexPolynomial::new(vec![-u, c(-1.0, 0.0), c(1.0, 0.0), u.conj()]);
        let mu = p.self_inversive_factor().unwrap();
        assert!(close(mu.value(), c(-1.0, 0.0), 1e-15));

        let p = ComplexPolynomial::from_real(&[1.0, 0.0, 1.0]);
        assert!(close(p.self_inversive_factor().unwrap().value(), c(1.0, 0.0), 1e-15));

        let p = ComplexPolynomial::from_real(&[2.0, 1.0, 1.0]);
        assert!(p.self_inversive_factor().is_none());
    }

    #[test]
    fn schur_transform_examples() {
        // q = -z^2 + 2z + 3u
        let u = c(0.2, -0.45);
        let q = ComplexPolynomial::new(vec![3.0 * u, c(2.0, 0.0), c(-1.0, 0.0)]);
        let t = q.schur_transform().unwrap();
        let expected = [c(9.0 * u.norm_sqr() - 1.0, 0.0), c(2.0, 0.0) + 6.0 * u.conj()];
        assert_eq!(t.degree(), 1);
        for k in 0..2 {
            assert!(close(t.coeff(k), expected[k], 1e-14));
        }

        let q = ComplexPolynomial::from_real(&[2.8, -3.0, 0.0, 1.0]);
        let t = q.schur_transform().unwrap();
        for (k, e) in [6.84, -8.4, 3.0].iter().enumerate() {
            assert!(close(t.coeff(k), c(*e, 0.0), 1e-13), "{t}");
        }

        let p = ComplexPolynomial::from_real(&[2.0, 1.0]);
        assert_eq!(p.schur_transform().unwrap(), ComplexPolynomial::from_real(&[3.0]));

        assert!(ComplexPolynomial::from_real(&[4.0]).schur_transform().is_err());
    }

    #[test]
    fn schur_transform_matches_definition() {
        let p = ComplexPolynomial::new(vec![c(0.3, 1.2), c(-0.7, 0.1), c(2.0, -0.4), c(0.6, 0.6)]);
        let star = p.reciprocal();
        let by_def = &p.scale(p.eval(c(0.0, 0.0)).conj()) - &star.scale(star.eval(c(0.0, 0.0)).conj());
        let t = p.schur_transform().unwrap();
        for k in 0..=p.degree() {
            assert!(close(t.coeff(k), by_def.coeff(k), 1e-12));
        }
    }

    #[test]
    fn schur_cohn_examples() {
        let r = ComplexPolynomial::from_real(&[2.0, 1.0]).schur_cohn();
        assert_eq!(r.deltas, vec![3.0]);
        assert!(!r.degenerate);
        assert!(r.all_positive(0.0));

        let r = ComplexPolynomial::from_real(&[0.5, 1.0]).schur_cohn();
        assert_eq!(r.deltas, vec![-0.75]);

        // degree-2 family at u = -0.9: delta1 = 9|u|^2 - 1, delta2 = delta1^2 - |2 + 6u|^2
        let u = c(-0.9, 0.0);
        let q = ComplexPolynomial::new(vec![3.0 * u, c(2.0, 0.0), c(-1.0, 0.0)]);
        let r = q.schur_cohn();
        assert!((r.deltas[0] - 6.29).abs() < 1e-12);
        assert!((r.deltas[1] - (6.29f64.powi(2) - 3.4f64.powi(2))).abs() < 1e-12);
        assert!((r.deltas[1] - 28.0041).abs() < 1e-10);
    }

    #[test]
    fn schur_cohn_flags_vanishing_constant_term() {
        // (1+s) z^3 - 3 conj(1+s) z: root at the origin
        let s = c(0.0, 0.5);
        let one_s = c(1.0, 0.0) + s;
        let q = ComplexPolynomial::new(vec![c(0.0, 0.0), -3.0 * one_s.conj(), c(0.0, 0.0), one_s]);
        let r = q.schur_cohn();
        assert!(r.degenerate);
        assert!((r.deltas[0] + one_s.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn schur_cohn_flags_self_inversive_input() {
        let p = ComplexPolynomial::from_real(&[1.0, 0.5, 0.5, 1.0]);
        assert!(p.schur_cohn().degenerate);
    }

    #[test]
    fn root_examples() {
        let r = sorted_by_re(ComplexPolynomial::from_real(&[-0.25, 0.0, 1.0]).roots().unwrap());
        assert!(close(r[0], c(-0.5, 0.0), 1e-15) && close(r[1], c(0.5, 0.0), 1e-15));

        let r = sorted_by_re(ComplexPolynomial::from_real(&[0.1, -1.0, 0.1]).roots().unwrap());
        let s6 = 2.0 * 6f64.sqrt();
        assert!(close(r[0], c(5.0 - s6, 0.0), 1e-14));
        assert!(close(r[1], c(5.0 + s6, 0.0), 1e-12));
    }

    #[test]
    fn aberth_recovers_known_roots() {
        let known = vec![c(0.5, 0.1), c(-0.3, 0.8), c(2.0, -1.0), c(-1.5, -0.2), c(0.0, 0.0), c(0.9, 0.9)];
        let p = ComplexPolynomial::from_roots(&known).scale(c(0.7, -1.3));
        let found = p.roots().unwrap();
        assert_eq!(found.len(), known.len());
        for k in &known {
            let best = found.iter().map(|f| (f - k).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "{k} missed by {best}");
        }
    }

    #[test]
    fn multiple_roots_are_grouped() {
        let p = ComplexPolynomial::from_roots(&[c(0.3, 0.4), c(0.3, 0.4), c(-0.7, 0.0), c(1.2, 0.5)]);
        let roots = p.roots().unwrap();
        let groups = group_roots(&roots, tol::ROOT_CLUSTER);
        assert_eq!(groups.len(), 3);
        let double = groups.iter().find(|g| g.1 == 2).unwrap();
        assert!(close(double.0, c(0.3, 0.4), 1e-7));
    }

    #[test]
    fn self_inversive_roots_reflect() {
        // p* = -p
        let u = c(0.25, -0.4);
        let p = ComplexPolynomial::new(vec![-u, c(-1.0, 0.0), c(1.0, 0.0), u.conj()]);
        let roots = p.roots().unwrap();
        for z in &roots {
            let reflected = z.conj().inv();
            let best = roots.iter().map(|w| (w - reflected).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8);
        }
    }

    #[test]
    fn non_convergence_reports_best_iterate() {
        let p = ComplexPolynomial::from_roots(&[c(0.1, 0.2), c(-0.5, 0.3), c(0.7, -0.9), c(1.5, 0.0)]);
        let opts = RootOptions {
            max_iterations: 1,
            residual_tolerance: 1e-10,
        };
        match p.roots_with(&opts) {
            Err(Error::RootsNotConverged { best, residual, .. }) => {
                assert_eq!(best.len(), 4);
                assert!(residual >= 1e-10);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn deflation_helpers() {
        let w = c(0.3, -0.6);
        let q = ComplexPolynomial::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.25, 1.0)]);
        let p = &q * &ComplexPolynomial::new(vec![-w, c(1.0, 0.0)]);
        let back = p.deflate_root(w);
        for k in 0..=2 {
            assert!(close(back.coeff(k), q.coeff(k), 1e-14));
        }
        let p = &q * &ComplexPolynomial::new(vec![c(1.0, 0.0), -w.conj()]);
        let back = p.deflate_reflected(3, w.conj());
        for k in 0..=2 {
            assert!(close(back.coeff(k), q.coeff(k), 1e-14));
        }
    }

    #[test]
    fn compose_mobius_matches_pointwise() {
        let p = ComplexPolynomial::new(vec![c(0.2, 0.1), c(-1.0, 0.3), c(0.0, 0.5), c(1.0, 0.0)]);
        let m = [c(0.6, 0.8), c(-0.1, 0.2), c(0.3, -0.1), c(1.0, 0.0)];
        let composed = p.compose_mobius(3, m);
        for z in [c(0.1, 0.2), c(-0.4, 0.3), c(0.7, -0.5)] {
            let y = (m[0] * z + m[1]) / (m[2] * z + m[3]);
            let expect = p.eval(y) * (m[2] * z + m[3]).powu(3);
            assert!(close(composed.eval(z), expect, 1e-13));
        }
    }

    #[test]
    fn rational_jet_matches_finite_differences() {
        let f = RationalFunction::new(
            ComplexPolynomial::new(vec![c(0.3, 0.0), c(-0.2, 0.1), c(0.0, 0.0), c(1.0, 0.0)]),
            ComplexPolynomial::new(vec![c(1.0, 0.0), c(0.0, -0.1), c(-0.2, 0.0), c(0.3, 0.0)]),
        );
        let z = c(0.2, -0.3);
        let h = 1e-4;
        let (v, d1, d2) = f.eval_jet(z);
        let fd1 = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
        let fd2 = (f.eval(z + h) - 2.0 * v + f.eval(z - h)) / (h * h);
        assert!(close(d1, fd1, 1e-7));
        assert!(close(d2, fd2, 1e-5));
    }
}
