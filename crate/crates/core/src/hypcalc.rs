//! Hyperbolic divided differences and hyperbolic derivatives.
//!
//! `(Δ_w f)(z) = [f(z), f(w)] / [z, w]` with `[a, b] = (a - b) / (1 - conj(b) a)`.
//! For a Blaschke product `f = P / Q` of degree `n` and `b = f(w)`,
//!
//! ```text
//! (Δ_w f)(z) = ((P - b Q) / (z - w)) / ((Q - conj(b) P) / (1 - conj(w) z))
//! ```
//!
//! and both divisions are exact, so `Δ_w f` is again a Blaschke product, of
//! degree `n - 1`. Carrying the deflated numerator and denominator along
//! removes the `0 / 0` at `z = w` instead of approximating around it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::hypgeo::{hyperbolic_midpoint, DiskPoint};
use crate::poly::RationalFunction;

/// `H^1 B` and `H^2 B` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicJet {
    pub base: DiskPoint,
    pub h1: Complex64,
    /// Absent for degree one.
    pub h2: Option<Complex64>,
}

impl HyperbolicJet {
    pub fn at(b: &FiniteBlaschkeProduct, z: DiskPoint) -> Self {
        HyperbolicJet {
            base: z,
            h1: h1(b, z),
            h2: (b.degree() >= 2).then(|| h2(b, z)),
        }
    }
}

/// One step `f ↦ Δ_w f` on a rational pair of formal degree `n >= 1`.
fn divided_step(f: &RationalFunction, n: usize, w: Complex64) -> RationalFunction {
    let b = f.eval(w);
    let top = &f.numerator - &f.denominator.scale(b);
    let bottom = &f.denominator - &f.numerator.scale(b.conj());
    let num = top.deflate_root(w);
    let den = bottom.deflate_reflected(n, w.conj());
    let d0 = den.coeff(0);
    RationalFunction::new(num.scale(d0.inv()), den.scale(d0.inv()))
}

fn check_order(b: &FiniteBlaschkeProduct, n: usize) -> Result<()> {
    if n == 0 || n > b.degree() {
        return Err(Error::OrderOutOfRange {
            order: n,
            max: b.degree(),
        });
    }
    Ok(())
}

/// `Δ_w^n B` as a rational function; a Blaschke product of degree `deg B - n`.
pub fn divided_difference_map(b: &FiniteBlaschkeProduct, w: DiskPoint, n: usize) -> Result<RationalFunction> {
    check_order(b, n)?;
    let d = b.degree();
    let mut f = b.rational().clone();
    for k in 0..n {
        f = divided_step(&f, d - k, w.value());
    }
    Ok(f)
}

/// `(Δ_w^n B)(z)`.
pub fn divided_difference(b: &FiniteBlaschkeProduct, w: DiskPoint, n: usize, z: DiskPoint) -> Result<Complex64> {
    Ok(divided_difference_map(b, w, n)?.eval(z.value()))
}

/// `H^n B(z) = (Δ_z^n B)(z)` for any order `1 <= n <= deg B`.
pub fn hyperbolic_derivative(b: &FiniteBlaschkeProduct, n: usize, z: DiskPoint) -> Result<Complex64> {
    divided_difference(b, z, n, z)
}

/// `B'(z) (1 - |z|^2) / (1 - |B(z)|^2)`.
pub fn h1(b: &FiniteBlaschkeProduct, z: DiskPoint) -> Complex64 {
    let z = z.value();
    let (f, f1, _) = b.jet(z);
    f1 * (1.0 - z.norm_sqr()) / (1.0 - f.norm_sqr())
}

/// Below this value of `1 - |H^1 B|^2`, [`h2`] switches to the divided-difference route.
const H2_CLOSED_FORM_FLOOR: f64 = 1e-2;

/// `H^2 B(z)`.
///
/// Uses [`h2_closed_form`] unless `|H^1 B(z)|` is close to one, where that
/// formula is a ratio of two small quantities; there the value is read off
/// `Δ_z^2 B` instead.
pub fn h2(b: &FiniteBlaschkeProduct, z: DiskPoint) -> Complex64 {
    if 1.0 - h1(b, z).norm_sqr() < H2_CLOSED_FORM_FLOOR && b.degree() >= 2 {
        if let Ok(v) = hyperbolic_derivative(b, 2, z) {
            return v;
        }
    }
    h2_closed_form(b, z)
}

/// Closed form of `H^2 B(z)` in terms of `B`, `B'`, `B''`.
pub fn h2_closed_form(b: &FiniteBlaschkeProduct, z: DiskPoint) -> Complex64 {
    let z = z.value();
    let (f, f1, f2) = b.jet(z);
    let s = 1.0 - z.norm_sqr();
    let t = 1.0 - f.norm_sqr();
    let hyp1 = f1 * s / t;
    let bracket = f2 * s * s / t - 2.0 * z.conj() * f1 * s / t + 2.0 * f.conj() * f1 * f1 * s * s / (t * t);
    bracket / (2.0 * (1.0 - hyp1.norm_sqr()))
}

/// The hyperbolic inflection point of a cubic: the hyperbolic midpoint of its
/// two critical points. Returns the point and `|H^2 B|` there.
pub fn inflection_point_cubic(b: &FiniteBlaschkeProduct) -> Result<(DiskPoint, f64)> {
    if b.degree() != 3 {
        return Err(Error::Degree {
            expected: "3",
            found: b.degree(),
        });
    }
    let crit = b.critical_points()?;
    let m = hyperbolic_midpoint(crit[0], crit[1]);
    Ok((m, h2(b, m).norm()))
}

/// Zeros of `H^2 B` found by [`hyperbolic_zero_scan`].
pub fn inflection_scan(b: &FiniteBlaschkeProduct, grid_step: f64) -> Result<Vec<(DiskPoint, f64)>> {
    hyperbolic_zero_scan(b, 2, grid_step)
}

const SCAN_RADIUS: f64 = 0.999;
const SCAN_ACCEPT: f64 = 1e-6;
const SCAN_MERGE: f64 = 1e-5;
const FD_STEP: f64 = 1e-6;

fn order_value(b: &FiniteBlaschkeProduct, order: usize, z: Complex64) -> Complex64 {
    let Ok(p) = DiskPoint::new(z) else {
        return Complex64::new(f64::NAN, f64::NAN);
    };
    match order {
        1 => h1(b, p),
        2 => h2(b, p),
        _ => hyperbolic_derivative(b, order, p).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
    }
}

/// Grid search for zeros of `H^order B` in `|z| <= 0.999`.
///
/// Local minima of `|H^order B|` over the 8-neighbourhood are refined by damped
/// Newton on `R^2` (the map is not holomorphic) with a central-difference
/// Jacobian. Points with `|H^order B| < 1e-6` after refinement are returned,
/// merged within `1e-5`, sorted by real then imaginary part.
pub fn hyperbolic_zero_scan(b: &FiniteBlaschkeProduct, order: usize, grid_step: f64) -> Result<Vec<(DiskPoint, f64)>> {
    check_order(b, order)?;
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(Error::InvalidArgument(format!("grid step {grid_step} outside (0, 0.05]")));
    }
    let half = (SCAN_RADIUS / grid_step).floor() as i64;
    let side = (2 * half + 1) as usize;
    let coord = |k: usize| (k as i64 - half) as f64 * grid_step;

    let rows: Vec<Vec<f64>> = (0..side)
        .into_par_iter()
        .map(|i| {
            (0..side)
                .map(|j| {
                    let z = Complex64::new(coord(j), coord(i));
                    if z.norm() > SCAN_RADIUS {
                        f64::NAN
                    } else {
                        order_value(b, order, z).norm()
                    }
                })
                .collect()
        })
        .collect();

    let mut seeds = Vec::new();
    for i in 0..side {
        for j in 0..side {
            let v = rows[i][j];
            if v.is_nan() {
                continue;
            }
            let mut is_min = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= side as i64 || nj >= side as i64 {
                        continue;
                    }
                    let nv = rows[ni as usize][nj as usize];
                    if !nv.is_nan() && nv < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                seeds.push(Complex64::new(coord(j), coord(i)));
            }
        }
    }

    let refined: Vec<(Complex64, f64)> = seeds
        .par_iter()
        .filter_map(|&z0| refine(b, order, z0))
        .collect();

    let mut out: Vec<(Complex64, f64)> = Vec::new();
    for (z, v) in refined {
        if let Some(existing) = out.iter_mut().find(|(p, _)| (p - z).norm() < SCAN_MERGE) {
            if v < existing.1 {
                *existing = (z, v);
            }
        } else {
            out.push((z, v));
        }
    }
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out.into_iter().map(|(z, v)| Ok((DiskPoint::new(z)?, v))).collect()
}

fn refine(b: &FiniteBlaschkeProduct, order: usize, z0: Complex64) -> Option<(Complex64, f64)> {
    let f = |z: Complex64| order_value(b, order, z);
    let mut z = z0;
    let mut fz = f(z);
    for _ in 0..60 {
        if fz.norm() < 1e-15 {
            break;
        }
        let dx = (f(z + FD_STEP) - f(z - FD_STEP)) / (2.0 * FD_STEP);
        let dy = (f(z + Complex64::new(0.0, FD_STEP)) - f(z - Complex64::new(0.0, FD_STEP))) / (2.0 * FD_STEP);
        // [dx.re dy.re; dx.im dy.im] [a; b] = -[fz.re; fz.im]
        let det = dx.re * dy.im - dy.re * dx.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let a = -(dy.im * fz.re - dy.re * fz.im) / det;
        let c = -(-dx.im * fz.re + dx.re * fz.im) / det;
        let step = Complex64::new(a, c);
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-6 {
            let cand = z + step * lambda;
            if cand.norm() < 1.0 {
                let fc = f(cand);
                if fc.norm() < fz.norm() {
                    z = cand;
                    fz = fc;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted || step.norm() * lambda < 1e-16 {
            break;
        }
    }
    let v = fz.norm();
    (v < SCAN_ACCEPT && z.norm() < 1.0).then_some((z, v))
}
