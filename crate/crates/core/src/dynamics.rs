//! Elliptic / parabolic / hyperbolic classification.
//!
//! Two independent routes are provided. The formula route builds the
//! fixed-point polynomial `p`, sets `q = (p')*` and runs the Schur-Cohn
//! recursion on `q`: the map is hyperbolic exactly when every `δ_k` is
//! positive. The oracle route locates the Denjoy-Wolff point directly from the
//! roots of `p` and the multiplier there, falling back to iterating the orbit
//! of `0`. [`classify`] runs both and reports any disagreement.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{CubicParameters, FiniteBlaschkeProduct, QuadraticParameter};
use crate::error::Result;
use crate::poly::{group_roots, ComplexPolynomial, RationalFunction};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Indeterminate,
}

impl Verdict {
    /// Lowercase name used in CSV output.
    pub fn code(self) -> &'static str {
        match self {
            Verdict::Elliptic => "elliptic",
            Verdict::Parabolic => "parabolic",
            Verdict::Hyperbolic => "hyperbolic",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Indeterminate
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Verdict::Elliptic => "Elliptic",
            Verdict::Parabolic => "Parabolic",
            Verdict::Hyperbolic => "Hyperbolic",
            Verdict::Indeterminate => "Indeterminate",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Formula,
    Oracle,
    Both,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Formula => "formula",
            Route::Oracle => "oracle",
            Route::Both => "both",
        })
    }
}

/// Widths of the parabolic bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|δ_k| <= delta * scale_k` counts as zero.
    pub delta: f64,
    /// `|B'(w0) - 1| <= multiplier` counts as parabolic.
    pub multiplier: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            delta: tol::PARABOLIC_DELTA,
            multiplier: tol::PARABOLIC_MULTIPLIER,
        }
    }
}

/// Numerator of `B(z) - z` for `B = N / D` with `D(0) = 1`, signed so that
/// the quadratic form gives `conj(u) z^3 + z^2 - z - u`.
pub fn fixed_point_polynomial(f: &RationalFunction) -> ComplexPolynomial {
    let d = f.numerator.degree();
    let z = ComplexPolynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let diff = &f.numerator - &(&z * &f.denominator);
    if d % 2 == 1 {
        -&diff
    } else {
        diff
    }
}

/// `q = (p')*`, reflected at the formal degree `formal_degree - 1` of `p'`.
pub fn q_polynomial(p: &ComplexPolynomial, formal_degree: usize) -> ComplexPolynomial {
    p.derivative().reciprocal_formal(formal_degree.saturating_sub(1))
}

/// Closed-form discriminant `P(r, s)` of the cubic normal form.
pub fn p_discriminant(params: &CubicParameters) -> f64 {
    let (r, s) = (params.r.value(), params.s.value());
    let one = Complex64::new(1.0, 0.0);
    let t = one + s;
    let sr = s * r;
    let a = 16.0 * r.norm_sqr() - t.norm_sqr();
    let b = 8.0 * r.conj() * (sr.conj() - sr) + 3.0 * t * t;
    let first = (a * a - b.norm_sqr()).powi(2);
    let inner = -a * (2.0 * t * (sr - sr.conj()) + 12.0 * r.conj() * t.conj())
        + b * (2.0 * t.conj() * (sr.conj() - sr) + 12.0 * r * t);
    first - inner.norm_sqr()
}

/// `(x + 1/3)^2 + y^2 - (2/3)(x + 1/3)` squared minus `(4/9)((x + 1/3)^2 + y^2)`;
/// positive outside the cardioid with cusp at `-1/3`.
pub fn cardioid_value(u: Complex64) -> f64 {
    let x = u.re + 1.0 / 3.0;
    let rho = x * x + u.im * u.im;
    (rho - 2.0 / 3.0 * x).powi(2) - 4.0 / 9.0 * rho
}

/// Output of the Schur-Cohn route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub verdict: Verdict,
    pub deltas: Vec<f64>,
    pub scales: Vec<f64>,
    pub degenerate: bool,
}

/// Schur-Cohn classification of `B = N / D` (`D(0) = 1`) of any degree `d >= 2`.
pub fn classify_formula_rational(f: &RationalFunction, tolerances: &Tolerances) -> FormulaReport {
    let d = f.numerator.degree();
    let p = fixed_point_polynomial(f);
    let q = q_polynomial(&p, d + 1);
    let report = q.schur_cohn();
    let band = |k: usize| tolerances.delta * report.scales[k];
    let all_positive = report.deltas.iter().enumerate().all(|(k, &x)| x > band(k));
    let none_negative = report.deltas.iter().enumerate().all(|(k, &x)| x >= -band(k));
    let some_zero = report.deltas.iter().enumerate().any(|(k, &x)| x.abs() <= band(k));
    let verdict = if report.deltas.len() < d {
        Verdict::Indeterminate
    } else if all_positive {
        Verdict::Hyperbolic
    } else if none_negative && some_zero {
        Verdict::Parabolic
    } else if report.degenerate {
        Verdict::Indeterminate
    } else {
        Verdict::Elliptic
    };
    FormulaReport {
        verdict,
        deltas: report.deltas,
        scales: report.scales,
        degenerate: report.degenerate,
    }
}

pub fn classify_formula(b: &FiniteBlaschkeProduct, tolerances: &Tolerances) -> FormulaReport {
    classify_formula_rational(b.rational(), tolerances)
}

/// Verdict from the sign of `P(r, s)` alone.
pub fn p_sign_verdict(params: &CubicParameters, value: f64, tolerances: &Tolerances) -> Verdict {
    let scale = (Complex64::new(1.0, 0.0) + params.s.value()).norm() + 4.0 * params.r.norm();
    let band = tolerances.delta * scale.powi(8);
    if value.abs() <= band {
        Verdict::Parabolic
    } else if value > 0.0 {
        Verdict::Hyperbolic
    } else {
        Verdict::Elliptic
    }
}

/// A fixed point on the unit circle and `B'` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFixedPoint {
    pub point: Complex64,
    pub multiplier: f64,
    /// Imaginary part of `B'` discarded after the realness check.
    pub multiplier_imag: f64,
}

/// Output of the Denjoy-Wolff route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub dw_point: Option<Complex64>,
    /// `|B'(w0)|` for an interior point, the real `B'(w0)` on the circle.
    pub multiplier: Option<f64>,
    pub interior_fixed_point: Option<Complex64>,
    pub boundary_fixed_points: Vec<BoundaryFixedPoint>,
    pub used_orbit: bool,
    pub note: Option<String>,
}

const INTERIOR_MARGIN: f64 = 1e-6;
const FIXED_POINT_CLUSTER: f64 = 1e-5;
const REAL_MULTIPLIER: f64 = 1e-6;
const ATTRACTING_SLACK: f64 = 1e-8;
const ORBIT_STEPS: usize = 1_000_000;
const ORBIT_STEP_TOL: f64 = 1e-13;
const ORBIT_BOUNDARY_TOL: f64 = 1e-10;
const ORBIT_BOUNDARY_SUSTAIN: usize = 1_000;

/// Newton on `p^(m-1)` started from the centre of an `m`-fold cluster.
fn polish_cluster(p: &ComplexPolynomial, center: Complex64, multiplicity: usize) -> Complex64 {
    let mut g = p.clone();
    for _ in 1..multiplicity {
        g = g.derivative();
    }
    let dg = g.derivative();
    let mut z = center;
    for _ in 0..30 {
        let (v, dv) = (g.eval(z), dg.eval(z));
        if dv == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = v / dv;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    if (z - center).norm() < FIXED_POINT_CLUSTER && z.is_finite() {
        z
    } else {
        center
    }
}

/// Locates the Denjoy-Wolff point of `B = N / D` (`D(0) = 1`).
pub fn denjoy_wolff_rational(f: &RationalFunction, tolerances: &Tolerances) -> OracleReport {
    let p = fixed_point_polynomial(f);
    let clusters = match p.roots() {
        Ok(roots) => group_roots(&roots, FIXED_POINT_CLUSTER)
            .into_iter()
            .map(|(c, m)| polish_cluster(&p, c, m))
            .collect::<Vec<_>>(),
        Err(_) => return orbit_fallback(f, tolerances, "fixed-point roots did not converge".into()),
    };

    let mut boundary = Vec::new();
    let mut interior: Option<(Complex64, f64)> = None;
    for z in clusters {
        let r = z.norm();
        if r < 1.0 - INTERIOR_MARGIN {
            let m = f.eval_jet(z).1.norm();
            if interior.is_none_or(|(_, best)| m < best) {
                interior = Some((z, m));
            }
        } else if r <= 1.0 + INTERIOR_MARGIN {
            let zeta = z / r;
            let d = f.eval_jet(zeta).1;
            boundary.push(BoundaryFixedPoint {
                point: zeta,
                multiplier: d.re,
                multiplier_imag: d.im,
            });
        }
    }
    boundary.sort_by(|a, b| a.multiplier.total_cmp(&b.multiplier));

    if let Some((w0, m)) = interior {
        if (1.0 - m).abs() <= tolerances.multiplier {
            // attracting point within the band of the circle: report the
            // boundary fixed point it is about to merge with
            if let Some(b) = closest_to_neutral(&boundary) {
                return OracleReport {
                    verdict: Verdict::Parabolic,
                    dw_point: Some(b.point),
                    multiplier: Some(b.multiplier),
                    interior_fixed_point: Some(w0),
                    boundary_fixed_points: boundary,
                    used_orbit: false,
                    note: Some(format!("interior fixed point with |B'| = {m}")),
                };
            }
        }
        return OracleReport {
            verdict: Verdict::Elliptic,
            dw_point: Some(w0),
            multiplier: Some(m),
            interior_fixed_point: Some(w0),
            boundary_fixed_points: boundary,
            used_orbit: false,
            note: None,
        };
    }

    let real_ok = boundary
        .iter()
        .all(|b| b.multiplier_imag.abs() <= REAL_MULTIPLIER * b.multiplier.abs().max(1.0));
    let attracting: Vec<&BoundaryFixedPoint> = boundary
        .iter()
        .filter(|b| b.multiplier <= 1.0 + ATTRACTING_SLACK)
        .collect();
    if !real_ok || attracting.is_empty() {
        let note = if real_ok {
            "no attracting boundary fixed point".to_string()
        } else {
            "boundary multiplier is not real".to_string()
        };
        let mut report = orbit_fallback(f, tolerances, note);
        report.boundary_fixed_points = boundary;
        return report;
    }
    let w0 = *attracting[0];
    let verdict = if (w0.multiplier - 1.0).abs() <= tolerances.multiplier {
        Verdict::Parabolic
    } else {
        Verdict::Hyperbolic
    };
    let note = (attracting.len() > 1).then(|| format!("{} boundary fixed points with multiplier <= 1", attracting.len()));
    OracleReport {
        verdict,
        dw_point: Some(w0.point),
        multiplier: Some(w0.multiplier),
        interior_fixed_point: None,
        boundary_fixed_points: boundary,
        used_orbit: false,
        note,
    }
}

fn closest_to_neutral(points: &[BoundaryFixedPoint]) -> Option<&BoundaryFixedPoint> {
    points
        .iter()
        .min_by(|a, b| (a.multiplier - 1.0).abs().total_cmp(&(b.multiplier - 1.0).abs()))
}

pub fn denjoy_wolff(b: &FiniteBlaschkeProduct, tolerances: &Tolerances) -> OracleReport {
    denjoy_wolff_rational(b.rational(), tolerances)
}

/// Iterates the orbit of `0` until it settles inside the disk or hugs the circle.
fn orbit_fallback(f: &RationalFunction, tolerances: &Tolerances, reason: String) -> OracleReport {
    let mut z = Complex64::new(0.0, 0.0);
    let mut near_boundary = 0usize;
    for _ in 0..ORBIT_STEPS {
        let next = f.eval(z);
        if !next.is_finite() {
            break;
        }
        if (next - z).norm() < ORBIT_STEP_TOL && next.norm() < 1.0 - INTERIOR_MARGIN {
            let m = f.eval_jet(next).1.norm();
            return OracleReport {
                verdict: Verdict::Elliptic,
                dw_point: Some(next),
                multiplier: Some(m),
                interior_fixed_point: Some(next),
                boundary_fixed_points: Vec::new(),
                used_orbit: true,
                note: Some(reason),
            };
        }
        if 1.0 - next.norm() < ORBIT_BOUNDARY_TOL {
            near_boundary += 1;
            if near_boundary >= ORBIT_BOUNDARY_SUSTAIN {
                let zeta = next / next.norm();
                let m = f.eval_jet(zeta).1.re;
                let verdict = if (m - 1.0).abs() <= tolerances.multiplier {
                    Verdict::Parabolic
                } else {
                    Verdict::Hyperbolic
                };
                return OracleReport {
                    verdict,
                    dw_point: Some(zeta),
                    multiplier: Some(m),
                    interior_fixed_point: None,
                    boundary_fixed_points: Vec::new(),
                    used_orbit: true,
                    note: Some(reason),
                };
            }
        } else {
            near_boundary = 0;
        }
        z = next;
    }
    OracleReport {
        verdict: Verdict::Indeterminate,
        dw_point: None,
        multiplier: None,
        interior_fixed_point: None,
        boundary_fixed_points: Vec::new(),
        used_orbit: true,
        note: Some(format!("{reason}; orbit of 0 did not settle")),
    }
}

/// Why the two routes (or the `P` sign test) disagreed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub formula: Verdict,
    pub oracle: Verdict,
    pub p_sign: Option<Verdict>,
    pub deltas: Vec<f64>,
    pub p_value: Option<f64>,
    pub notes: Vec<String>,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "formula {} vs oracle {}", self.formula, self.oracle)?;
        if let (Some(v), Some(p)) = (self.p_sign, self.p_value) {
            write!(f, "; P = {p:e} ({v})")?;
        }
        let deltas: Vec<String> = self.deltas.iter().map(|d| format!("{d:e}")).collect();
        write!(f, "; deltas [{}]", deltas.join(", "))?;
        for note in &self.notes {
            write!(f, "; {note}")?;
        }
        Ok(())
    }
}

/// Combined result of both routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub route: Route,
    pub deltas: Vec<f64>,
    pub degenerate: bool,
    pub p_value: Option<f64>,
    pub dw_point: Option<Complex64>,
    pub multiplier: Option<f64>,
    pub formula: FormulaReport,
    pub oracle: OracleReport,
    pub p_sign: Option<Verdict>,
    pub discrepancy: Option<Discrepancy>,
}

/// Merges the two routes. `p` carries `(P(r, s), sign verdict)` for cubics in normal form.
pub fn reconcile(formula: FormulaReport, oracle: OracleReport, p: Option<(f64, Verdict)>) -> ClassificationResult {
    let (fv, ov) = (formula.verdict, oracle.verdict);
    let mut notes = Vec::new();
    let (verdict, route) = match (fv, ov) {
        (a, b) if a == b => (a, Route::Both),
        (Verdict::Indeterminate, b) => {
            notes.push(if formula.degenerate {
                "Schur-Cohn chain degenerate".to_string()
            } else {
                "formula route undecided".to_string()
            });
            (b, Route::Oracle)
        }
        (a, Verdict::Indeterminate) => {
            notes.push("oracle undecided".to_string());
            (a, Route::Formula)
        }
        // one side inside its parabolic band: the disagreement is within tolerance
        (Verdict::Parabolic, _) | (_, Verdict::Parabolic) => (Verdict::Parabolic, Route::Both),
        (_, b) => {
            notes.push("routes disagree outside the parabolic band".to_string());
            (b, Route::Oracle)
        }
    };

    let (dw_point, multiplier) = if verdict == Verdict::Parabolic && oracle.verdict != Verdict::Parabolic {
        closest_to_neutral(&oracle.boundary_fixed_points)
            .map(|b| (Some(b.point), Some(b.multiplier)))
            .unwrap_or((oracle.dw_point, oracle.multiplier))
    } else {
        (oracle.dw_point, oracle.multiplier)
    };

    let p_sign = p.map(|(_, v)| v);
    if let (Some((value, pv)), true) = (p, verdict.is_decided()) {
        if pv != verdict {
            notes.push(format!("sign of P ({value:e}) gives {pv} but the map is {verdict}"));
            if let Some(k) = formula.deltas.iter().position(|&d| d < 0.0) {
                notes.push(format!("delta{} = {:e} < 0", k + 1, formula.deltas[k]));
            }
        }
    }
    if let Some(note) = &oracle.note {
        if !notes.is_empty() {
            notes.push(format!("oracle: {note}"));
        }
    }
    let discrepancy = (!notes.is_empty()).then(|| Discrepancy {
        formula: fv,
        oracle: ov,
        p_sign,
        deltas: formula.deltas.clone(),
        p_value: p.map(|(v, _)| v),
        notes,
    });

    ClassificationResult {
        verdict,
        route,
        deltas: formula.deltas.clone(),
        degenerate: formula.degenerate,
        p_value: p.map(|(v, _)| v),
        dw_point,
        multiplier,
        formula,
        oracle,
        p_sign,
        discrepancy,
    }
}

/// Classifies a cubic in normal form; `P(r, s)` is reported alongside.
pub fn classify_cubic(params: &CubicParameters, tolerances: &Tolerances) -> ClassificationResult {
    let f = params.rational();
    let p_value = p_discriminant(params);
    let pv = p_sign_verdict(params, p_value, tolerances);
    reconcile(
        classify_formula_rational(&f, tolerances),
        denjoy_wolff_rational(&f, tolerances),
        Some((p_value, pv)),
    )
}

pub fn classify_quadratic(param: &QuadraticParameter, tolerances: &Tolerances) -> ClassificationResult {
    let f = param.rational();
    reconcile(
        classify_formula_rational(&f, tolerances),
        denjoy_wolff_rational(&f, tolerances),
        None,
    )
}

/// Classifies any product of degree `>= 2`. Cubics are reduced to normal form
/// first so that `P(r, s)` can be reported; if the reduction fails the
/// product is classified as given. Degrees above three are experimental.
pub fn classify(b: &FiniteBlaschkeProduct, tolerances: &Tolerances) -> Result<ClassificationResult> {
    if b.degree() < 2 {
        return Err(crate::Error::Degree {
            expected: ">= 2",
            found: b.degree(),
        });
    }
    if b.degree() == 3 {
        if let Ok(nf) = b.normal_form_cubic() {
            return Ok(classify_cubic(&nf.params, tolerances));
        }
    }
    Ok(reconcile(classify_formula(b, tolerances), denjoy_wolff(b, tolerances), None))
}
