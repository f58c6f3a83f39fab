//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use common::{disk_sample, random_automorphism, random_product, report, rng};
use cubic_blaschke::dynamics::{
    classify_cubic, classify_formula_rational, denjoy_wolff_rational, fixed_point_polynomial, p_discriminant,
    q_polynomial, Tolerances,
};
use cubic_blaschke::hypcalc::{divided_difference_map, h1, h2, inflection_scan};
use cubic_blaschke::hypgeo::hyperbolic_midpoint;
use cubic_blaschke::slice::{PixelClass, SliceGrid, SliceOptions, UnicriticalGrid};
use cubic_blaschke::{Complex64, CubicParameters, DiskPoint, QuadraticParameter, Verdict};
use rand::Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Cardioid inequality in the shifted coordinate `x + 1/3`, positive outside.
fn cardioid_side(u: Complex64) -> f64 {
    let x = u.re + 1.0 / 3.0;
    let y = u.im;
    let lhs = (x * x + y * y - 2.0 / 3.0 * x).powi(2);
    let rhs = 4.0 / 9.0 * (x * x + y * y);
    lhs - rhs
}

fn quadratic_samples() -> Vec<Complex64> {
    let mut r = rng(0x5eed_0001);
    (0..10_000).map(|_| disk_sample(&mut r, 1.0)).filter(|u| u.norm() < 1.0).collect()
}

fn q_roots_outside(f: &cubic_blaschke::poly::RationalFunction, strict_margin: bool) -> (bool, f64) {
    let d = f.numerator.degree();
    let q = q_polynomial(&fixed_point_polynomial(f), d + 1);
    let roots = q.roots().expect("roots of q");
    let min = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let ok = if strict_margin { min > 1.0 + 1e-8 } else { min > 1.0 - 1e-8 };
    (ok, min)
}

#[test]
fn criterion_01_degree_two_cardioid() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let samples = quadratic_samples();
    let (mut sign_checked, mut sign_bad, mut oracle_checked, mut oracle_bad) = (0, 0, 0, 0);
    for &u in &samples {
        let f = QuadraticParameter::new(u).unwrap().rational();
        let formula = classify_formula_rational(&f, &tol);
        let d2 = formula.deltas[1];
        if d2.abs() > 1e-9 {
            sign_checked += 1;
            if (d2 > 0.0) != (cardioid_side(u) > 0.0) {
                sign_bad += 1;
            }
        }
        if d2.abs() > 1e-6 {
            oracle_checked += 1;
            if denjoy_wolff_rational(&f, &tol).verdict != formula.verdict {
                oracle_bad += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = sign_bad == 0 && oracle_bad == 0 && samples.len() == 10_000 && elapsed < Duration::from_secs(30);
    report(
        1,
        "degree-2 cardioid",
        ok,
        &format!(
            "{sign_bad}/{sign_checked} sign mismatches, {oracle_bad}/{oracle_checked} oracle mismatches, {:.2?}",
            elapsed
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_cusp() {
    let tol = Tolerances::default();
    let f = QuadraticParameter::new(c(-1.0 / 3.0, 0.0)).unwrap().rational();
    let formula = classify_formula_rational(&f, &tol);
    let oracle = denjoy_wolff_rational(&f, &tol);
    let dw = oracle.dw_point.unwrap_or(c(f64::NAN, f64::NAN));
    let m = oracle.multiplier.unwrap_or(f64::NAN);
    let ok = formula.deltas[0].abs() < 1e-12
        && formula.deltas[1].abs() < 1e-12
        && oracle.verdict == Verdict::Parabolic
        && (dw - c(1.0, 0.0)).norm() < 1e-6
        && (m - 1.0).abs() < 1e-10;
    report(
        2,
        "cusp at -1/3",
        ok,
        &format!(
            "delta = [{:e}, {:e}], w0 = {dw}, B'(w0) - 1 = {:e}",
            formula.deltas[0],
            formula.deltas[1],
            m - 1.0
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_inflection_midpoint() {
    let start = Instant::now();
    let mut r = rng(0x5eed_0003);
    let mut worst: f64 = 0.0;
    let mut scan_bad = Vec::new();
    for k in 0..1000 {
        let b = random_product(&mut r, 3, 0.95);
        let crit = b.critical_points().expect("two critical points");
        let m = hyperbolic_midpoint(crit[0], crit[1]);
        worst = worst.max(h2(&b, m).norm());
        if k < 100 {
            let found = inflection_scan(&b, 0.01).expect("scan");
            if found.len() != 1 {
                scan_bad.push((k, found.len()));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst < 1e-8 && scan_bad.is_empty() && elapsed < Duration::from_secs(600);
    report(
        3,
        "inflection point at the critical midpoint",
        ok,
        &format!("max |H2 B(m)| = {worst:e}, scans with count != 1: {scan_bad:?}, {elapsed:.2?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_04_delta3_equals_p() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut r = rng(0x5eed_0004);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 10_000 {
        let (rr, ss) = (disk_sample(&mut r, 1.0), disk_sample(&mut r, 1.0));
        let Ok(params) = CubicParameters::new(rr, ss) else { continue };
        n += 1;
        let delta3 = classify_formula_rational(&params.rational(), &tol).deltas[2];
        let p = p_discriminant(&params);
        worst = worst.max((delta3 - p).abs() / (1.0 + p.abs()));
    }
    let elapsed = start.elapsed();
    let ok = worst < 1e-9 && elapsed < Duration::from_secs(60);
    report(
        4,
        "delta3 equals P(r, s)",
        ok,
        &format!("max |delta3 - P| / (1 + |P|) = {worst:e} over {n} samples, {elapsed:.2?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_05_real_axis_law() {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for k in 1..=19 {
        let x = 0.05 * k as f64;
        let params = CubicParameters::new(c(x, 0.0), c(0.0, 0.0)).unwrap();
        let delta3 = classify_formula_rational(&params.rational(), &tol).deltas[2];
        let expect = 64.0 * (4.0 * x * x - 1.0).powi(3) * (16.0 * x * x - 1.0);
        worst = worst.max((delta3 - expect).abs() / expect.abs().max(1.0));
    }
    let mut verdicts = Vec::new();
    let mut ok_verdicts = true;
    for (x, want) in [
        (0.1, Verdict::Elliptic),
        (0.2, Verdict::Elliptic),
        (0.4, Verdict::Elliptic),
        (0.6, Verdict::Hyperbolic),
        (0.7, Verdict::Hyperbolic),
        (0.9, Verdict::Hyperbolic),
    ] {
        let f = CubicParameters::new(c(x, 0.0), c(0.0, 0.0)).unwrap().rational();
        let v = denjoy_wolff_rational(&f, &tol).verdict;
        ok_verdicts &= v == want;
        verdicts.push(format!("{x}:{v}"));
    }
    let f = CubicParameters::new(c(0.7, 0.0), c(0.0, 0.0)).unwrap().rational();
    let m = denjoy_wolff_rational(&f, &tol).multiplier.unwrap_or(f64::NAN);
    let ok = worst < 1e-9 && ok_verdicts && (m - 9.0 / 17.0).abs() < 1e-9;
    report(
        5,
        "s = 0 real-axis law",
        ok,
        &format!(
            "max rel err {worst:e}, oracle [{}], B'(w0) at r = 0.7: {m}",
            verdicts.join(" ")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_06_gap_surfaced() {
    let tol = Tolerances::default();
    let res = classify_cubic(&CubicParameters::new(c(0.1, 0.0), c(0.0, 0.0)).unwrap(), &tol);
    let gap_ok = res.verdict == Verdict::Elliptic
        && res
            .discrepancy
            .as_ref()
            .is_some_and(|d| d.p_value.is_some_and(|p| p > 0.0) && d.deltas[0] < 0.0);

    let mut r = rng(0x5eed_0006);
    let mut line_ok = true;
    for _ in 0..50 {
        let s = disk_sample(&mut r, 0.999);
        let res = classify_cubic(&CubicParameters::new(c(0.0, 0.0), s).unwrap(), &tol);
        line_ok &= res.oracle.verdict == Verdict::Elliptic && res.formula.degenerate && res.discrepancy.is_some();
    }
    let ok = gap_ok && line_ok;
    report(
        6,
        "P > 0 gap and r = 0 line",
        ok,
        &format!(
            "(0.1, 0): {} [{}]; r = 0 line over 50 s: {}",
            res.verdict,
            res.discrepancy.map(|d| d.to_string()).unwrap_or_default(),
            if line_ok { "oracle elliptic, chain degenerate" } else { "mismatch" }
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_07_divided_differences() {
    let mut r = rng(0x5eed_0007);
    let mut worst_boundary: f64 = 0.0;
    let mut interior_ok = true;
    for _ in 0..200 {
        let degree = r.gen_range(1..=5);
        let b = random_product(&mut r, degree, 0.95);
        let w = common::disk_point(&mut r, 0.95);
        let f = divided_difference_map(&b, w, 1).unwrap();
        for k in 0..64 {
            let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 64.0);
            worst_boundary = worst_boundary.max((f.eval(zeta).norm() - 1.0).abs());
        }
        if degree >= 2 {
            for _ in 0..8 {
                interior_ok &= f.eval(disk_sample(&mut r, 0.99)).norm() < 1.0;
            }
        }
    }

    let mut worst_invariance: f64 = 0.0;
    for _ in 0..100 {
        let degree = r.gen_range(2..=5);
        let b = random_product(&mut r, degree, 0.9);
        let psi = random_automorphism(&mut r, 0.9);
        let phi = random_automorphism(&mut r, 0.9);
        let moved = b.pre_compose(&phi).unwrap().post_compose(&psi).unwrap();
        let z = common::disk_point(&mut r, 0.9);
        let fz = phi.apply(z);
        worst_invariance = worst_invariance
            .max((h1(&moved, z).norm() - h1(&b, fz).norm()).abs())
            .max((h2(&moved, z).norm() - h2(&b, fz).norm()).abs());
    }
    let ok = worst_boundary < 1e-8 && interior_ok && worst_invariance < 1e-9;
    report(
        7,
        "divided-difference calculus",
        ok,
        &format!(
            "max boundary | |Δ_w B| - 1 | = {worst_boundary:e}, interior < 1: {interior_ok}, max invariance error {worst_invariance:e}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_normal_form_round_trip() {
    let mut r = rng(0x5eed_0008);
    let mut worst_residual: f64 = 0.0;
    let mut worst_pointwise: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..500 {
        let b = random_product(&mut r, 3, 0.95);
        let nf = match b.normal_form_cubic() {
            Ok(nf) => nf,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        worst_residual = worst_residual.max(nf.residual);
        let model = nf.params.to_blaschke().unwrap();
        let a = nf.automorphism;
        let a_inv = a.inverse();
        for _ in 0..50 {
            let z = disk_sample(&mut r, 0.95);
            let rebuilt = a.apply_complex(model.evaluate(a_inv.apply_complex(z)));
            worst_pointwise = worst_pointwise.max((rebuilt - b.evaluate(z)).norm());
        }
    }
    let ok = failures == 0 && worst_residual < 1e-8 && worst_pointwise < 1e-8;
    report(
        8,
        "normal-form round trip",
        ok,
        &format!("failures {failures}, max residual {worst_residual:e}, max pointwise error {worst_pointwise:e}"),
    );
    assert!(ok);
}

fn symmetric_under_half_turn(n: usize, class: impl Fn(usize, usize) -> PixelClass) -> usize {
    let mut bad = 0;
    for i in 0..n {
        for j in 0..n {
            if class(i, j) != class(n - 1 - i, n - 1 - j) {
                bad += 1;
            }
        }
    }
    bad
}

#[test]
fn criterion_09_slice_renders() {
    let mut details = Vec::new();
    let mut ok = true;

    let start = Instant::now();
    let grid = SliceGrid::render(&SliceOptions::new(DiskPoint::ORIGIN, 512)).unwrap();
    let t0 = start.elapsed();
    let inner_hyperbolic = grid
        .cells
        .iter()
        .filter(|cell| cell.r.norm() < 0.25 && cell.formula_class() == Some(PixelClass::Verdict(Verdict::Hyperbolic)))
        .count();
    ok &= inner_hyperbolic == 0 && t0 < Duration::from_secs(60);
    details.push(format!("s=0: {inner_hyperbolic} hyperbolic pixels with |r| < 1/4 ({t0:.2?})"));

    for s in [0.6, -0.8] {
        let start = Instant::now();
        let grid = SliceGrid::render(&SliceOptions::new(DiskPoint::real(s).unwrap(), 512)).unwrap();
        let t = start.elapsed();
        let bad = symmetric_under_half_turn(grid.resolution, |i, j| grid.class_at(i, j));
        ok &= bad == 0 && t < Duration::from_secs(60);
        details.push(format!("s={s}: {bad} asymmetric pixels ({t:.2?})"));
    }

    let start = Instant::now();
    let uni = UnicriticalGrid::render(3, 256, &Tolerances::default()).unwrap();
    let t = start.elapsed();
    let bad = symmetric_under_half_turn(uni.resolution, |i, j| uni.cell(i, j).class());
    ok &= bad == 0 && t < Duration::from_secs(60);
    details.push(format!("unicritical d=3: {bad} pixels break the half-turn ({t:.2?})"));

    report(9, "slice renders", ok, &details.join("; "));
    assert!(ok);
}

#[test]
fn criterion_10_root_location() {
    let tol = Tolerances::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut closest = f64::INFINITY;

    let mut families: Vec<(cubic_blaschke::poly::RationalFunction, Vec<f64>)> = Vec::new();
    for u in quadratic_samples() {
        let f = QuadraticParameter::new(u).unwrap().rational();
        let deltas = classify_formula_rational(&f, &tol).deltas;
        families.push((f, deltas));
    }
    for k in 1..=19 {
        let f = CubicParameters::new(c(0.05 * k as f64, 0.0), c(0.0, 0.0)).unwrap().rational();
        let deltas = classify_formula_rational(&f, &tol).deltas;
        families.push((f, deltas));
    }
    for (f, deltas) in &families {
        if denjoy_wolff_rational(f, &tol).verdict != Verdict::Hyperbolic {
            continue;
        }
        checked += 1;
        let margin = deltas.iter().all(|&d| d > 1e-6);
        let (ok, min) = q_roots_outside(f, margin);
        closest = closest.min(min);
        if !ok {
            bad.push(min);
        }
    }
    let ok = bad.is_empty() && checked > 0;
    report(
        10,
        "roots of q outside the disk when hyperbolic",
        ok,
        &format!("{checked} hyperbolic samples, min |root| = {closest}, violations {bad:?}"),
    );
    assert!(ok);
}
