#![allow(dead_code)]

use std::io::Write;

use cubic_blaschke::{Complex64, DiskAutomorphism, DiskPoint, FiniteBlaschkeProduct, UnitModulus};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample of the disk `|z| <= radius`.
pub fn disk_sample<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let rho = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(rho, theta)
}

pub fn disk_point<R: Rng>(rng: &mut R, radius: f64) -> DiskPoint {
    loop {
        if let Ok(p) = DiskPoint::new(disk_sample(rng, radius)) {
            return p;
        }
    }
}

pub fn unit<R: Rng>(rng: &mut R) -> UnitModulus {
    UnitModulus::from_angle(rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_product<R: Rng>(rng: &mut R, degree: usize, radius: f64) -> FiniteBlaschkeProduct {
    let zeros = (0..degree).map(|_| disk_point(rng, radius)).collect();
    FiniteBlaschkeProduct::new(zeros, unit(rng)).unwrap()
}

pub fn random_automorphism<R: Rng>(rng: &mut R, radius: f64) -> DiskAutomorphism {
    DiskAutomorphism::new(unit(rng), disk_point(rng, radius))
}

/// One line per criterion on stderr, written past the test harness capture.
pub fn report(id: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let line = format!("[acceptance] criterion {id:>2} {status}  {name}: {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}
