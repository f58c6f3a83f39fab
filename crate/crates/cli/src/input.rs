//! Parsing of complex numbers and Blaschke product inputs.

use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use cubic_blaschke::{Complex64, DiskPoint, FiniteBlaschkeProduct, UnitModulus};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Failure;

/// Accepts `a`, `bi`, `a+bi`, `a-bi` and `re,im`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = compact.split_once(',') {
        let re = re.parse::<f64>().map_err(|e| format!("`{text}`: {e}"))?;
        let im = im.parse::<f64>().map_err(|e| format!("`{text}`: {e}"))?;
        return Ok(Complex64::new(re, im));
    }
    let z = Complex64::from_str(&compact).map_err(|_| format!("`{text}` is not a complex number"))?;
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

/// Ways to specify a product on the command line.
#[derive(Debug, Args)]
pub struct ProductArgs {
    /// Zeros separated by `;`, e.g. "0.1+0.2i; -0.3; 0.5i"
    #[arg(long, value_delimiter = ';', value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeros: Vec<Complex64>,

    /// Unimodular factor
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    pub mu: Complex64,

    /// Plain-text record (`degree`, `zero` and `mu` lines)
    #[arg(long, conflicts_with = "zeros")]
    pub record: Option<PathBuf>,

    /// Draw a random product (zeros uniform in |z| <= 0.95)
    #[arg(long, conflicts_with_all = ["zeros", "record"])]
    pub random: bool,

    /// Degree of the random product
    #[arg(long, default_value_t = 3, requires = "random")]
    pub degree: usize,

    /// Seed for --random
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ProductArgs {
    pub fn is_given(&self) -> bool {
        !self.zeros.is_empty() || self.record.is_some() || self.random
    }

    pub fn build(&self) -> Result<FiniteBlaschkeProduct, Failure> {
        if let Some(path) = &self.record {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            return FiniteBlaschkeProduct::from_record(&text).map_err(|e| Failure::Usage(e.to_string()));
        }
        if self.random {
            return Ok(random_product(self.degree, self.seed));
        }
        if self.zeros.is_empty() {
            return Err(Failure::Usage("give --zeros, --record or --random".into()));
        }
        let zeros = self
            .zeros
            .iter()
            .map(|&z| DiskPoint::new(z))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        let mu = UnitModulus::with_tolerance(self.mu, 1e-9).map_err(|e| Failure::Usage(e.to_string()))?;
        FiniteBlaschkeProduct::new(zeros, mu).map_err(|e| Failure::Usage(e.to_string()))
    }
}

pub fn random_product(degree: usize, seed: u64) -> FiniteBlaschkeProduct {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zeros = (0..degree.max(1))
        .map(|_| {
            let rho = 0.95 * rng.gen::<f64>().sqrt();
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            DiskPoint::new(Complex64::from_polar(rho, theta)).expect("radius below one")
        })
        .collect();
    let mu = UnitModulus::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
    FiniteBlaschkeProduct::new(zeros, mu).expect("non-empty zeros")
}
