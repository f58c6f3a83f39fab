//! Parameter-space rasters.
//!
//! A cubic slice fixes `s` and classifies `r` over the square
//! `[-extent, extent]^2`; the unicritical raster classifies
//! `((z - w) / (1 - conj(w) z))^d` over `w` in `[-1, 1]^2`. Pixel centres are
//! placed symmetrically about the origin, so reflecting a pixel index negates
//! its coordinate exactly. Row `0` is the top (largest imaginary part).

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::CubicParameters;
use crate::dynamics::{
    classify_formula_rational, denjoy_wolff_rational, p_discriminant, OracleReport, Tolerances, Verdict,
};
use crate::error::{Error, Result};
use crate::hypgeo::DiskPoint;
use crate::poly::{ComplexPolynomial, RationalFunction};

pub const ELLIPTIC_RGB: [u8; 3] = [30, 30, 30];
pub const HYPERBOLIC_RGB: [u8; 3] = [230, 230, 230];
pub const PARABOLIC_RGB: [u8; 3] = [220, 60, 60];
pub const EXTERIOR_RGB: [u8; 3] = [0, 0, 0];
pub const DISAGREEMENT_RGB: [u8; 3] = [255, 200, 0];
pub const INDETERMINATE_RGB: [u8; 3] = [60, 90, 200];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceMode {
    Formula,
    Oracle,
    Both,
}

/// What a pixel shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PixelClass {
    Exterior,
    Verdict(Verdict),
}

impl PixelClass {
    pub fn rgb(self) -> [u8; 3] {
        match self {
            PixelClass::Exterior => EXTERIOR_RGB,
            PixelClass::Verdict(Verdict::Elliptic) => ELLIPTIC_RGB,
            PixelClass::Verdict(Verdict::Hyperbolic) => HYPERBOLIC_RGB,
            PixelClass::Verdict(Verdict::Parabolic) => PARABOLIC_RGB,
            PixelClass::Verdict(Verdict::Indeterminate) => INDETERMINATE_RGB,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            PixelClass::Exterior => "exterior",
            PixelClass::Verdict(v) => v.code(),
        }
    }
}

/// Centre of pixel `index` on an axis with `resolution` pixels over `[-extent, extent]`.
pub fn pixel_coordinate(index: usize, resolution: usize, extent: f64) -> f64 {
    let twice = 2 * index as i64 + 1 - resolution as i64;
    twice as f64 / resolution as f64 * extent
}

/// Parameter at row `i`, column `j`.
pub fn pixel_point(i: usize, j: usize, resolution: usize, extent: f64) -> Complex64 {
    Complex64::new(
        pixel_coordinate(j, resolution, extent),
        -pixel_coordinate(i, resolution, extent),
    )
}

/// 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, fill: [u8; 3]) -> Self {
        RgbImage {
            width,
            height,
            pixels: vec![fill; width * height],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> [u8; 3] {
        self.pixels[i * self.width + j]
    }

    pub fn set(&mut self, i: usize, j: usize, rgb: [u8; 3]) {
        self.pixels[i * self.width + j] = rgb;
    }

    /// Binary PPM (`P6`).
    pub fn write_ppm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        out.write_all(&bytes)
    }

    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(20 + 3 * self.pixels.len());
        self.write_ppm(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn read_ppm(bytes: &[u8]) -> Result<Self> {
        let bad = || Error::Parse("malformed PPM".into());
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad());
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad())?.to_string());
        }
        pos += 1;
        if fields[0] != "P6" || fields[3] != "255" {
            return Err(bad());
        }
        let width: usize = fields[1].parse().map_err(|_| bad())?;
        let height: usize = fields[2].parse().map_err(|_| bad())?;
        let data = bytes.get(pos..pos + 3 * width * height).ok_or_else(bad)?;
        Ok(RgbImage {
            width,
            height,
            pixels: data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaCell {
    pub verdict: Verdict,
    pub deltas: Vec<f64>,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleCell {
    pub verdict: Verdict,
    pub dw_point: Option<Complex64>,
    pub multiplier: Option<f64>,
}

impl From<&OracleReport> for OracleCell {
    fn from(r: &OracleReport) -> Self {
        OracleCell {
            verdict: r.verdict,
            dw_point: r.dw_point,
            multiplier: r.multiplier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceCell {
    pub r: Complex64,
    pub exterior: bool,
    pub formula: Option<FormulaCell>,
    pub oracle: Option<OracleCell>,
}

impl SliceCell {
    pub fn formula_class(&self) -> Option<PixelClass> {
        if self.exterior {
            return Some(PixelClass::Exterior);
        }
        self.formula.as_ref().map(|f| PixelClass::Verdict(f.verdict))
    }

    pub fn oracle_class(&self) -> Option<PixelClass> {
        if self.exterior {
            return Some(PixelClass::Exterior);
        }
        self.oracle.map(|o| PixelClass::Verdict(o.verdict))
    }

    /// Both routes present and different, ignoring differences that involve the parabolic band.
    pub fn disagrees(&self) -> bool {
        match (&self.formula, &self.oracle) {
            (Some(f), Some(o)) => {
                f.verdict != o.verdict && f.verdict != Verdict::Parabolic && o.verdict != Verdict::Parabolic
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceOptions {
    pub s: DiskPoint,
    pub resolution: usize,
    pub extent: f64,
    pub mode: SliceMode,
    /// Run the oracle at every pixel instead of one pixel per 2x2 block.
    pub oracle_full: bool,
    pub tolerances: Tolerances,
}

impl SliceOptions {
    pub fn new(s: DiskPoint, resolution: usize) -> Self {
        SliceOptions {
            s,
            resolution,
            extent: 1.0,
            mode: SliceMode::Formula,
            oracle_full: false,
            tolerances: Tolerances::default(),
        }
    }
}

/// Classification of the `r`-plane at fixed `s`.
///
/// In oracle mode without `oracle_full` the grid itself has half the requested
/// resolution, so every stored cell carries an oracle verdict. In `both` mode
/// the formula covers every pixel and the oracle runs where both indices are
/// even (or everywhere with `oracle_full`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceGrid {
    pub s: DiskPoint,
    pub resolution: usize,
    pub extent: f64,
    pub mode: SliceMode,
    pub cells: Vec<SliceCell>,
}

impl SliceGrid {
    pub fn render(opts: &SliceOptions) -> Result<Self> {
        if opts.resolution == 0 {
            return Err(Error::InvalidArgument("resolution must be positive".into()));
        }
        if !(opts.extent > 0.0 && opts.extent.is_finite()) {
            return Err(Error::InvalidArgument(format!("extent {} must be positive", opts.extent)));
        }
        let resolution = if opts.mode == SliceMode::Oracle && !opts.oracle_full {
            (opts.resolution / 2).max(1)
        } else {
            opts.resolution
        };
        let s = opts.s.value();
        let tol = opts.tolerances;
        let cells: Vec<SliceCell> = (0..resolution)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..resolution).map(move |j| {
                    let r = pixel_point(i, j, resolution, opts.extent);
                    let exterior = r.norm() >= 1.0;
                    let mut cell = SliceCell {
                        r,
                        exterior,
                        formula: None,
                        oracle: None,
                    };
                    if exterior {
                        return cell;
                    }
                    let params = CubicParameters::new(r, s).expect("r and s checked inside the disk");
                    let f = params.rational();
                    if opts.mode != SliceMode::Oracle {
                        let rep = classify_formula_rational(&f, &tol);
                        cell.formula = Some(FormulaCell {
                            verdict: rep.verdict,
                            deltas: rep.deltas,
                            p_value: p_discriminant(&params),
                        });
                    }
                    let run_oracle = match opts.mode {
                        SliceMode::Formula => false,
                        SliceMode::Oracle => true,
                        SliceMode::Both => opts.oracle_full || (i % 2 == 0 && j % 2 == 0),
                    };
                    if run_oracle {
                        cell.oracle = Some(OracleCell::from(&denjoy_wolff_rational(&f, &tol)));
                    }
                    cell
                })
            })
            .collect();
        Ok(SliceGrid {
            s: opts.s,
            resolution,
            extent: opts.extent,
            mode: opts.mode,
            cells,
        })
    }

    pub fn cell(&self, i: usize, j: usize) -> &SliceCell {
        &self.cells[i * self.resolution + j]
    }

    /// The class drawn in the main image: the formula verdict unless in oracle mode.
    pub fn class_at(&self, i: usize, j: usize) -> PixelClass {
        let cell = self.cell(i, j);
        let class = match self.mode {
            SliceMode::Oracle => cell.oracle_class(),
            _ => cell.formula_class(),
        };
        class.unwrap_or(PixelClass::Verdict(Verdict::Indeterminate))
    }

    pub fn image(&self) -> RgbImage {
        let n = self.resolution;
        let mut img = RgbImage::new(n, n, EXTERIOR_RGB);
        for i in 0..n {
            for j in 0..n {
                img.set(i, j, self.class_at(i, j).rgb());
            }
        }
        img
    }

    /// Main image with formula/oracle disagreements overlaid.
    pub fn diff_image(&self) -> RgbImage {
        let mut img = self.image();
        let n = self.resolution;
        for i in 0..n {
            for j in 0..n {
                if self.cell(i, j).disagrees() {
                    img.set(i, j, DISAGREEMENT_RGB);
                }
            }
        }
        img
    }

    pub fn disagreement_count(&self) -> usize {
        self.cells.iter().filter(|c| c.disagrees()).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "re_r,im_r,delta1,delta2,delta3,p_value,verdict_formula,verdict_oracle,dw_re,dw_im,multiplier"
        )?;
        for cell in &self.cells {
            let mut row = vec![cell.r.re.to_string(), cell.r.im.to_string()];
            match &cell.formula {
                Some(f) => {
                    for k in 0..3 {
                        row.push(f.deltas.get(k).map(|d| d.to_string()).unwrap_or_default());
                    }
                    row.push(f.p_value.to_string());
                }
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            let formula_code = match (self.mode, cell.formula_class()) {
                (SliceMode::Oracle, _) => String::new(),
                (_, Some(c)) => c.code().to_string(),
                (_, None) => String::new(),
            };
            row.push(formula_code);
            let oracle_code = match (self.mode, cell.oracle_class()) {
                (SliceMode::Formula, _) => String::new(),
                (_, Some(c)) if cell.exterior || cell.oracle.is_some() => c.code().to_string(),
                _ => String::new(),
            };
            row.push(oracle_code);
            push_oracle_columns(&mut row, cell.oracle.as_ref());
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn push_oracle_columns(row: &mut Vec<String>, oracle: Option<&OracleCell>) {
    let dw = oracle.and_then(|o| o.dw_point);
    row.push(dw.map(|z| z.re.to_string()).unwrap_or_default());
    row.push(dw.map(|z| z.im.to_string()).unwrap_or_default());
    row.push(oracle.and_then(|o| o.multiplier).map(|m| m.to_string()).unwrap_or_default());
}

/// `((z - w) / (1 - conj(w) z))^d` as `N / D` with `D(0) = 1`.
pub fn unicritical_rational(w: Complex64, d: usize) -> RationalFunction {
    let one = Complex64::new(1.0, 0.0);
    let num = ComplexPolynomial::from_roots(&vec![w; d]);
    let lin = ComplexPolynomial::new(vec![one, -w.conj()]);
    let den = (0..d).fold(ComplexPolynomial::constant(one), |acc, _| &acc * &lin);
    RationalFunction::new(num, den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnicriticalCell {
    pub w: Complex64,
    pub exterior: bool,
    pub oracle: Option<OracleCell>,
}

impl UnicriticalCell {
    pub fn class(&self) -> PixelClass {
        match self.oracle {
            _ if self.exterior => PixelClass::Exterior,
            Some(o) => PixelClass::Verdict(o.verdict),
            None => PixelClass::Verdict(Verdict::Indeterminate),
        }
    }
}

/// Oracle classification of the unicritical family over `w` in `[-1, 1]^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnicriticalGrid {
    pub degree: usize,
    pub resolution: usize,
    pub cells: Vec<UnicriticalCell>,
}

impl UnicriticalGrid {
    pub fn render(degree: usize, resolution: usize, tolerances: &Tolerances) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Degree {
                expected: ">= 2",
                found: degree,
            });
        }
        if resolution == 0 {
            return Err(Error::InvalidArgument("resolution must be positive".into()));
        }
        let cells = (0..resolution)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..resolution).map(move |j| {
                    let w = pixel_point(i, j, resolution, 1.0);
                    if w.norm() >= 1.0 {
                        return UnicriticalCell {
                            w,
                            exterior: true,
                            oracle: None,
                        };
                    }
                    let rep = denjoy_wolff_rational(&unicritical_rational(w, degree), tolerances);
                    UnicriticalCell {
                        w,
                        exterior: false,
                        oracle: Some(OracleCell::from(&rep)),
                    }
                })
            })
            .collect();
        Ok(UnicriticalGrid {
            degree,
            resolution,
            cells,
        })
    }

    pub fn cell(&self, i: usize, j: usize) -> &UnicriticalCell {
        &self.cells[i * self.resolution + j]
    }

    pub fn image(&self) -> RgbImage {
        let n = self.resolution;
        let mut img = RgbImage::new(n, n, EXTERIOR_RGB);
        for i in 0..n {
            for j in 0..n {
                img.set(i, j, self.cell(i, j).class().rgb());
            }
        }
        img
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "re_w,im_w,verdict_oracle,dw_re,dw_im,multiplier")?;
        for cell in &self.cells {
            let mut row = vec![cell.w.re.to_string(), cell.w.im.to_string(), cell.class().code().to_string()];
            push_oracle_columns(&mut row, cell.oracle.as_ref());
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}
