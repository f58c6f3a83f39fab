use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubic_blaschke::dynamics::{classify, classify_cubic, classify_quadratic, ClassificationResult, Tolerances};
use cubic_blaschke::hypcalc::{h2, hyperbolic_zero_scan, inflection_point_cubic};
use cubic_blaschke::slice::{PixelClass, RgbImage, SliceGrid, SliceMode, SliceOptions, UnicriticalGrid};
use cubic_blaschke::{tol, Complex64, CubicParameters, DiskPoint, Error, QuadraticParameter, Verdict};

mod input;

// Output goes through here so a closed pipe (`| head`) ends quietly instead of panicking.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

use input::{parse_complex, ProductArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    /// Computation finished without a trustworthy answer.
    Undecided(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Undecided(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cubic-blaschke", version, about = "Dynamics and hyperbolic geometry of cubic Blaschke products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elliptic / parabolic / hyperbolic classification
    Classify(ClassifyArgs),
    /// Render a fixed-s slice of the cubic parameter space
    Slice(SliceArgs),
    /// Render the parameter space of ((z - w) / (1 - conj(w) z))^d
    Unicritical(UnicriticalArgs),
    /// Conjugate a quadratic or cubic to its normal form
    Normalize(NormalizeArgs),
    /// Critical points and the hyperbolic inflection point of a cubic
    Inflect(InflectArgs),
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Band on |B'(w0) - 1| treated as parabolic
    #[arg(long, default_value_t = tol::PARABOLIC_MULTIPLIER)]
    tol_parabolic: f64,

    /// Relative band on the Schur-Cohn constants treated as zero
    #[arg(long, default_value_t = tol::PARABOLIC_DELTA)]
    tol_delta: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Result<Tolerances, Failure> {
        if !(self.tol_parabolic >= 0.0 && self.tol_delta >= 0.0) {
            return Err(Failure::Usage("tolerances must be non-negative".into()));
        }
        Ok(Tolerances {
            delta: self.tol_delta,
            multiplier: self.tol_parabolic,
        })
    }
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Quadratic normal form (z^2 - u) / (1 - conj(u) z^2)
    #[arg(long, requires = "u", conflicts_with = "deg3")]
    deg2: bool,

    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    u: Option<Complex64>,

    /// Cubic normal form with parameters r, s
    #[arg(long, requires = "r")]
    deg3: bool,

    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    r: Option<Complex64>,

    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    s: Complex64,

    #[command(flatten)]
    product: ProductArgs,

    #[command(flatten)]
    tol: TolArgs,

    /// Print the full result as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Formula,
    Oracle,
    Both,
}

impl From<ModeArg> for SliceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Formula => SliceMode::Formula,
            ModeArg::Oracle => SliceMode::Oracle,
            ModeArg::Both => SliceMode::Both,
        }
    }
}

#[derive(Debug, Args)]
struct SliceArgs {
    /// Fixed parameter s
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Complex64,

    /// Pixels per axis
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(16..=8192))]
    resolution: u32,

    /// Half-width of the r window
    #[arg(long, default_value_t = 1.0)]
    extent: f64,

    #[arg(long, value_enum, default_value_t = ModeArg::Formula)]
    mode: ModeArg,

    /// Run the oracle on every pixel
    #[arg(long)]
    oracle_full: bool,

    /// PPM output
    #[arg(long)]
    out_image: PathBuf,

    #[arg(long)]
    out_csv: Option<PathBuf>,

    /// Disagreement overlay (mode both)
    #[arg(long)]
    out_diff: Option<PathBuf>,

    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct UnicriticalArgs {
    /// Degree d
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=6))]
    d: u32,

    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(16..=4096))]
    resolution: u32,

    #[arg(long)]
    out_image: PathBuf,

    #[arg(long)]
    out_csv: Option<PathBuf>,

    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct NormalizeArgs {
    #[command(flatten)]
    product: ProductArgs,
}

#[derive(Debug, Args)]
struct InflectArgs {
    #[command(flatten)]
    product: ProductArgs,

    /// Also search the disk for zeros of the hyperbolic derivative
    #[arg(long)]
    scan: bool,

    #[arg(long, default_value_t = 0.02)]
    grid_step: f64,

    /// Order of the hyperbolic derivative scanned (default 2, or 1 for degree 2)
    #[arg(long)]
    order: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Slice(args) => cmd_slice(args),
        Command::Unicritical(args) => cmd_unicritical(args),
        Command::Normalize(args) => cmd_normalize(args),
        Command::Inflect(args) => cmd_inflect(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("I/O error: {m}"),
                Failure::Undecided(m) => eprintln!("{m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let tol = args.tol.tolerances()?;
    let result = if args.deg2 {
        let u = args.u.expect("clap requires --u");
        classify_quadratic(&QuadraticParameter::new(u).map_err(usage)?, &tol)
    } else if args.deg3 {
        let r = args.r.expect("clap requires --r");
        classify_cubic(&CubicParameters::new(r, args.s).map_err(usage)?, &tol)
    } else if args.product.is_given() {
        let b = args.product.build()?;
        classify(&b, &tol).map_err(usage)?
    } else {
        return Err(Failure::Usage(
            "give --deg2 --u, --deg3 --r --s, --zeros, --record or --random".into(),
        ));
    };
    if args.json {
        let text = serde_json::to_string_pretty(&result).map_err(|e| Failure::Io(e.to_string()))?;
        say!("{text}");
    } else {
        print_classification(&result);
    }
    if result.verdict == Verdict::Indeterminate {
        return Err(Failure::Undecided("classification is indeterminate".into()));
    }
    Ok(())
}

fn fmt_opt_complex(z: Option<Complex64>) -> String {
    z.map(|z| format!("{z:.15}")).unwrap_or_else(|| "-".into())
}

fn print_classification(res: &ClassificationResult) {
    let deltas: Vec<String> = res.deltas.iter().map(|d| format!("{d:e}")).collect();
    say!("verdict      {}", res.verdict);
    say!("route        {}", res.route);
    say!("formula      {}{}", res.formula.verdict, if res.degenerate { " (degenerate chain)" } else { "" });
    say!("oracle       {}", res.oracle.verdict);
    say!("deltas       [{}]", deltas.join(", "));
    if let Some(p) = res.p_value {
        say!("P(r,s)       {p:e}");
    }
    say!("dw_point     {}", fmt_opt_complex(res.dw_point));
    say!(
        "multiplier   {}",
        res.multiplier.map(|m| m.to_string()).unwrap_or_else(|| "-".into())
    );
    match &res.discrepancy {
        Some(d) => say!("discrepancy  {d}"),
        None => say!("discrepancy  none"),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_image(path: &Path, img: &RgbImage) -> Result<(), Failure> {
    let mut out = create(path)?;
    img.write_ppm(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_csv(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), Failure> {
    let mut out = create(path)?;
    write(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn tally(classes: impl Iterator<Item = PixelClass>) -> String {
    let mut counts = [0usize; 5];
    for c in classes {
        let k = match c {
            PixelClass::Verdict(Verdict::Elliptic) => 0,
            PixelClass::Verdict(Verdict::Parabolic) => 1,
            PixelClass::Verdict(Verdict::Hyperbolic) => 2,
            PixelClass::Verdict(Verdict::Indeterminate) => 3,
            PixelClass::Exterior => 4,
        };
        counts[k] += 1;
    }
    format!(
        "elliptic {} parabolic {} hyperbolic {} indeterminate {} exterior {}",
        counts[0], counts[1], counts[2], counts[3], counts[4]
    )
}

fn cmd_slice(args: SliceArgs) -> Result<(), Failure> {
    let tolerances = args.tol.tolerances()?;
    let mode = SliceMode::from(args.mode);
    if args.out_diff.is_some() && mode != SliceMode::Both {
        return Err(Failure::Usage("--out-diff needs --mode both".into()));
    }
    if !(args.extent > 0.0 && args.extent.is_finite()) {
        return Err(Failure::Usage("--extent must be positive".into()));
    }
    let s = DiskPoint::new(args.s).map_err(usage)?;
    let opts = SliceOptions {
        s,
        resolution: args.resolution as usize,
        extent: args.extent,
        mode,
        oracle_full: args.oracle_full,
        tolerances,
    };
    let start = Instant::now();
    let grid = SliceGrid::render(&opts).map_err(usage)?;
    let elapsed = start.elapsed();

    write_image(&args.out_image, &grid.image())?;
    if let Some(path) = &args.out_csv {
        write_csv(path, |w| grid.write_csv(w))?;
    }
    if let Some(path) = &args.out_diff {
        write_image(path, &grid.diff_image())?;
    }
    let n = grid.resolution;
    let classes = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| grid.class_at(i, j));
    say!("slice s = {} at {n}x{n}, extent {}: {}", args.s, args.extent, tally(classes));
    if mode == SliceMode::Both {
        say!("disagreements {}", grid.disagreement_count());
    }
    say!("elapsed {elapsed:.2?}");
    Ok(())
}

fn cmd_unicritical(args: UnicriticalArgs) -> Result<(), Failure> {
    let tolerances = args.tol.tolerances()?;
    let start = Instant::now();
    let grid = UnicriticalGrid::render(args.d as usize, args.resolution as usize, &tolerances).map_err(usage)?;
    let elapsed = start.elapsed();
    write_image(&args.out_image, &grid.image())?;
    if let Some(path) = &args.out_csv {
        write_csv(path, |w| grid.write_csv(w))?;
    }
    say!(
        "unicritical d = {} at {n}x{n}: {}",
        args.d,
        tally(grid.cells.iter().map(|c| c.class())),
        n = grid.resolution
    );
    say!("elapsed {elapsed:.2?}");
    Ok(())
}

fn residual_failure(e: Error) -> Failure {
    match e {
        Error::NormalForm { residual, candidate } => {
            let c: Vec<String> = candidate.iter().map(|z| z.to_string()).collect();
            Failure::Undecided(format!(
                "normal form residual {residual:e} above {:e}; best candidate [{}]",
                tol::NORMAL_FORM,
                c.join(", ")
            ))
        }
        Error::Degree { .. } => Failure::Usage(e.to_string()),
        other => Failure::Undecided(other.to_string()),
    }
}

fn cmd_normalize(args: NormalizeArgs) -> Result<(), Failure> {
    let b = args.product.build()?;
    match b.degree() {
        2 => {
            let nf = b.normal_form_quadratic().map_err(residual_failure)?;
            say!("degree       2");
            say!("u            {}", tidy(nf.param.u));
            print_automorphism(&nf.automorphism);
            say!("residual     {:e}", nf.residual);
        }
        3 => {
            let nf = b.normal_form_cubic().map_err(residual_failure)?;
            say!("degree       3");
            say!("r            {}", tidy(nf.params.r));
            say!("s            {}", tidy(nf.params.s));
            print_automorphism(&nf.automorphism);
            say!("residual     {:e}", nf.residual);
        }
        d => return Err(Failure::Usage(format!("normal forms exist for degree 2 and 3, not {d}"))),
    }
    Ok(())
}

fn print_automorphism(a: &cubic_blaschke::DiskAutomorphism) {
    // A(z) = rotation * (z - center) / (1 - conj(center) z); the normal form is A^-1 B A
    say!("rotation     {}", tidy(a.rotation.value()));
    say!("center       {}", tidy(a.center.value()));
}

fn tidy(z: impl Into<Complex64>) -> Complex64 {
    let z: Complex64 = z.into();
    // drop signed zeros
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

fn cmd_inflect(args: InflectArgs) -> Result<(), Failure> {
    let b = args.product.build()?;
    let d = b.degree();
    if d == 3 {
        let crit = b.critical_points().map_err(residual_failure)?;
        let (m, residual) = inflection_point_cubic(&b).map_err(residual_failure)?;
        say!("c1           {}", tidy(crit[0]));
        say!("c2           {}", tidy(crit[1]));
        say!("midpoint     {}", tidy(m.value()));
        say!("|H2 B(m)|    {residual:e}");
        if !args.scan && residual >= 1e-8 {
            return Err(Failure::Undecided(format!("|H2 B(m)| = {residual:e} is not below 1e-8")));
        }
    } else if !args.scan {
        return Err(Failure::Usage(format!("the midpoint test needs degree 3 (got {d}); use --scan")));
    }
    if args.scan {
        if !(2..=5).contains(&d) {
            return Err(Failure::Usage(format!("--scan supports degree 2 to 5, got {d}")));
        }
        let order = args.order.unwrap_or(if d == 2 { 1 } else { 2 });
        let found = hyperbolic_zero_scan(&b, order, args.grid_step).map_err(usage)?;
        say!("scan order {order}, grid step {}: {} zero(s)", args.grid_step, found.len());
        for (p, v) in &found {
            let check = if order == 2 { format!(" (|H2| recomputed {:e})", h2(&b, *p).norm()) } else { String::new() };
            say!("  {p}  |H{order}| = {v:e}{check}");
        }
    }
    Ok(())
}
