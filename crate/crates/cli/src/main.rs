#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use curvesig::curve::{check_class_bound, check_generic, ClassBoundReport, GenericityTolerances};
use curvesig::inverse::Reparameterization;
use curvesig::io::{
    curve_to_json, diagram_to_json, occupancy_sidecar, occupancy_to_pgm, read_curve, to_json,
    write_curve,
};
use curvesig::matching::default_delta;
use curvesig::{
    build_reparameterization, decide_equivalence, generate, line_diagram, perturb_smooth, rank_h0,
    reconstruct_image, reflect, sigma2_distance, AdmissibleLine, BoundingBox, CorpusKind,
    CorpusParams, CurveOracle, CurveSigError, EquivalenceVerdict, GenericityReport, LineGrid,
    Point, Reflection, SampledCurve, Verdict,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

/// Reflection-augmented persistence signatures of closed planar curves.
#[derive(Parser, Debug)]
#[command(name = "curvesig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a corpus curve.
    Gencurve(GencurveArgs),
    /// Report immersion, double points and class bounds of a curve.
    Check(CheckArgs),
    /// Persistent Betti number of a curve at one query pair.
    Rank(RankArgs),
    /// Degree-0 diagram of a curve restricted to one admissible line.
    Diagram(DiagramArgs),
    /// Grid-sampled matching distances for all four reflections.
    Distance(DistanceArgs),
    /// Decide whether two curves are reparameterizations of each other.
    Decide(DecideArgs),
    /// Rebuild the image of a curve from rank queries alone.
    Reconstruct(ReconstructArgs),
    /// Measure signature distances under perturbations of known size.
    StabilityHarness(HarnessArgs),
}

#[derive(Args, Debug)]
struct GencurveArgs {
    #[arg(long)]
    kind: CorpusKind,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Ellipse semi-axes as `a,b`.
    #[arg(long, allow_hyphen_values = true, default_value = "2,1")]
    semi_axes: Pair,
    /// Ellipse rotation in radians.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    rotation: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
    center: Pair,
    #[arg(long, default_value_t = 4)]
    harmonics: usize,
    /// Output file; `.csv` selects CSV, anything else JSON. Defaults to stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    tol_speed: Option<f64>,
    #[arg(long)]
    tol_angle: Option<f64>,
    /// Class bound: injectivity radius and length at least 1/k, curvature at most k.
    #[arg(long, default_value_t = 10.0)]
    k: f64,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    u: Pair,
    #[arg(long, allow_hyphen_values = true)]
    v: Pair,
    #[arg(long, default_value = "id")]
    reflection: Reflection,
}

#[derive(Args, Debug)]
struct DiagramArgs {
    #[arg(long)]
    input: PathBuf,
    /// Direction angle of the line, in (0, pi/2).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    phi: f64,
    /// Offset: the line passes through (beta, -beta).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value = "id")]
    reflection: Reflection,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Number of line directions K.
    #[arg(long, default_value_t = 32)]
    lines: usize,
    /// Number of line offsets M.
    #[arg(long, default_value_t = 32)]
    offsets: usize,
    /// Offset half-range B; defaults to 2 * max |coordinate| + 1.
    #[arg(long)]
    offset_range: Option<f64>,
}

impl GridArgs {
    fn grid(&self, f: &SampledCurve, g: &SampledCurve) -> curvesig::Result<LineGrid> {
        match self.offset_range {
            Some(b) => LineGrid::new(self.lines, self.offsets, b),
            None => LineGrid::for_curves(self.lines, self.offsets, [f, g]),
        }
    }
}

#[derive(Args, Debug)]
struct DistanceArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Equivalence threshold; defaults to 1e-3 times the joint bounding-box diagonal.
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// On an Equivalent verdict, also build the vertex correspondence.
    #[arg(long)]
    reparameterize: bool,
    /// Nearest-point tolerance for the correspondence.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    cell: f64,
    /// `xmin,ymin,xmax,ymax`; defaults to the curve's bounding box grown by two cells.
    #[arg(long, allow_hyphen_values = true)]
    bbox: Option<Quad>,
    /// PGM output; the sidecar goes next to it with a `.json` extension.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct HarnessArgs {
    #[arg(long)]
    kind: CorpusKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated perturbation sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct Pair(f64, f64);

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match parse_floats(s)?.as_slice() {
            [x, y] => Ok(Pair(*x, *y)),
            _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Quad([f64; 4]);

impl FromStr for Quad {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_floats(s)?
            .try_into()
            .map(Quad)
            .map_err(|_| format!("expected four comma-separated numbers, got `{s}`"))
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

/// Failure carrying its exit status and a stable message prefix.
struct Failure {
    code: u8,
    tag: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            tag: "usage",
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: 2,
            tag: "io",
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<CurveSigError> for Failure {
    fn from(e: CurveSigError) -> Self {
        let (code, tag) = match &e {
            CurveSigError::Parse(_) => (1, "parse"),
            CurveSigError::InvalidCurve(_) => (1, "invalid-curve"),
            CurveSigError::DegenerateCurve { .. } => (1, "degenerate-curve"),
            CurveSigError::InvalidQuery(_) => (1, "invalid-query"),
            CurveSigError::EssentialMismatch { .. } => (2, "essential-mismatch"),
            CurveSigError::RejectionExhausted { .. } => (2, "rejection-exhausted"),
            CurveSigError::NoCorrespondence { .. } => (2, "no-correspondence"),
            CurveSigError::NotMonotone(_) => (2, "not-monotone"),
        };
        Failure {
            code,
            tag,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gencurve(args: GencurveArgs) -> Outcome {
    let params = CorpusParams {
        radius: args.radius,
        semi_axes: (args.semi_axes.0, args.semi_axes.1),
        rotation: args.rotation,
        center: Point::new(args.center.0, args.center.1),
        harmonics: args.harmonics,
    };
    let curve = generate(args.kind, args.samples, args.seed, &params)?;
    match &args.output {
        Some(path) => write_curve(path, &curve).map_err(|e| Failure::io(path, e)),
        None => emit(None, &(curve_to_json(&curve) + "\n")),
    }
}

#[derive(Serialize)]
struct CheckOutput {
    genericity: GenericityReport,
    class_bound: ClassBoundReport,
}

fn check(args: CheckArgs) -> Outcome {
    let curve = read_curve(&args.input)?;
    let defaults = GenericityTolerances::default_for(&curve);
    let tol_speed = args.tol_speed.unwrap_or(defaults.tol_speed);
    let tol_angle = args.tol_angle.unwrap_or(defaults.tol_angle);
    if !(tol_speed > 0.0 && tol_angle > 0.0 && args.k > 0.0) {
        return Err(Failure::usage("tolerances and k must be positive"));
    }
    let out = CheckOutput {
        genericity: check_generic(&curve, tol_speed, tol_angle)?,
        class_bound: check_class_bound(&curve, args.k)?,
    };
    emit(None, &(to_json(&out) + "\n"))
}

fn rank(args: RankArgs) -> Outcome {
    let curve = reflect(&read_curve(&args.input)?, args.reflection);
    let r = rank_h0(
        &curve,
        Point::new(args.u.0, args.u.1),
        Point::new(args.v.0, args.v.1),
    )?;
    emit(None, &format!("{r}\n"))
}

fn diagram(args: DiagramArgs) -> Outcome {
    let curve = reflect(&read_curve(&args.input)?, args.reflection);
    let line = AdmissibleLine::new(args.phi, args.beta)?;
    emit(
        args.output.as_deref(),
        &(diagram_to_json(&line_diagram(&curve, &line)) + "\n"),
    )
}

fn distance(args: DistanceArgs) -> Outcome {
    let f = read_curve(&args.a)?;
    let g = read_curve(&args.b)?;
    let table = sigma2_distance(&f, &g, &args.grid.grid(&f, &g)?)?;
    emit(args.output.as_deref(), &(to_json(&table.report()) + "\n"))
}

#[derive(Serialize)]
struct DecideOutput<'a> {
    #[serde(flatten)]
    verdict: &'a EquivalenceVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    reparameterization: Option<Reparameterization>,
}

fn decide(args: DecideArgs) -> Outcome {
    let f = read_curve(&args.a)?;
    let g = read_curve(&args.b)?;
    let delta = args.delta.unwrap_or_else(|| default_delta(&f, &g));
    let verdict = decide_equivalence(&f, &g, delta, &args.grid.grid(&f, &g)?)?;
    let reparameterization = if args.reparameterize && verdict.verdict == Verdict::Equivalent {
        Some(build_reparameterization(&f, &g, args.tol)?)
    } else {
        None
    };
    let out = DecideOutput {
        verdict: &verdict,
        reparameterization,
    };
    emit(args.output.as_deref(), &(to_json(&out) + "\n"))
}

fn reconstruct(args: ReconstructArgs) -> Outcome {
    let curve = read_curve(&args.input)?;
    if !(args.cell > 0.0) {
        return Err(Failure::usage(format!(
            "cell must be positive, got {}",
            args.cell
        )));
    }
    let bbox = match args.bbox {
        Some(Quad([x0, y0, x1, y1])) => BoundingBox::new(x0, y0, x1, y1)?,
        None => {
            let (lo, hi) = curve.bbox();
            let pad = 2.0 * args.cell;
            BoundingBox::new(lo.x - pad, lo.y - pad, hi.x + pad, hi.y + pad)?
        }
    };
    let grid = reconstruct_image(&CurveOracle::new(&curve), bbox, args.cell)?;
    let sidecar = args.output.with_extension("json");
    if sidecar == args.output {
        return Err(Failure::usage(
            "output must not have a .json extension; it is reserved for the sidecar",
        ));
    }
    std::fs::write(&args.output, occupancy_to_pgm(&grid))
        .map_err(|e| Failure::io(&args.output, e))?;
    std::fs::write(&sidecar, occupancy_sidecar(&grid) + "\n").map_err(|e| Failure::io(&sidecar, e))
}

fn stability_harness(args: HarnessArgs) -> Outcome {
    let f = generate(args.kind, args.samples, args.seed, &CorpusParams::default())?;
    let mut csv = String::from("eps,dmatch_max,bound_ok\n");
    for (k, &eps) in args.eps.iter().enumerate() {
        let g = perturb_smooth(&f, eps, args.seed.wrapping_add(k as u64 + 1))?;
        let d = sigma2_distance(&f, &g, &args.grid.grid(&f, &g)?)?.max_over_sigma2;
        writeln!(csv, "{eps},{d},{}", d <= eps + 1e-12).unwrap();
    }
    emit(args.output.as_deref(), &csv)
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var("CURVESIG_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::usage(format!(
            "CURVESIG_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Gencurve(a) => gencurve(a),
        Command::Check(a) => check(a),
        Command::Rank(a) => rank(a),
        Command::Diagram(a) => diagram(a),
        Command::Distance(a) => distance(a),
        Command::Decide(a) => decide(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::StabilityHarness(a) => stability_harness(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.tag, f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}
