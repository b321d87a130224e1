//! Deterministic curve generators: basic shapes, random generic curves, and
//! constructed pairs that exhibit the failure modes of unaugmented or
//! non-generic signatures.

use super::{check_generic, GenericityTolerances, SampledCurve, MIN_SAMPLES};
use crate::error::{CurveSigError, Result};
use crate::geometry::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::str::FromStr;

const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusKind {
    Circle,
    Ellipse,
    /// Limaçon `r = 1/2 + cos θ`, one clean self-crossing at the origin.
    Limacon,
    /// Smooth random trigonometric polynomial, rejection-sampled until generic.
    RandomGeneric,
    /// Lens whose lower side bows far to the lower right.
    Fig2AnalogA,
    /// Same lens with a shallower lower bow. Both sides of either lens are
    /// monotone up-right arcs, so the identity-frame signatures agree exactly.
    Fig2AnalogB,
    /// Two loops, one above and one below, touching tangentially at the origin
    /// with fourth-order contact.
    Fig3AnalogA,
    /// As `Fig3AnalogA` with the lower loop stretched by a relative 2e-4.
    Fig3AnalogB,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 8] = [
        CorpusKind::Circle,
        CorpusKind::Ellipse,
        CorpusKind::Limacon,
        CorpusKind::RandomGeneric,
        CorpusKind::Fig2AnalogA,
        CorpusKind::Fig2AnalogB,
        CorpusKind::Fig3AnalogA,
        CorpusKind::Fig3AnalogB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorpusKind::Circle => "circle",
            CorpusKind::Ellipse => "ellipse",
            CorpusKind::Limacon => "limacon",
            CorpusKind::RandomGeneric => "random-generic",
            CorpusKind::Fig2AnalogA => "fig2-analog-a",
            CorpusKind::Fig2AnalogB => "fig2-analog-b",
            CorpusKind::Fig3AnalogA => "fig3-analog-a",
            CorpusKind::Fig3AnalogB => "fig3-analog-b",
        }
    }
}

impl FromStr for CorpusKind {
    type Err = CurveSigError;

    fn from_str(s: &str) -> Result<Self> {
        CorpusKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CurveSigError::Parse(format!("unknown curve kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusParams {
    pub radius: f64,
    pub semi_axes: (f64, f64),
    /// Counterclockwise rotation of the ellipse, radians.
    pub rotation: f64,
    pub center: Point,
    /// Highest harmonic of the random trigonometric polynomial.
    pub harmonics: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        Self {
            radius: 1.0,
            semi_axes: (2.0, 1.0),
            rotation: 0.0,
            center: Point::new(0.0, 0.0),
            harmonics: 4,
        }
    }
}

/// Generates a curve of the given kind. Output depends only on the arguments.
pub fn generate(
    kind: CorpusKind,
    samples: usize,
    seed: u64,
    params: &CorpusParams,
) -> Result<SampledCurve> {
    if samples < MIN_SAMPLES {
        return Err(CurveSigError::InvalidCurve(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let n = samples;
    let c = params.center;
    let curve = match kind {
        CorpusKind::Circle => sample(n, |t| c + Point::new(t.cos(), t.sin()) * params.radius),
        CorpusKind::Ellipse => {
            let (a, b) = params.semi_axes;
            let (sr, cr) = params.rotation.sin_cos();
            sample(n, |t| {
                let p = Point::new(a * t.cos(), b * t.sin());
                c + Point::new(cr * p.x - sr * p.y, sr * p.x + cr * p.y)
            })
        }
        CorpusKind::Limacon => sample(n, |t| {
            let r = 0.5 + t.cos();
            c + Point::new(r * t.cos(), r * t.sin()) * params.radius
        }),
        CorpusKind::RandomGeneric => return random_generic(n, seed, params),
        CorpusKind::Fig2AnalogA => lens(n, -0.6),
        CorpusKind::Fig2AnalogB => lens(n, -0.2),
        CorpusKind::Fig3AnalogA => touching_loops(n, 1.0),
        CorpusKind::Fig3AnalogB => touching_loops(n, 1.0 + 2e-4),
    };
    SampledCurve::new(curve)
}

fn sample(n: usize, f: impl Fn(f64) -> Point) -> Vec<Point> {
    (0..n).map(|i| f(TAU * i as f64 / n as f64)).collect()
}

fn random_generic(n: usize, seed: u64, params: &CorpusParams) -> Result<SampledCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let harmonics = params.harmonics.max(1);
    for _ in 0..MAX_ATTEMPTS {
        // (cos kθ, sin kθ) coefficients for x and y, decaying like 1/k.
        let coeffs: Vec<[f64; 4]> = (1..=harmonics)
            .map(|k| {
                let scale = 0.35 / k as f64;
                [(); 4].map(|_| rng.gen_range(-1.0..1.0) * scale)
            })
            .collect();
        let pts = sample(n, |t| {
            let mut p = Point::new(t.cos(), t.sin()) * params.radius;
            for (k, [xc, xs, yc, ys]) in coeffs.iter().enumerate() {
                let (s, c) = ((k + 1) as f64 * t).sin_cos();
                p = p + Point::new(xc * c + xs * s, yc * c + ys * s) * params.radius;
            }
            params.center + p
        });
        let curve = SampledCurve::new_unchecked(pts);
        if curve.validate().is_err() {
            continue;
        }
        let tol = GenericityTolerances::default_for(&curve);
        if check_generic(&curve, tol.tol_speed, tol.tol_angle)?.is_generic {
            return Ok(curve);
        }
    }
    Err(CurveSigError::RejectionExhausted {
        attempts: MAX_ATTEMPTS,
        seed,
    })
}

/// Adds a smooth trigonometric displacement field whose largest Euclidean
/// length over the vertices is exactly `eps`.
pub fn perturb_smooth(curve: &SampledCurve, eps: f64, seed: u64) -> Result<SampledCurve> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(CurveSigError::InvalidQuery(format!(
            "perturbation size must be positive, got {eps}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<[f64; 4]> = (0..5)
        .map(|_| [(); 4].map(|_| rng.gen_range(-1.0..1.0)))
        .collect();
    let n = curve.len();
    let field: Vec<Point> = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            coeffs
                .iter()
                .enumerate()
                .fold(Point::new(0.0, 0.0), |acc, (k, [xc, xs, yc, ys])| {
                    let (s, c) = (k as f64 * t).sin_cos();
                    acc + Point::new(xc * c + xs * s, yc * c + ys * s)
                })
        })
        .collect();
    let peak = field.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let scale = eps / peak;
    SampledCurve::new(
        curve
            .vertices()
            .iter()
            .zip(&field)
            .map(|(&p, &d)| p + d * scale)
            .collect(),
    )
}

/// Closed lens from (-1,-1) to (1,1). The lower side has bow `lower_bow`
/// (negative bows toward the lower right), the upper side bow 0.6.
fn lens(n: usize, lower_bow: f64) -> Vec<Point> {
    // x = t - c*phi(t), y = t + c*phi(t) with phi = (1 - t^2)/2; both coordinates
    // strictly increase in t whenever |c| < 1.
    let arc = |t: f64, c: f64| {
        let phi = 0.5 * (1.0 - t * t);
        Point::new(t - c * phi, t + c * phi)
    };
    let n_low = n / 2;
    let n_up = n - n_low;
    let lower = (0..n_low).map(|i| arc(-1.0 + 2.0 * i as f64 / n_low as f64, lower_bow));
    let upper = (0..n_up).map(|j| arc(1.0 - 2.0 * j as f64 / n_up as f64, 0.6));
    lower.chain(upper).collect()
}

/// Upper loop `(sin τ, (1 - cos τ)^2 / 4)` then lower loop
/// `(sin τ, -stretch * (1 - cos τ)^2 / 4)`; both pass the origin moving in +x.
fn touching_loops(n: usize, stretch: f64) -> Vec<Point> {
    let n1 = n / 2;
    let n2 = n - n1;
    let lobe = |tau: f64, amp: f64| {
        let h = 1.0 - tau.cos();
        Point::new(tau.sin(), amp * 0.25 * h * h)
    };
    let upper = (0..n1).map(|i| lobe(TAU * i as f64 / n1 as f64, 1.0));
    let lower = (0..n2).map(|j| lobe(TAU * j as f64 / n2 as f64, -stretch));
    upper.chain(lower).collect()
}
