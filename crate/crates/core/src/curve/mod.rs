//! Closed sampled curves, the reflection group acting on them, and the
//! validity checks that gate the rest of the pipeline.

mod corpus;
mod genericity;

pub use corpus::{generate, perturb_smooth, CorpusKind, CorpusParams};
pub use genericity::{check_generic, DoublePoint, GenericityReport, GenericityTolerances};

use crate::error::{CurveSigError, Result};
use crate::geometry::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const MIN_SAMPLES: usize = 8;

/// Closed polyline sampled at uniformly spaced parameters `2*pi*i/N`.
///
/// The last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    vertices: Vec<Point>,
}

impl SampledCurve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let curve = Self::new_unchecked(vertices);
        curve.validate()?;
        Ok(curve)
    }

    /// Builds a curve without checking invariants. Every operation that relies on
    /// positive edge lengths re-checks and reports `DegenerateCurve`.
    pub fn new_unchecked(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n < MIN_SAMPLES {
            return Err(CurveSigError::InvalidCurve(format!(
                "need at least {MIN_SAMPLES} samples, got {n}"
            )));
        }
        if let Some(i) = self.vertices.iter().position(|p| !p.is_finite()) {
            return Err(CurveSigError::InvalidCurve(format!(
                "vertex {i} is not finite"
            )));
        }
        self.check_edges()
    }

    pub(crate) fn check_edges(&self) -> Result<()> {
        match (0..self.len()).find(|&i| self.edge(i).0 == self.edge(i).1) {
            Some(edge) => Err(CurveSigError::DegenerateCurve { edge }),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.len()]
    }

    /// Endpoints of edge `i`, running from vertex `i` to vertex `i + 1 (mod N)`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    /// Parameter step `2*pi/N`.
    pub fn step(&self) -> f64 {
        TAU / self.len() as f64
    }

    /// Parameter value of vertex `i`.
    pub fn theta(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    /// Point of the piecewise-linear interpolant at fractional index `s` in [0, N).
    pub fn point_at(&self, s: f64) -> Point {
        let n = self.len() as f64;
        let s = s.rem_euclid(n);
        let i = s.floor() as usize % self.len();
        let frac = s - s.floor();
        let (a, b) = self.edge(i);
        a + (b - a) * frac
    }

    /// Central-difference tangent at vertex `i`.
    pub fn vertex_tangent(&self, i: usize) -> Point {
        let n = self.len();
        self.vertex(i + 1) - self.vertex(i + n - 1)
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox_of(self.vertices.iter().copied())
    }

    pub fn max_abs_coordinate(&self) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.x.abs().max(p.y.abs()))
            .fold(0.0, f64::max)
    }

    pub fn translate(&self, by: Point) -> SampledCurve {
        self.map(|p| p + by)
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> SampledCurve {
        SampledCurve::new_unchecked(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// Max over vertices of the Euclidean distance to the same-index vertex of `other`.
    pub fn sup_distance(&self, other: &SampledCurve) -> f64 {
        assert_eq!(self.len(), other.len(), "sample counts differ");
        self.vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| a.dist(*b))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn bbox_of(points: impl Iterator<Item = Point>) -> (Point, Point) {
    points.fold(
        (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    )
}

/// An element of the group generated by the two coordinate-axis reflections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reflection {
    Id,
    /// `(x, y) -> (-x, y)`
    S1,
    /// `(x, y) -> (x, -y)`
    S2,
    S1S2,
}

impl Reflection {
    pub const ALL: [Reflection; 4] = [
        Reflection::Id,
        Reflection::S1,
        Reflection::S2,
        Reflection::S1S2,
    ];

    fn flips(self) -> (bool, bool) {
        match self {
            Reflection::Id => (false, false),
            Reflection::S1 => (true, false),
            Reflection::S2 => (false, true),
            Reflection::S1S2 => (true, true),
        }
    }

    fn from_flips(fx: bool, fy: bool) -> Self {
        match (fx, fy) {
            (false, false) => Reflection::Id,
            (true, false) => Reflection::S1,
            (false, true) => Reflection::S2,
            (true, true) => Reflection::S1S2,
        }
    }

    pub fn apply(self, p: Point) -> Point {
        let (fx, fy) = self.flips();
        Point::new(if fx { -p.x } else { p.x }, if fy { -p.y } else { p.y })
    }

    /// `self ∘ other`.
    pub fn compose(self, other: Reflection) -> Reflection {
        let (ax, ay) = self.flips();
        let (bx, by) = other.flips();
        Reflection::from_flips(ax ^ bx, ay ^ by)
    }

    pub fn name(self) -> &'static str {
        match self {
            Reflection::Id => "id",
            Reflection::S1 => "s1",
            Reflection::S2 => "s2",
            Reflection::S1S2 => "s1s2",
        }
    }
}

impl std::str::FromStr for Reflection {
    type Err = CurveSigError;

    fn from_str(s: &str) -> Result<Self> {
        Reflection::ALL
            .into_iter()
            .find(|r| r.name() == s.to_ascii_lowercase())
            .ok_or_else(|| CurveSigError::Parse(format!("unknown reflection '{s}'")))
    }
}

impl std::fmt::Display for Reflection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn reflect(curve: &SampledCurve, s: Reflection) -> SampledCurve {
    curve.map(|p| s.apply(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Self> {
        match sign {
            1 => Some(Orientation::Preserving),
            -1 => Some(Orientation::Reversing),
            _ => None,
        }
    }
}

/// Discrete reparameterization: output vertex `i` is input vertex
/// `(orientation * i + shift) mod N`.
pub fn reparameterize(curve: &SampledCurve, shift: i64, orientation: Orientation) -> SampledCurve {
    let n = curve.len() as i64;
    let o = orientation.sign();
    let vertices = (0..n)
        .map(|i| curve.vertices[(o * i + shift).rem_euclid(n) as usize])
        .collect();
    SampledCurve::new_unchecked(vertices)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassBoundReport {
    pub k: f64,
    pub radius_ok: bool,
    pub length_ok: bool,
    pub curvature_ok: bool,
    pub measured_radius: f64,
    pub measured_length: f64,
    pub max_curvature: f64,
    /// Stability of genericity under small C¹ perturbations cannot be decided
    /// from one sample and is never evaluated.
    pub neighborhood_genericity_checked: bool,
}

/// Reciprocal circumradius of the triangle `abc`; 0 for collinear triples.
pub fn discrete_curvature(a: Point, b: Point, c: Point) -> f64 {
    let twice_area = (b - a).cross(c - a).abs();
    if twice_area == 0.0 {
        return 0.0;
    }
    2.0 * twice_area / (a.dist(b) * b.dist(c) * c.dist(a))
}

/// Radius, length and curvature bounds of the class of curves bounded by `k`.
pub fn check_class_bound(curve: &SampledCurve, k: f64) -> Result<ClassBoundReport> {
    if !(k > 0.0) {
        return Err(CurveSigError::InvalidQuery(format!(
            "k must be positive, got {k}"
        )));
    }
    curve.validate()?;
    let n = curve.len();
    let measured_radius = curve.vertices.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let measured_length: f64 = curve.edges().map(|(a, b)| a.dist(b)).sum();
    let max_curvature = (0..n)
        .map(|i| {
            discrete_curvature(
                curve.vertex(i + n - 1),
                curve.vertex(i),
                curve.vertex(i + 1),
            )
        })
        .fold(0.0, f64::max);
    Ok(ClassBoundReport {
        k,
        radius_ok: measured_radius <= k,
        length_ok: measured_length <= k,
        curvature_ok: max_curvature <= k,
        measured_radius,
        measured_length,
        max_curvature,
        neighborhood_genericity_checked: false,
    })
}
