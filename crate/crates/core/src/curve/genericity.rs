use super::SampledCurve;
use crate::error::Result;
use crate::geometry::{line_angle, segment_intersection, Point, SegmentHit};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericityTolerances {
    /// Minimum edge length per unit parameter.
    pub tol_speed: f64,
    /// Minimum angle (radians) between the two tangent lines at a double point.
    pub tol_angle: f64,
}

impl GenericityTolerances {
    pub const DEFAULT_TOL_ANGLE: f64 = 1e-3;

    /// `tol_speed = 1e-6 * bbox diagonal`, `tol_angle = 1e-3`.
    pub fn default_for(curve: &SampledCurve) -> Self {
        let (lo, hi) = curve.bbox();
        Self {
            tol_speed: 1e-6 * lo.dist(hi),
            tol_angle: Self::DEFAULT_TOL_ANGLE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublePoint {
    pub edges: (usize, usize),
    pub at: Point,
    /// Angle between the two tangent lines, in [0, pi/2].
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityReport {
    pub is_immersion: bool,
    pub min_speed: f64,
    pub double_points: Vec<DoublePoint>,
    /// Pairs of non-adjacent edges overlapping along a common segment.
    pub overlapping_edges: Vec<(usize, usize)>,
    pub all_clean: bool,
    pub is_generic: bool,
}

impl GenericityReport {
    pub fn summary(&self) -> String {
        format!(
            "immersion={} double_points={} clean={} generic={}",
            self.is_immersion,
            self.double_points.len(),
            self.all_clean,
            self.is_generic
        )
    }
}

/// Discrete immersion and clean-double-point test.
///
/// Each intersection of non-adjacent edges is counted once by treating every
/// edge as half-open (its end vertex belongs to the next edge). A contact at a
/// vertex measures the tangent there by central difference.
pub fn check_generic(
    curve: &SampledCurve,
    tol_speed: f64,
    tol_angle: f64,
) -> Result<GenericityReport> {
    curve.check_edges()?;
    let n = curve.len();
    let step = curve.step();
    let min_speed = curve
        .edges()
        .map(|(a, b)| a.dist(b) / step)
        .fold(f64::INFINITY, f64::min);
    let is_immersion = min_speed >= tol_speed;

    let boxes: Vec<(Point, Point)> = curve
        .edges()
        .map(|(a, b)| {
            (
                Point::new(a.x.min(b.x), a.y.min(b.y)),
                Point::new(a.x.max(b.x), a.y.max(b.y)),
            )
        })
        .collect();

    let mut double_points = Vec::new();
    let mut overlapping_edges = Vec::new();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1.x < bj.0.x || bj.1.x < bi.0.x || bi.1.y < bj.0.y || bj.1.y < bi.0.y {
                continue;
            }
            let (p0, p1) = curve.edge(i);
            let (q0, q1) = curve.edge(j);
            match segment_intersection(p0, p1, q0, q1) {
                None => {}
                Some(SegmentHit::Overlap) => overlapping_edges.push((i, j)),
                Some(SegmentHit::Point { t, u, at }) => {
                    if t >= 1.0 || u >= 1.0 {
                        continue;
                    }
                    let ti = if t == 0.0 {
                        curve.vertex_tangent(i)
                    } else {
                        p1 - p0
                    };
                    let tj = if u == 0.0 {
                        curve.vertex_tangent(j)
                    } else {
                        q1 - q0
                    };
                    double_points.push(DoublePoint {
                        edges: (i, j),
                        at,
                        angle: line_angle(ti, tj),
                    });
                }
            }
        }
    }

    let all_clean =
        overlapping_edges.is_empty() && double_points.iter().all(|d| d.angle >= tol_angle);
    Ok(GenericityReport {
        is_immersion,
        min_speed,
        double_points,
        overlapping_edges,
        all_clean,
        is_generic: is_immersion && all_clean,
    })
}
