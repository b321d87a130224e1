//! Slicing the two-parameter filtration along admissible lines.
//!
//! On a line `s ↦ s·l + b` with `l₁, l₂ > 0`, the quadrant below `s·l + b`
//! contains a point `w` exactly when `max((w₁-b₁)/l₁, (w₂-b₂)/l₂) <= s`, so the
//! two-parameter ranks along the line are the one-parameter ranks of that
//! scalar function, weighted by `min(l₁, l₂)`.

use crate::curve::SampledCurve;
use crate::error::{CurveSigError, Result};
use crate::geometry::Point;
use crate::persistence::{circle_diagram, diagram_rank, PersistenceDiagram};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleLine {
    /// Unit direction with both components positive.
    pub l: (f64, f64),
    /// Offset; the second component is always the negated first.
    pub b: (f64, f64),
}

impl AdmissibleLine {
    /// Line with direction angle `phi ∈ (0, π/2)` and offset `(beta, -beta)`.
    pub fn new(phi: f64, beta: f64) -> Result<Self> {
        if !(phi > 0.0 && phi < FRAC_PI_2) || !beta.is_finite() {
            return Err(CurveSigError::InvalidQuery(format!(
                "admissible lines need angle in (0, pi/2) and finite offset, got {phi}, {beta}"
            )));
        }
        let (s, c) = phi.sin_cos();
        Ok(Self {
            l: (c, s),
            b: (beta, -beta),
        })
    }

    pub fn diagonal() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            l: (h, h),
            b: (0.0, 0.0),
        }
    }

    pub fn weight(&self) -> f64 {
        self.l.0.min(self.l.1)
    }

    pub fn point_at(&self, s: f64) -> Point {
        Point::new(s * self.l.0 + self.b.0, s * self.l.1 + self.b.1)
    }

    fn coords(&self, p: Point) -> (f64, f64) {
        ((p.x - self.b.0) / self.l.0, (p.y - self.b.1) / self.l.1)
    }

    /// Weighted filtration value of a single point.
    pub fn value(&self, p: Point) -> f64 {
        let (g1, g2) = self.coords(p);
        self.weight() * g1.max(g2)
    }
}

/// Finite family of admissible lines: `k` directions strictly inside
/// `(0, π/2)` times `m` offsets spread evenly over `[-b, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineGrid {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "B")]
    pub b: f64,
}

impl LineGrid {
    pub fn new(k: usize, m: usize, b: f64) -> Result<Self> {
        if k == 0 || m == 0 || !(b > 0.0) || !b.is_finite() {
            return Err(CurveSigError::InvalidQuery(format!(
                "line grid needs K >= 1, M >= 1, B > 0; got {k}, {m}, {b}"
            )));
        }
        Ok(Self { k, m, b })
    }

    /// Grid whose offset range is `2 * max |coordinate| + 1` over all curves.
    pub fn for_curves<'a>(
        k: usize,
        m: usize,
        curves: impl IntoIterator<Item = &'a SampledCurve>,
    ) -> Result<Self> {
        let r = curves
            .into_iter()
            .map(|c| c.max_abs_coordinate())
            .fold(0.0, f64::max);
        Self::new(k, m, 2.0 * r + 1.0)
    }

    pub fn directions(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.k).map(move |i| std::f64::consts::PI * i as f64 / (2.0 * (self.k + 1) as f64))
    }

    pub fn offsets(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |j| {
            if self.m == 1 {
                0.0
            } else {
                -self.b + 2.0 * self.b * j as f64 / (self.m - 1) as f64
            }
        })
    }

    pub fn lines(&self) -> Vec<AdmissibleLine> {
        let offsets: Vec<f64> = self.offsets().collect();
        self.directions()
            .flat_map(|phi| {
                offsets
                    .iter()
                    .map(move |&beta| AdmissibleLine::new(phi, beta).unwrap())
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.k * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid whose lines include every line of `self` (`K -> 2K+1`, `M -> 2M-1`).
    pub fn refine(&self) -> Self {
        Self {
            k: 2 * self.k + 1,
            m: (2 * self.m).saturating_sub(1).max(1),
            b: self.b,
        }
    }
}

/// Weighted filtration value at every vertex.
pub fn reduce(curve: &SampledCurve, line: &AdmissibleLine) -> Vec<f64> {
    curve.vertices().iter().map(|&p| line.value(p)).collect()
}

/// The reduced function along the whole polyline as a piecewise-linear profile.
///
/// Along an edge the reduced function is the maximum of two affine functions,
/// so it has at most one breakpoint; it is inserted after the edge's start
/// vertex. Sublevel sets of this profile equal those of the polyline exactly.
pub fn reduce_profile(curve: &SampledCurve, line: &AdmissibleLine) -> Vec<f64> {
    let w = line.weight();
    let mut out = Vec::with_capacity(curve.len() * 2);
    for (a, b) in curve.edges() {
        let (a1, a2) = line.coords(a);
        out.push(w * a1.max(a2));
        // Orient the edge canonically so reversed traversals give identical kinks.
        let (a, b) = if (a.x, a.y) <= (b.x, b.y) {
            (a, b)
        } else {
            (b, a)
        };
        let (a1, a2) = line.coords(a);
        let (b1, b2) = line.coords(b);
        let d0 = a1 - a2;
        let d1 = b1 - b2;
        if (d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0) {
            let s = d0 / (d0 - d1);
            let g1 = a1 + s * (b1 - a1);
            let g2 = a2 + s * (b2 - a2);
            out.push(w * g1.max(g2));
        }
    }
    out
}

/// Degree-0 diagram of the curve restricted to `line`.
pub fn line_diagram(curve: &SampledCurve, line: &AdmissibleLine) -> PersistenceDiagram {
    circle_diagram(&reduce_profile(curve, line)).expect("curves have at least 8 finite vertices")
}

/// Persistent Betti number at `(s·l + b, t·l + b)` read off the line's diagram.
pub fn rank_via_line(curve: &SampledCurve, line: &AdmissibleLine, s: f64, t: f64) -> Result<usize> {
    if !(s < t) {
        return Err(CurveSigError::InvalidQuery(format!(
            "need s < t, got s = {s}, t = {t}"
        )));
    }
    let w = line.weight();
    diagram_rank(&line_diagram(curve, line), w * s, w * t)
}
